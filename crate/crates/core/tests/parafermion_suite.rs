use num_complex::Complex64;
use rcmlab_core::domain::{box_domain, special_domain, CornerClosing, Point, SpecialKind};
use rcmlab_core::enumerate::Sequential;
use rcmlab_core::measure::{critical_p, Weights};
use rcmlab_core::parafermion::{
    boundary_contour, contour_sum, contour_where, enumerable_dobrushin_domains, observable_exact, sigma,
    split_boundary_edges, vertex_relation_residual, DobrushinDomain, ObservableField,
};

const QS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

fn critical() -> Vec<Weights> {
    QS.iter().map(|&q| Weights::critical(q).unwrap()).collect()
}

fn worst_vertex_residual(dd: &DobrushinDomain, f: &ObservableField) -> f64 {
    boundary_contour(dd)
        .unwrap()
        .interior
        .iter()
        .map(|&v| vertex_relation_residual(dd, f, dd.medial.vertices()[v as usize]).unwrap().norm())
        .fold(0.0, f64::max)
}

#[test]
fn small_domains_satisfy_the_identities() {
    let (suite, _) = enumerable_dobrushin_domains(13);
    assert!(suite.len() > 100);
    let params = critical();
    let off: Vec<Weights> = QS.iter().map(|&q| Weights::new(critical_p(q) + 0.05, q).unwrap()).collect();
    let mut off_max = [0.0f64; QS.len()];
    for dd in &suite {
        let c = boundary_contour(dd).unwrap();
        for f in observable_exact(dd, &params, &Sequential).unwrap() {
            assert!(contour_sum(&f, &c).unwrap().norm() < 1e-12);
            assert!(worst_vertex_residual(dd, &f) < 1e-12);
            assert!(f.values.iter().all(|z| z.norm() <= 1.0 + 1e-12));
        }
        for (i, f) in observable_exact(dd, &off, &Sequential).unwrap().iter().enumerate() {
            off_max[i] = off_max[i].max(worst_vertex_residual(dd, f));
        }
    }
    // At σ = 1 the sum η(e) e^{iW} over a closed contour cancels inside every
    // configuration, so q = 4 satisfies the relation at every p.
    let (control, q4) = off_max.split_at(QS.len() - 1);
    assert!(control.iter().all(|&m| m > 1e-6), "{off_max:?}");
    assert!(q4[0] < 1e-12);
}

#[test]
fn diagonal_contour_on_box() {
    // a and b at the bottom-right and top-left corners; the contour surrounds
    // the medial vertices strictly below x = -y.
    let dd = DobrushinDomain::new(box_domain(1, Point::new(0, 0)).unwrap(), Point::new(1, -1), Point::new(-1, 1)).unwrap();
    let c = contour_where(&dd, |m| m.x + m.y < 0).unwrap();
    assert!(c.edges.len() < boundary_contour(&dd).unwrap().edges.len());
    for f in observable_exact(&dd, &critical(), &Sequential).unwrap() {
        assert!(contour_sum(&f, &c).unwrap().norm() < 1e-12, "q={}", f.q);
    }
}

/// On corner domains the β-edges come in pairs whose contributions have equal
/// modulus, and all contributions η(e)F(e) on β point in one of four
/// directions, two of them e^{±iσπ/2} apart from the other two.
#[test]
fn beta_edges_pair_up_on_corner_domains() {
    for (m, ell) in [(2, 1), (2, 2), (3, 2), (3, 3)] {
        let (d, marks) = special_domain(SpecialKind::Corner { m, ell, closing: CornerClosing::Staircase }).unwrap();
        let (a, b) = marks.unwrap();
        let dd = DobrushinDomain::new(d, a, b).unwrap();
        let c = boundary_contour(&dd).unwrap();
        let (_, beta) = split_boundary_edges(&dd, &c);
        assert!(!beta.is_empty());
        let eta = |k: u32| c.edges.iter().find(|&&(e, _)| e == k).unwrap().1;
        for f in observable_exact(&dd, &critical(), &Sequential).unwrap() {
            let contrib: Vec<Complex64> = beta.iter().map(|&k| eta(k) * f.get(k)).filter(|z| z.norm() > 1e-12).collect();
            for (i, z) in contrib.iter().enumerate() {
                let partner = contrib.iter().enumerate().any(|(j, w)| j != i && (w.norm() - z.norm()).abs() < 1e-12);
                assert!(partner, "corner ({m},{ell}) q={}: {z} unpaired", f.q);
            }
            let mut dirs: Vec<f64> = Vec::new();
            for z in &contrib {
                let arg = z.arg();
                if !dirs.iter().any(|&d| angle_gap(d, arg) < 1e-9) {
                    dirs.push(arg);
                }
            }
            assert!(dirs.len() <= 4, "corner ({m},{ell}) q={}: directions {dirs:?}", f.q);
            let s = sigma(f.q).unwrap();
            let allowed = [0.0, (1.0 + s) * std::f64::consts::FRAC_PI_2, (1.0 - s) * std::f64::consts::FRAC_PI_2];
            for &x in &dirs {
                for &y in &dirs {
                    let gap = angle_gap(x, y);
                    let ok = allowed.iter().any(|&g| (gap - g).abs() < 1e-9)
                        || (gap - s * std::f64::consts::PI).abs() < 1e-9
                        || (gap - std::f64::consts::PI).abs() < 1e-9;
                    assert!(ok, "corner ({m},{ell}) q={}: gap {gap}", f.q);
                }
            }
        }
    }
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
