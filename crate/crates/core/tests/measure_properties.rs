mod common;

use common::events::{increasing_events, reach};
use common::kernels::{chayes_machta_tv, heat_bath_sweep_l1};
use proptest::prelude::*;
use rcmlab_core::connectivity::{clusters, has_crossing};
use rcmlab_core::domain::{all_domains, rectangle, Domain, Point, Quad};
use rcmlab_core::enumerate::{enumerate, exact_probability};
use rcmlab_core::measure::{BoundaryPartition, Configuration, Weights};

fn enumerable_domains() -> Vec<Domain> {
    let mut ds = all_domains(10);
    ds.push(rectangle(0, 0, 2, 2).unwrap());
    ds.push(rectangle(0, 0, 3, 2).unwrap());
    ds
}

#[test]
fn fkg_and_boundary_monotonicity() {
    for d in enumerable_domains() {
        let events = increasing_events(&d);
        let free = BoundaryPartition::free(&d);
        let wired = BoundaryPartition::wired(&d);
        for q in [1.0, 1.5, 2.0, 4.0] {
            let w = Weights::critical(q).unwrap();
            let m0 = enumerate(&d, &free, w).unwrap();
            let m1 = enumerate(&d, &wired, w).unwrap();
            let probs0: Vec<f64> = events.iter().map(|(_, a)| exact_probability(&m0, |c| a(c))).collect();
            for (i, (na, a)) in events.iter().enumerate() {
                let p1 = exact_probability(&m1, |c| a(c));
                assert!(p1 - probs0[i] >= -1e-12, "{na}: wired {p1} < free {}", probs0[i]);
                for (j, (nb, b)) in events.iter().enumerate().skip(i) {
                    let both = exact_probability(&m0, |c| a(c) && b(c));
                    assert!(both - probs0[i] * probs0[j] >= -1e-12, "FKG fails for {na} & {nb} at q={q}");
                }
            }
        }
    }
}

#[test]
fn heat_bath_sweep_preserves_measure() {
    for d in all_domains(10) {
        for bc in [BoundaryPartition::free(&d), BoundaryPartition::wired(&d)] {
            for q in [1.0, 1.5, 2.0, 3.0, 4.0] {
                let l1 = heat_bath_sweep_l1(&d, &bc, Weights::critical(q).unwrap());
                assert!(l1 < 1e-10, "q={q}: {l1}");
            }
        }
    }
}

#[test]
fn chayes_machta_matches_enumeration() {
    let d = rectangle(0, 0, 1, 1).unwrap();
    let tv = chayes_machta_tv(&d, &BoundaryPartition::free(&d), Weights::critical(2.0).unwrap(), 200_000, 3);
    assert!(tv < 0.01, "{tv}");
}

/// Left-right quad of [0, n+1] × [0, n] and the bottom-top quad of its dual,
/// drawn as the primal rectangle [0, n] × [0, n+1].
fn dual_pair(n: i32) -> (Quad, Quad, Vec<Option<usize>>) {
    let d = rectangle(0, 0, n + 1, n).unwrap();
    let primal =
        Quad::new(d.clone(), [Point::new(0, n), Point::new(0, 0), Point::new(n + 1, 0), Point::new(n + 1, n)]).unwrap();
    let dd = rectangle(0, 0, n, n + 1).unwrap();
    // Primal (x,y)-(x+1,y) crosses dual (x,y)-(x,y+1); primal (x,y)-(x,y+1)
    // crosses dual (x-1,y+1)-(x,y+1).
    let map: Vec<Option<usize>> = (0..dd.num_edges() as u32)
        .map(|e| {
            let (p, q) = dd.edge_points(e);
            if p.x == q.x {
                d.edge_between(Point::new(p.x, p.y), Point::new(p.x + 1, p.y))
            } else {
                d.edge_between(Point::new(q.x, p.y - 1), Point::new(q.x, p.y))
            }
            .map(|e| e as usize)
        })
        .collect();
    let dual = Quad::new(dd, [Point::new(0, 0), Point::new(n, 0), Point::new(n, n + 1), Point::new(0, n + 1)]).unwrap();
    (primal, dual, map)
}

fn dual_config(cfg: &Configuration, map: &[Option<usize>]) -> Configuration {
    Configuration::from_fn(map.len(), |e| map[e].is_some_and(|pe| !cfg.get(pe)))
}

#[test]
fn crossing_duality_exhaustive() {
    for n in 1..=2 {
        let (primal, dual, map) = dual_pair(n);
        let m = primal.domain().num_edges();
        for word in 0u64..1 << m {
            let cfg = Configuration::from_word(word, m);
            assert_ne!(has_crossing(&primal, &cfg), has_crossing(&dual, &dual_config(&cfg, &map)));
        }
    }
}

#[test]
fn bernoulli_crossing_is_one_half() {
    let (primal, _, _) = dual_pair(2);
    let d = primal.domain();
    let em = enumerate(d, &BoundaryPartition::free(d), Weights::critical(1.0).unwrap()).unwrap();
    let p = exact_probability(&em, |c| has_crossing(&primal, c));
    assert!((p - 0.5).abs() < 1e-12, "{p}");
}

fn same_partition(a: &[u32], b: &[u32]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn crossing_duality_n3(bits in proptest::collection::vec(any::<bool>(), 31)) {
        let (primal, dual, map) = dual_pair(3);
        let cfg = Configuration::from_fn(primal.domain().num_edges(), |e| bits[e]);
        prop_assert_ne!(has_crossing(&primal, &cfg), has_crossing(&dual, &dual_config(&cfg, &map)));
    }

    #[test]
    fn clusters_match_flood_fill(shape in 0usize..40, seed in any::<u64>(), wired in any::<bool>()) {
        let ds = all_domains(12);
        let d = &ds[shape % ds.len()];
        let cfg = Configuration::from_fn(d.num_edges(), |e| (seed.rotate_left(e as u32 * 7) ^ seed >> 3) & 1 == 1);
        let bc = if wired { BoundaryPartition::wired(d) } else { BoundaryPartition::free(d) };
        let lab = clusters(d, &cfg, &bc).unwrap();
        let oracle: Vec<u32> = (0..d.num_vertices() as u32)
            .map(|v| {
                let mut start = vec![v];
                let r = reach(d, &cfg, &start);
                if wired && d.boundary().iter().any(|&b| r[b as usize]) {
                    start.extend_from_slice(d.boundary());
                }
                let r = reach(d, &cfg, &start);
                (0..d.num_vertices() as u32).find(|&u| r[u as usize]).unwrap()
            })
            .collect();
        prop_assert!(same_partition(&lab.primal, &oracle));
    }

    #[test]
    fn crossing_is_increasing(bits in proptest::collection::vec(any::<bool>(), 17), extra in 0usize..17) {
        let (primal, _, _) = dual_pair(2);
        let cfg = Configuration::from_fn(17, |e| bits[e]);
        let mut more = cfg.clone();
        more.set(extra, true);
        prop_assert!(!has_crossing(&primal, &cfg) || has_crossing(&primal, &more));
    }
}
