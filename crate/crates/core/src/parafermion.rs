//! Loop representation, exploration path and the parafermionic observable.
//!
//! Windings are kept as integer counts of quarter turns (left minus right);
//! the angle is `π/2` times that count.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::domain::{all_domains, Annulus, Domain, Point};
use crate::enumerate::{Executor, KahanSum, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::measure::{cluster_count_with, BoundaryPartition, Configuration, Weights};
use crate::medial::MedialGraph;
use crate::unionfind::UnionFind;

/// σ ∈ [0, 1] with sin(σπ/2) = √q/2.
pub fn sigma(q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 4.0) {
        return Err(Error::OutOfRange(q));
    }
    Ok(libm::asin(libm::sqrt(q) / 2.0) / FRAC_PI_2)
}

/// A domain with marks a, b, its Dobrushin boundary partition and medial graph.
#[derive(Clone, Debug)]
pub struct DobrushinDomain {
    pub domain: Domain,
    pub a: Point,
    pub b: Point,
    pub bc: BoundaryPartition,
    pub medial: MedialGraph,
}

impl DobrushinDomain {
    pub fn new(domain: Domain, a: Point, b: Point) -> Result<DobrushinDomain> {
        let bc = BoundaryPartition::dobrushin(&domain, a, b)?;
        let medial = MedialGraph::new(&domain, Some((a, b)))?;
        Ok(DobrushinDomain { domain, a, b, bc, medial })
    }

    pub fn e_a(&self) -> u32 {
        self.medial.marks().unwrap().e_a
    }

    pub fn e_b(&self) -> u32 {
        self.medial.marks().unwrap().e_b
    }

    /// Domain edges outside the wired arc.
    pub fn free_edges(&self) -> &[u32] {
        &self.medial.marks().unwrap().free_edges
    }

    /// A configuration on E with the wired arc open and the free edges given
    /// by the low bits of `word`.
    pub fn config_from_free_word(&self, word: u64) -> Configuration {
        let mk = self.medial.marks().unwrap();
        let mut c = Configuration::empty(self.domain.num_edges());
        for &e in &mk.wired_edges {
            c.set(e as usize, true);
        }
        for (j, &e) in mk.free_edges.iter().enumerate() {
            c.set(e as usize, (word >> j) & 1 == 1);
        }
        c
    }

    /// Whether medial vertex `v` is the midpoint of an edge of E \ (ba).
    pub fn is_free_vertex(&self, v: u32) -> bool {
        let mk = self.medial.marks().unwrap();
        self.medial.primal_edge(v).is_some_and(|e| !mk.is_wired_edge[e as usize])
    }
}

/// Every Dobrushin domain with at most `max_edges` edges, one per class under
/// translations and quarter-turn rotations (which carry γ, its windings and
/// the contour sums along up to a unit phase). Mark pairs the medial
/// construction rejects are skipped; their number is returned alongside.
pub fn enumerable_dobrushin_domains(max_edges: usize) -> (Vec<DobrushinDomain>, usize) {
    fn rotate(p: Point) -> Point {
        Point::new(-p.y, p.x)
    }
    // Faces, a and b translated so the faces start at the origin.
    fn key(faces: &[Point], a: Point, b: Point) -> (Vec<Point>, Point, Point) {
        let x0 = faces.iter().map(|f| f.x).min().unwrap();
        let y0 = faces.iter().map(|f| f.y).min().unwrap();
        let mut fs: Vec<Point> = faces.iter().map(|f| Point::new(f.x - x0, f.y - y0)).collect();
        fs.sort_unstable();
        (fs, Point::new(a.x - x0, a.y - y0), Point::new(b.x - x0, b.y - y0))
    }
    let mut out = Vec::new();
    let mut rejected = 0;
    for d in all_domains(max_edges) {
        let pts = d.boundary_loop().points().to_vec();
        for &a in &pts {
            for &b in &pts {
                let own = key(d.faces(), a, b);
                let (mut faces, mut ra, mut rb) = (d.faces().to_vec(), a, b);
                let mut canonical = true;
                for _ in 0..3 {
                    // The face with lower-left corner f turns into the one with
                    // lower-left corner (-(f.y + 1), f.x).
                    faces = faces.iter().map(|f| Point::new(-(f.y + 1), f.x)).collect();
                    ra = rotate(ra);
                    rb = rotate(rb);
                    if key(&faces, ra, rb) < own {
                        canonical = false;
                        break;
                    }
                }
                if !canonical {
                    continue;
                }
                match DobrushinDomain::new(d.clone(), a, b) {
                    Ok(dd) => out.push(dd),
                    Err(_) => rejected += 1,
                }
            }
        }
    }
    (out, rejected)
}

/// The exploration path γ from e_a to e_b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorationPath {
    pub edges: Vec<u32>,
    /// Quarter turns from each edge of the path to e_b.
    pub windings: Vec<i32>,
}

impl ExplorationPath {
    pub fn position(&self, e: u32) -> Option<usize> {
        self.edges.iter().position(|&k| k == e)
    }
}

/// The exploration path and the closed loops of a configuration.
#[derive(Clone, Debug)]
pub struct LoopRepresentation {
    pub path: ExplorationPath,
    pub loops: Vec<Vec<u32>>,
    /// Turn taken at the head of every medial edge (+1 left, -1 right), 0 for e_b.
    pub turns: Vec<i8>,
}

/// Follows γ from e_a. The configuration lives on E; bits of the wired arc
/// are ignored.
pub fn exploration_path(dd: &DobrushinDomain, config: &Configuration) -> ExplorationPath {
    let mut edges = Vec::new();
    let mut turns = Vec::new();
    trace_path(&dd.medial, dd.e_a(), dd.e_b(), config, &mut edges, &mut turns);
    let mut windings = vec![0i32; edges.len()];
    for i in (0..edges.len().saturating_sub(1)).rev() {
        windings[i] = windings[i + 1] + turns[i] as i32;
    }
    ExplorationPath { edges, windings }
}

fn trace_path(mg: &MedialGraph, e_a: u32, e_b: u32, config: &Configuration, edges: &mut Vec<u32>, turns: &mut Vec<i8>) {
    edges.clear();
    turns.clear();
    let mut k = e_a;
    edges.push(k);
    while k != e_b {
        let (next, t) = mg.next_edge(config, k);
        let n = next.expect("exploration path left the medial graph");
        turns.push(t as i8);
        edges.push(n);
        k = n;
    }
}

pub fn loop_representation(dd: &DobrushinDomain, config: &Configuration) -> LoopRepresentation {
    let mg = &dd.medial;
    let path = exploration_path(dd, config);
    let mut turns = vec![0i8; mg.num_edges()];
    let mut seen = vec![false; mg.num_edges()];
    for &k in &path.edges {
        seen[k as usize] = true;
        if k != dd.e_b() {
            turns[k as usize] = mg.next_edge(config, k).1 as i8;
        }
    }
    let mut loops = Vec::new();
    for start in 0..mg.num_edges() as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut lp = Vec::new();
        let mut k = start;
        loop {
            seen[k as usize] = true;
            lp.push(k);
            let (next, t) = mg.next_edge(config, k);
            turns[k as usize] = t as i8;
            match next {
                Some(n) if n == start => break,
                Some(n) if !seen[n as usize] => k = n,
                _ => panic!("loop representation is not a partition of the medial edges"),
            }
        }
        loops.push(lp);
    }
    LoopRepresentation { path, loops, turns }
}

/// W_γ(e, e_b) as a multiple of π/2.
pub fn winding_quarter_turns(path: &ExplorationPath, e: u32) -> Result<i32> {
    path.position(e).map(|i| path.windings[i]).ok_or(Error::NotOnPath)
}

/// W_γ(e, e_b) in radians.
pub fn winding(path: &ExplorationPath, e: u32) -> Result<f64> {
    winding_quarter_turns(path, e).map(|w| w as f64 * FRAC_PI_2)
}

/// Complex value per medial edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableField {
    pub q: f64,
    pub p: f64,
    pub sigma: f64,
    pub values: Vec<Complex64>,
}

impl ObservableField {
    pub fn get(&self, e: u32) -> Complex64 {
        self.values[e as usize]
    }
}

#[derive(Clone, Copy, Default)]
struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

const CHUNK_BITS: u32 = 12;

/// F(e) = E[e^{iσW} 1{e ∈ γ}] by summation over {0,1}^{E \ (ba)}, for
/// several parameter pairs at once. Clusters and γ are computed once per
/// configuration.
pub fn observable_exact<E: Executor>(dd: &DobrushinDomain, params: &[Weights], exec: &E) -> Result<Vec<ObservableField>> {
    observable_exact_capped(dd, params, DEFAULT_CAP, exec)
}

pub fn observable_exact_capped<E: Executor>(
    dd: &DobrushinDomain,
    params: &[Weights],
    cap: usize,
    exec: &E,
) -> Result<Vec<ObservableField>> {
    let m = dd.free_edges().len();
    if m > cap.min(32) {
        return Err(Error::CapExceeded { edges: m, cap });
    }
    let sigmas = params.iter().map(|w| sigma(w.q())).collect::<Result<Vec<_>>>()?;
    let mg = &dd.medial;
    let n_med = mg.num_edges();
    let nv = dd.domain.num_vertices();
    let max_w = n_med as i32;
    // Unnormalised weights x^n q^k and phases e^{iσπw/2} by table lookup.
    let xpow: Vec<Vec<f64>> =
        params.iter().map(|w| (0..=m).map(|n| libm::pow(w.edge_factor(), n as f64)).collect()).collect();
    let qpow: Vec<Vec<f64>> = params.iter().map(|w| (0..=nv).map(|k| libm::pow(w.q(), k as f64)).collect()).collect();
    let phase: Vec<Vec<Complex64>> = sigmas
        .iter()
        .map(|&s| (-max_w..=max_w).map(|w| Complex64::from_polar(1.0, s * FRAC_PI_2 * w as f64)).collect())
        .collect();
    let total = 1u64 << m;
    let chunk = 1u64 << CHUNK_BITS.min(m as u32);
    let n_chunks = (total / chunk) as usize;
    let nq = params.len();
    let parts = exec.map(n_chunks, |c| {
        let mut uf = UnionFind::new(0);
        let mut z = vec![KahanSum::default(); nq];
        // Real weight sums per (parameter, edge, winding); the phases are
        // applied once per chunk.
        let span = 2 * max_w as usize + 1;
        let mut by_winding = vec![KahanSum::default(); nq * n_med * span];
        let (mut lo, mut hi) = (0i32, 0i32);
        let mut edges = Vec::new();
        let mut turns = Vec::new();
        let mut wts = vec![0.0; nq];
        let start = c as u64 * chunk;
        let mut cfg = dd.config_from_free_word(start);
        for i in start..start + chunk {
            if i != start {
                for (j, &e) in dd.free_edges().iter().enumerate() {
                    cfg.set(e as usize, (i >> j) & 1 == 1);
                }
            }
            let k = cluster_count_with(&dd.domain, &cfg, &dd.bc, &mut uf);
            let n = i.count_ones() as usize;
            for qi in 0..nq {
                wts[qi] = xpow[qi][n] * qpow[qi][k];
                z[qi].add(wts[qi]);
            }
            trace_path(mg, dd.e_a(), dd.e_b(), &cfg, &mut edges, &mut turns);
            let mut w = 0i32;
            for idx in (0..edges.len()).rev() {
                if idx + 1 < edges.len() {
                    w += turns[idx] as i32;
                }
                (lo, hi) = (lo.min(w), hi.max(w));
                let at = edges[idx] as usize * span + (w + max_w) as usize;
                for qi in 0..nq {
                    by_winding[qi * n_med * span + at].add(wts[qi]);
                }
            }
        }
        let mut acc = vec![ComplexSum::default(); nq * n_med];
        for (j, (slot, sums)) in acc.iter_mut().zip(by_winding.chunks(span)).enumerate() {
            let seen = (lo + max_w) as usize..=(hi + max_w) as usize;
            for (wi, s) in sums[seen.clone()].iter().enumerate().map(|(i, s)| (i + seen.start(), s)) {
                let v = s.value();
                if v != 0.0 {
                    slot.add(phase[j / n_med][wi] * v);
                }
            }
        }
        (z, acc)
    });
    let mut z = vec![KahanSum::default(); nq];
    let mut acc = vec![ComplexSum::default(); nq * n_med];
    for (pz, pacc) in parts {
        for qi in 0..nq {
            z[qi].add(pz[qi].value());
        }
        for (a, p) in acc.iter_mut().zip(pacc) {
            a.add(p.value());
        }
    }
    Ok((0..nq)
        .map(|qi| {
            let zq = z[qi].value();
            ObservableField {
                q: params[qi].q(),
                p: params[qi].p(),
                sigma: sigmas[qi],
                values: (0..n_med).map(|e| acc[qi * n_med + e].value() / zq).collect(),
            }
        })
        .collect())
}

/// Running Monte Carlo estimate of F from sampled configurations.
#[derive(Clone, Debug)]
pub struct ObservableEstimator {
    q: f64,
    p: f64,
    sigma: f64,
    sums: Vec<Complex64>,
    samples: u64,
    phase: Vec<Complex64>,
}

impl ObservableEstimator {
    pub fn new(dd: &DobrushinDomain, w: Weights) -> Result<ObservableEstimator> {
        let s = sigma(w.q())?;
        let n = dd.medial.num_edges() as i32;
        Ok(ObservableEstimator {
            q: w.q(),
            p: w.p(),
            sigma: s,
            sums: vec![Complex64::new(0.0, 0.0); n as usize],
            samples: 0,
            phase: (-n..=n).map(|k| Complex64::from_polar(1.0, s * FRAC_PI_2 * k as f64)).collect(),
        })
    }

    pub fn add(&mut self, dd: &DobrushinDomain, config: &Configuration) {
        let path = exploration_path(dd, config);
        let off = (self.phase.len() / 2) as i32;
        for (&e, &w) in path.edges.iter().zip(&path.windings) {
            self.sums[e as usize] += self.phase[(w + off) as usize];
        }
        self.samples += 1;
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn field(&self) -> ObservableField {
        let n = self.samples.max(1) as f64;
        ObservableField { q: self.q, p: self.p, sigma: self.sigma, values: self.sums.iter().map(|z| z / n).collect() }
    }
}

/// Medial edges with exactly one endpoint in a set of interior vertices,
/// each with its outward unit direction η.
#[derive(Clone, Debug)]
pub struct Contour {
    pub interior: Vec<u32>,
    pub edges: Vec<(u32, Complex64)>,
}

fn unit(dx: i32, dy: i32) -> Complex64 {
    Complex64::new(dx as f64, dy as f64) / core::f64::consts::SQRT_2
}

/// Builds C from Int(C). Every interior vertex must be the midpoint of an
/// edge of E \ (ba) with its four medial edges present.
pub fn contour_from_interior(dd: &DobrushinDomain, interior: &[Point]) -> Result<Contour> {
    let mg = &dd.medial;
    if interior.is_empty() {
        return Err(Error::InvalidContour);
    }
    let mut inside = vec![false; mg.num_vertices()];
    let mut ids = Vec::with_capacity(interior.len());
    for &m in interior {
        let v = mg.vertex_id(m).ok_or(Error::NotInterior)?;
        if !dd.is_free_vertex(v) || mg.degree(v) != 4 {
            return Err(Error::NotInterior);
        }
        if !inside[v as usize] {
            inside[v as usize] = true;
            ids.push(v);
        }
    }
    let mut edges = Vec::new();
    for (k, e) in mg.edges().iter().enumerate() {
        let t = inside[mg.vertex_id(e.tail).unwrap() as usize];
        let h = inside[mg.vertex_id(e.head).unwrap() as usize];
        if t && !h {
            edges.push((k as u32, unit(e.head.x - e.tail.x, e.head.y - e.tail.y)));
        } else if h && !t {
            edges.push((k as u32, unit(e.tail.x - e.head.x, e.tail.y - e.head.y)));
        }
    }
    if edges.is_empty() {
        return Err(Error::InvalidContour);
    }
    Ok(Contour { interior: ids, edges })
}

/// Int(C) = all midpoints of E \ (ba), so that C runs along the boundary of
/// the medial domain.
pub fn boundary_contour(dd: &DobrushinDomain) -> Result<Contour> {
    contour_where(dd, |_| true)
}

/// Int(C) = midpoints of E \ (ba) selected by `keep` (doubled coordinates).
pub fn contour_where(dd: &DobrushinDomain, keep: impl Fn(Point) -> bool) -> Result<Contour> {
    let mg = &dd.medial;
    let pts: Vec<Point> = (0..mg.num_vertices() as u32)
        .filter(|&v| dd.is_free_vertex(v) && keep(mg.vertices()[v as usize]))
        .map(|v| mg.vertices()[v as usize])
        .collect();
    contour_from_interior(dd, &pts)
}

/// Σ_{e ∈ C} η(e) F(e).
pub fn contour_sum(field: &ObservableField, contour: &Contour) -> Result<Complex64> {
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for &(e, eta) in &contour.edges {
        let f = *field.values.get(e as usize).ok_or(Error::InvalidContour)?;
        let z = eta * f;
        re.add(z.re);
        im.add(z.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// F(e₁) − iF(e₂) − F(e₃) + iF(e₄) at medial vertex `m`, up to a global
/// phase: the four-edge contour around `m`.
pub fn vertex_relation_residual(dd: &DobrushinDomain, field: &ObservableField, m: Point) -> Result<Complex64> {
    contour_sum(field, &contour_from_interior(dd, &[m])?)
}

/// Edges of a contour touching the free arc (α) and the wired arc (β); e_a
/// and e_b are in neither.
pub fn split_boundary_edges(dd: &DobrushinDomain, contour: &Contour) -> (Vec<u32>, Vec<u32>) {
    let mg = &dd.medial;
    let mk = mg.marks().unwrap();
    let inside: Vec<bool> = {
        let mut v = vec![false; mg.num_vertices()];
        for &i in &contour.interior {
            v[i as usize] = true;
        }
        v
    };
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for &(k, _) in &contour.edges {
        if k == mk.e_a || k == mk.e_b {
            continue;
        }
        let e = mg.edge(k);
        let t = mg.vertex_id(e.tail).unwrap();
        let outer = if inside[t as usize] { mg.vertex_id(e.head).unwrap() } else { t };
        match mg.primal_edge(outer) {
            Some(pe) if mk.is_wired_edge[pe as usize] => beta.push(k),
            _ => alpha.push(k),
        }
    }
    (alpha, beta)
}

/// Number of strands of the loop representation crossing the annulus: maximal
/// runs of medial vertices in the closed band that are entered from one side
/// and left through the other. Mask is ignored.
pub fn h1_traversal_count(rep: &LoopRepresentation, dd: &DobrushinDomain, annulus: &Annulus) -> usize {
    let mg = &dd.medial;
    let c = Point::new(2 * annulus.center.x, 2 * annulus.center.y);
    let (lo, hi) = (2 * annulus.inner as i32, 2 * annulus.outer as i32);
    // -1 inside, 0 in the band, 1 outside.
    let side = |k: u32| {
        let n = mg.edge(k).head.linf(c);
        if n < lo {
            -1
        } else if n > hi {
            1
        } else {
            0
        }
    };
    let count_run = |seq: &[i32], closed: bool| -> usize {
        let n = seq.len();
        if n == 0 {
            return 0;
        }
        let mut crossings = 0;
        let mut last_side = 0;
        let mut started = false;
        let start = if closed { seq.iter().position(|&s| s != 0) } else { Some(0) };
        let Some(start) = start else { return 0 };
        for i in 0..n + usize::from(closed) {
            let s = seq[(start + i) % n];
            if s != 0 {
                if started && last_side != 0 && s != last_side {
                    crossings += 1;
                }
                last_side = s;
                started = true;
            }
        }
        crossings
    };
    let mut total = 0;
    let path_sides: Vec<i32> = rep.path.edges.iter().map(|&k| side(k)).collect();
    total += count_run(&path_sides, false);
    for lp in &rep.loops {
        let s: Vec<i32> = lp.iter().map(|&k| side(k)).collect();
        total += count_run(&s, true);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{box_domain, rectangle};
    use crate::enumerate::Sequential;

    fn unit_square_dd() -> DobrushinDomain {
        DobrushinDomain::new(rectangle(0, 0, 1, 1).unwrap(), Point::new(0, 0), Point::new(0, 0)).unwrap()
    }

    #[test]
    fn sigma_values() {
        assert!((sigma(2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((sigma(4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(sigma(4.5), Err(Error::OutOfRange(4.5)));
    }

    #[test]
    fn partition_of_medial_edges() {
        let dd = DobrushinDomain::new(box_domain(2, Point::new(0, 0)).unwrap(), Point::new(2, -2), Point::new(-2, 2)).unwrap();
        let mut s = 0x1234_5678_9abc_def0u64;
        for _ in 0..200 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let cfg = Configuration::from_fn(dd.domain.num_edges(), |e| (s >> (e % 61)) & 1 == 1);
            let rep = loop_representation(&dd, &cfg);
            let mut count = vec![0; dd.medial.num_edges()];
            for &k in rep.path.edges.iter().chain(rep.loops.iter().flatten()) {
                count[k as usize] += 1;
            }
            assert!(count.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn empty_and_full_on_unit_square() {
        let dd = unit_square_dd();
        let empty = exploration_path(&dd, &dd.config_from_free_word(0));
        let full = exploration_path(&dd, &dd.config_from_free_word(0b1111));
        assert_eq!(*empty.edges.first().unwrap(), dd.e_a());
        assert_eq!(*empty.edges.last().unwrap(), dd.e_b());
        // Empty: γ makes a U-turn around the isolated mark.
        assert_eq!(empty.edges.len(), 3);
        assert_eq!(empty.windings, vec![2, 1, 0]);
        assert_eq!(winding(&empty, dd.e_a()).unwrap(), core::f64::consts::PI);
        // Full: γ goes round the whole square.
        assert!(full.edges.len() > 3);
        assert_eq!(winding(&full, dd.e_b()).unwrap(), 0.0);
        assert_eq!(winding(&full, 999), Err(Error::NotOnPath));
    }

    #[test]
    fn unit_square_vertex_relation() {
        let dd = unit_square_dd();
        let qs = [0.5, 1.0, 2.0, 3.0, 4.0];
        let params: Vec<Weights> = qs.iter().map(|&q| Weights::critical(q).unwrap()).collect();
        let fields = observable_exact(&dd, &params, &Sequential).unwrap();
        let c = boundary_contour(&dd).unwrap();
        for f in &fields {
            assert!((f.get(dd.e_b()).norm() - 1.0).abs() < 1e-12);
            assert!((f.get(dd.e_a()).norm() - 1.0).abs() < 1e-12);
            for &v in &c.interior {
                let m = dd.medial.vertices()[v as usize];
                let r = vertex_relation_residual(&dd, f, m).unwrap();
                assert!(r.norm() < 1e-12, "q={} v={:?} r={}", f.q, m, r);
            }
            assert!(contour_sum(f, &c).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn off_critical_control() {
        let dd = DobrushinDomain::new(rectangle(0, 0, 2, 2).unwrap(), Point::new(2, 0), Point::new(0, 2)).unwrap();
        let q = 2.0;
        let w = Weights::new(crate::measure::critical_p(q) + 0.05, q).unwrap();
        let f = &observable_exact(&dd, &[w, Weights::critical(q).unwrap()], &Sequential).unwrap();
        let c = boundary_contour(&dd).unwrap();
        let max_res = |f: &ObservableField| {
            c.interior
                .iter()
                .map(|&v| vertex_relation_residual(&dd, f, dd.medial.vertices()[v as usize]).unwrap().norm())
                .fold(0.0, f64::max)
        };
        assert!(max_res(&f[0]) > 1e-6);
        assert!(max_res(&f[1]) < 1e-12);
        assert!(contour_sum(&f[1], &c).unwrap().norm() < 1e-12);
    }

    #[test]
    fn boundary_vertex_rejected() {
        let dd = DobrushinDomain::new(rectangle(0, 0, 2, 1).unwrap(), Point::new(2, 0), Point::new(0, 1)).unwrap();
        let mk = dd.medial.marks().unwrap();
        let (p, q) = dd.domain.edge_points(mk.wired_edges[0]);
        let m = crate::medial::midpoint(p, q);
        let f = observable_exact(&dd, &[Weights::critical(1.0).unwrap()], &Sequential).unwrap();
        assert_eq!(vertex_relation_residual(&dd, &f[0], m), Err(Error::NotInterior));
    }
}
