//! Arm events in annuli Λ_R(x) \ Λ_r(x), optionally masked to a half or
//! quarter plane.
//!
//! Conventions. A primal arm (type 1) is a vertex path of open edges that
//! starts on the inner ring, then visits only vertices strictly between the
//! rings, and stops at its first outer-ring vertex. A dual arm (type 0) is a
//! path of faces of the band: it enters the band by crossing a closed edge of
//! the inner ring, moves between faces across closed edges, and leaves by
//! crossing a closed edge of the outer ring. Any arm in the wider sense
//! contains one of this form, so the events are unchanged. Arms of one type
//! are vertex- (face-) disjoint; primal and dual arms never meet.
//!
//! Disjoint arms in an annulus keep their cyclic order from the inner to the
//! outer ring, so the type word of a family is read off its start slots on
//! the inner ring. Detection therefore looks for start slots whose word
//! matches σ and checks each type separately with a max-flow.

use core::cell::RefCell;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{box_domain, Annulus, Domain, Mask, Point};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::measure::Configuration;

const NONE: u32 = u32::MAX;

/// Largest inner radius tried when searching for r_σ.
pub const R_SIGMA_SEARCH_LIMIT: u32 = 6;

/// Closed interval of the perimeter of [-1,1]², parametrised by arc length
/// s ∈ [0, 8) counterclockwise from (1, 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub len: f64,
}

impl Interval {
    pub fn new(start: f64, len: f64) -> Result<Interval> {
        if !(start.is_finite() && len.is_finite()) || !(0.0..8.0).contains(&start) || len <= 0.0 || len > 8.0 {
            return Err(Error::InvalidIntervals);
        }
        Ok(Interval { start, len })
    }

    pub fn full() -> Interval {
        Interval { start: 0.0, len: 8.0 }
    }

    /// One side of the square: 0 right, 1 top, 2 left, 3 bottom.
    pub fn side(k: u32) -> Interval {
        Interval { start: (2 * k as i32 - 1).rem_euclid(8) as f64, len: 2.0 }
    }

    pub fn contains(&self, s: f64) -> bool {
        wrap8(s - self.start) <= self.len + 1e-12
    }
}

fn wrap8(x: f64) -> f64 {
    x - 8.0 * libm::floor(x / 8.0)
}

/// Perimeter coordinate of a point with L∞ norm 1.
pub fn perimeter_coordinate(x: f64, y: f64) -> f64 {
    if x >= 1.0 - 1e-12 && y >= 0.0 {
        y
    } else if y >= 1.0 - 1e-12 {
        2.0 - x
    } else if x <= -1.0 + 1e-12 {
        4.0 - y
    } else if y <= -1.0 + 1e-12 {
        6.0 + x
    } else {
        8.0 + y
    }
}

fn check_intervals(list: &[Interval]) -> Result<()> {
    if list.len() < 2 {
        return Ok(());
    }
    let base = list[0].start;
    let mut end = 0.0;
    for (i, iv) in list.iter().enumerate() {
        let offset = wrap8(iv.start - base);
        if i > 0 && offset <= end {
            return Err(Error::InvalidIntervals);
        }
        end = offset + iv.len;
    }
    if end >= 8.0 {
        return Err(Error::InvalidIntervals);
    }
    Ok(())
}

/// Which event an [`ArmSpec`] describes, beyond the plain A_σ.
#[derive(Clone, Debug, PartialEq)]
pub struct Landing {
    pub inner: Vec<Interval>,
    pub outer: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArmSpec {
    sigma: Vec<bool>,
    mask: Mask,
    defects: u32,
    delta: Option<f64>,
    landing: Option<Landing>,
    r_sigma: u32,
}

impl ArmSpec {
    /// `sigma[i]` is true for a primal (open) arm. Computes r_σ for the mask.
    pub fn new(sigma: &[bool], mask: Mask) -> Result<ArmSpec> {
        if sigma.is_empty() {
            return Err(Error::InvalidParams("arm sequence must be non-empty"));
        }
        let r_sigma = minimal_radius(sigma, mask).ok_or(Error::Unsupported("no arm configuration within the radius search limit"))?;
        Ok(ArmSpec { sigma: sigma.to_vec(), mask, defects: 0, delta: None, landing: None, r_sigma })
    }

    /// Parses a word such as "10101".
    pub fn parse(word: &str, mask: Mask) -> Result<ArmSpec> {
        let sigma = word
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(Error::InvalidParams("arm sequence must consist of 0 and 1")),
            })
            .collect::<Result<Vec<bool>>>()?;
        ArmSpec::new(&sigma, mask)
    }

    /// Allows up to `k` wrong-state edges on a single arm.
    pub fn with_defects(mut self, k: u32) -> Result<ArmSpec> {
        if k > 0 && self.sigma.len() != 1 {
            return Err(Error::Unsupported("defect budgets are implemented for single arms only"));
        }
        self.defects = k;
        Ok(self)
    }

    pub fn with_separation(mut self, delta: f64) -> Result<ArmSpec> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidParams("separation parameter must be non-negative"));
        }
        self.delta = Some(delta);
        Ok(self)
    }

    pub fn with_landing(mut self, inner: Vec<Interval>, outer: Vec<Interval>) -> Result<ArmSpec> {
        let k = self.sigma.len();
        if inner.len() != k || outer.len() != k {
            return Err(Error::InvalidIntervals);
        }
        check_intervals(&inner)?;
        check_intervals(&outer)?;
        // The per-type flows fix which interval each arm lands in only up to a
        // rotation of σ; a rotation-free σ makes that rotation trivial.
        if self.mask == Mask::Full && k >= 2 && (1..k).any(|j| (0..k).all(|i| self.sigma[i] == self.sigma[(i + j) % k])) {
            return Err(Error::Unsupported("localized arms need a sequence without rotational symmetry"));
        }
        self.landing = Some(Landing { inner, outer });
        Ok(self)
    }

    pub fn sigma(&self) -> &[bool] {
        &self.sigma
    }

    pub fn word(&self) -> alloc::string::String {
        self.sigma.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn defects(&self) -> u32 {
        self.defects
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn landing(&self) -> Option<&Landing> {
        self.landing.as_ref()
    }

    pub fn r_sigma(&self) -> u32 {
        self.r_sigma
    }
}

/// A place where an arm can start (inner ring) or end (outer ring).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Primal arm through this ring vertex (domain index).
    Vertex(u32),
    /// Dual arm crossing this ring edge (domain index).
    Edge(u32),
}

impl Slot {
    pub fn is_primal(self) -> bool {
        matches!(self, Slot::Vertex(_))
    }
}

#[derive(Clone, Copy, Debug)]
struct RingSlot {
    slot: Slot,
    /// Position relative to the centre in doubled coordinates.
    doubled: Point,
    s: f64,
    /// Local vertex for vertex slots, band face for edge slots.
    local: u32,
}

fn ring_points(rho: i32) -> Vec<Point> {
    if rho == 0 {
        return vec![Point::new(0, 0)];
    }
    let mut pts = Vec::with_capacity(8 * rho as usize);
    for y in 0..rho {
        pts.push(Point::new(rho, y));
    }
    for x in (-rho + 1..=rho).rev() {
        pts.push(Point::new(x, rho));
    }
    for y in (-rho + 1..=rho).rev() {
        pts.push(Point::new(-rho, y));
    }
    for x in -rho..rho {
        pts.push(Point::new(x, -rho));
    }
    for y in -rho..0 {
        pts.push(Point::new(rho, y));
    }
    pts
}

/// Slots of the ring of radius `rho` in counterclockwise order from (ρ, 0),
/// restricted to the mask: vertex, edge, vertex, edge, …
fn ring_slots(domain: &Domain, center: Point, rho: i32, mask: Mask) -> Result<Vec<(Slot, Point, f64)>> {
    let pts = ring_points(rho);
    let n = pts.len();
    let abs = |p: Point| center.offset(p.x, p.y);
    let coord = |d: Point| if rho == 0 { 0.0 } else { perimeter_coordinate(d.x as f64 / (2 * rho) as f64, d.y as f64 / (2 * rho) as f64) };
    let mut out = Vec::new();
    for i in 0..n {
        let p = pts[i];
        if !mask.allows(p) {
            continue;
        }
        let v = domain.vertex_index(abs(p)).ok_or(Error::OutOfDomain)?;
        let d = Point::new(2 * p.x, 2 * p.y);
        out.push((Slot::Vertex(v), d, coord(d)));
        if n > 1 {
            let q = pts[(i + 1) % n];
            if mask.allows(q) {
                let e = domain.edge_between(abs(p), abs(q)).ok_or(Error::OutOfDomain)?;
                let d = Point::new(p.x + q.x, p.y + q.y);
                out.push((Slot::Edge(e), d, coord(d)));
            }
        }
    }
    Ok(out)
}

/// Config-independent data of a masked annulus: slots, the vertices and
/// band faces arms may use, and their adjacency.
#[derive(Clone, Debug)]
pub struct ArmGeometry {
    annulus: Annulus,
    inner: Vec<RingSlot>,
    outer: Vec<RingSlot>,
    cyclic: bool,
    verts: Vec<u32>,
    /// 0 inner ring, 1 strictly between, 2 outer ring.
    class: Vec<u8>,
    vadj: Vec<Vec<(u32, u32)>>,
    /// Lower-left corners of band faces.
    faces: Vec<Point>,
    /// Per face: (edge, neighbouring band face or NONE) for the four sides.
    fadj: Vec<[(u32, u32); 4]>,
    /// Per face: outer slots (edge slots) on its sides.
    fexit: Vec<Vec<u32>>,
}

impl ArmGeometry {
    pub fn new(domain: &Domain, annulus: &Annulus) -> Result<ArmGeometry> {
        let c = annulus.center;
        let (r, big) = (annulus.inner as i32, annulus.outer as i32);
        let mask = annulus.mask;
        let rel = |p: Point| Point::new(p.x - c.x, p.y - c.y);
        let side = 2 * big + 1;
        let gidx = |p: Point| ((p.y - c.y + big) * side + (p.x - c.x + big)) as usize;

        let mut local = vec![NONE; (side * side) as usize];
        let mut verts = Vec::new();
        let mut class = Vec::new();
        for y in -big..=big {
            for x in -big..=big {
                let p = Point::new(x, y);
                let n = p.norm();
                if n < r || !mask.allows(p) {
                    continue;
                }
                let v = domain.vertex_index(c.offset(x, y)).ok_or(Error::OutOfDomain)?;
                local[gidx(c.offset(x, y))] = verts.len() as u32;
                verts.push(v);
                class.push(if n == r { 0 } else if n == big { 2 } else { 1 });
            }
        }
        let mut vadj = vec![Vec::new(); verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            let p = domain.vertex(v);
            for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                let q = p.offset(dx, dy);
                if rel(q).norm() > big {
                    continue;
                }
                let j = local[gidx(q)];
                if j == NONE {
                    continue;
                }
                let e = domain.edge_between(p, q).ok_or(Error::OutOfDomain)?;
                vadj[i].push((j, e));
            }
        }

        let fside = 2 * big;
        let fidx = |f: Point| ((f.y - c.y + big) * fside + (f.x - c.x + big)) as usize;
        let in_band = |f: Point| {
            let f = rel(f);
            [f, f.offset(1, 0), f.offset(0, 1), f.offset(1, 1)].iter().all(|q| q.norm() >= r && q.norm() <= big && mask.allows(*q))
        };
        let mut flocal = vec![NONE; (fside * fside) as usize];
        let mut faces = Vec::new();
        for y in -big..big {
            for x in -big..big {
                let f = c.offset(x, y);
                if in_band(f) {
                    flocal[fidx(f)] = faces.len() as u32;
                    faces.push(f);
                }
            }
        }
        let mut fadj = Vec::with_capacity(faces.len());
        for &f in &faces {
            let sides = [
                (f, f.offset(1, 0), f.offset(0, -1)),
                (f.offset(0, 1), f.offset(1, 1), f.offset(0, 1)),
                (f, f.offset(0, 1), f.offset(-1, 0)),
                (f.offset(1, 0), f.offset(1, 1), f.offset(1, 0)),
            ];
            let mut entry = [(NONE, NONE); 4];
            for (k, (p, q, g)) in sides.into_iter().enumerate() {
                let e = domain.edge_between(p, q).ok_or(Error::OutOfDomain)?;
                let gr = rel(g);
                let nb = if gr.x >= -big && gr.x < big && gr.y >= -big && gr.y < big { flocal[fidx(g)] } else { NONE };
                entry[k] = (e, nb);
            }
            fadj.push(entry);
        }

        let face_of = |e: u32, outward: bool| -> u32 {
            let (p, q) = domain.edge_points(e);
            let (p, q) = (rel(p), rel(q));
            let lo = p.min(q);
            let f = if p.y == q.y {
                if (p.y > 0) == outward { lo } else { lo.offset(0, -1) }
            } else if (p.x > 0) == outward {
                lo
            } else {
                lo.offset(-1, 0)
            };
            let f = c.offset(f.x, f.y);
            if in_band(f) { flocal[fidx(f)] } else { NONE }
        };
        let make = |list: Vec<(Slot, Point, f64)>, outward: bool| -> Vec<RingSlot> {
            list.into_iter()
                .map(|(slot, doubled, s)| {
                    let local = match slot {
                        Slot::Vertex(v) => local[gidx(domain.vertex(v))],
                        Slot::Edge(e) => face_of(e, outward),
                    };
                    RingSlot { slot, doubled, s, local }
                })
                .collect()
        };
        let inner = make(ring_slots(domain, c, r, mask)?, true);
        let outer = make(ring_slots(domain, c, big, mask)?, false);
        let mut fexit = vec![Vec::new(); faces.len()];
        for (i, s) in outer.iter().enumerate() {
            if let Slot::Edge(_) = s.slot {
                if s.local != NONE {
                    fexit[s.local as usize].push(i as u32);
                }
            }
        }
        Ok(ArmGeometry {
            annulus: *annulus,
            inner,
            outer,
            cyclic: mask == Mask::Full && r > 0,
            verts,
            class,
            vadj,
            faces,
            fadj,
            fexit,
        })
    }

    pub fn annulus(&self) -> &Annulus {
        &self.annulus
    }

    /// Inner-ring slots in counterclockwise order.
    pub fn inner_slots(&self) -> Vec<Slot> {
        self.inner.iter().map(|s| s.slot).collect()
    }

    pub fn outer_slots(&self) -> Vec<Slot> {
        self.outer.iter().map(|s| s.slot).collect()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
}

/// Edges with a state that defeats an arm of the given type.
fn blocked(config: &Configuration, e: u32, primal: bool) -> bool {
    config.get(e as usize) != primal
}

/// Per-configuration arm detection state.
struct Evaluation<'a> {
    geo: &'a ArmGeometry,
    config: &'a Configuration,
    networks: [FlowNetwork; 2],
    built: [bool; 2],
    memo: BTreeMap<(bool, Vec<(u32, u32)>), bool>,
}

/// Starts and ends of a per-type flow query: groups of slot indices with the
/// number of arms that must use each group.
struct Query<'q> {
    starts: &'q [(Vec<u32>, u32)],
    ends: Option<&'q [(Vec<u32>, u32)]>,
}

impl<'a> Evaluation<'a> {
    fn new(geo: &'a ArmGeometry, config: &'a Configuration) -> Self {
        Self::with_scratch(geo, config, Default::default())
    }

    /// Reuses the allocations of earlier networks.
    fn with_scratch(geo: &'a ArmGeometry, config: &'a Configuration, networks: [FlowNetwork; 2]) -> Self {
        Evaluation { geo, config, networks, built: [false; 2], memo: BTreeMap::new() }
    }

    fn into_scratch(self) -> [FlowNetwork; 2] {
        self.networks
    }

    /// Inner slots from which a single arm of the slot's type exists.
    fn good_slots(&self) -> Vec<bool> {
        let g = self.geo;
        let mut vreach = vec![false; g.verts.len()];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for (i, &c) in g.class.iter().enumerate() {
            if c == 2 {
                vreach[i] = true;
                queue.push_back(i as u32);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &g.vadj[u as usize] {
                if g.class[w as usize] == 1 && !vreach[w as usize] && self.config.get(e as usize) {
                    vreach[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut freach = vec![false; g.faces.len()];
        for f in 0..g.faces.len() {
            if g.fexit[f].iter().any(|&i| match g.outer[i as usize].slot {
                Slot::Edge(e) => !self.config.get(e as usize),
                Slot::Vertex(_) => false,
            }) {
                freach[f] = true;
                queue.push_back(f as u32);
            }
        }
        while let Some(f) = queue.pop_front() {
            for &(e, h) in &g.fadj[f as usize] {
                if h != NONE && !freach[h as usize] && !self.config.get(e as usize) {
                    freach[h as usize] = true;
                    queue.push_back(h);
                }
            }
        }
        g.inner
            .iter()
            .map(|s| match s.slot {
                Slot::Vertex(_) => g.vadj[s.local as usize]
                    .iter()
                    .any(|&(w, e)| g.class[w as usize] != 0 && vreach[w as usize] && self.config.get(e as usize)),
                Slot::Edge(e) => s.local != NONE && !self.config.get(e as usize) && freach[s.local as usize],
            })
            .collect()
    }

    fn network(&mut self, primal: bool) -> &mut FlowNetwork {
        let slot = usize::from(primal);
        if !self.built[slot] {
            let g = self.geo;
            let net = &mut self.networks[slot];
            if primal {
                net.clear(2 * g.verts.len());
                for v in 0..g.verts.len() as u32 {
                    net.add_edge(2 * v, 2 * v + 1, 1);
                    if g.class[v as usize] == 2 {
                        continue;
                    }
                    for &(w, e) in &g.vadj[v as usize] {
                        if g.class[w as usize] != 0 && self.config.get(e as usize) {
                            net.add_edge(2 * v + 1, 2 * w, 1);
                        }
                    }
                }
            } else {
                net.clear(2 * g.faces.len());
                for f in 0..g.faces.len() as u32 {
                    net.add_edge(2 * f, 2 * f + 1, 1);
                    for &(e, h) in &g.fadj[f as usize] {
                        if h != NONE && !self.config.get(e as usize) {
                            net.add_edge(2 * f + 1, 2 * h, 1);
                        }
                    }
                }
            }
            self.built[slot] = true;
        }
        &mut self.networks[slot]
    }

    /// Whether disjoint arms of one type realise the query.
    fn feasible(&mut self, primal: bool, q: &Query) -> bool {
        let total: u32 = q.starts.iter().map(|g| g.1).sum();
        if total == 0 {
            return true;
        }
        let geo = self.geo;
        let config = self.config;
        let net = self.network(primal);
        let (nodes, arcs) = (net.num_nodes(), net.num_arcs());
        let s = net.add_node();
        let t = net.add_node();
        for (slots, count) in q.starts {
            let g = net.add_node();
            net.add_edge(s, g, *count);
            for &i in slots {
                let rs = &geo.inner[i as usize];
                net.add_edge(g, 2 * rs.local, 1);
            }
        }
        let exit_arcs = |net: &mut FlowNetwork, i: u32, to: u32| {
            let rs = &geo.outer[i as usize];
            match rs.slot {
                Slot::Vertex(_) => {
                    net.add_edge(2 * rs.local + 1, to, 1);
                }
                Slot::Edge(e) => {
                    if rs.local != NONE && !config.get(e as usize) {
                        net.add_edge(2 * rs.local + 1, to, 1);
                    }
                }
            }
        };
        match q.ends {
            None => {
                for (i, rs) in geo.outer.iter().enumerate() {
                    if rs.slot.is_primal() == primal {
                        exit_arcs(net, i as u32, t);
                    }
                }
            }
            Some(groups) => {
                for (slots, count) in groups {
                    let g = net.add_node();
                    net.add_edge(g, t, *count);
                    for &i in slots {
                        exit_arcs(net, i, g);
                    }
                }
            }
        }
        let flow = net.max_flow(s, t, total);
        net.truncate(nodes, arcs);
        net.reset();
        flow == total
    }

    fn feasible_counts(&mut self, primal: bool, runs: &[Run], counts: &[(u32, u32)]) -> bool {
        let key: Vec<(u32, u32)> = {
            let mut k: Vec<(u32, u32)> = counts.iter().copied().filter(|&(s, _)| runs[s as usize].primal == primal).collect();
            k.sort_unstable();
            k
        };
        if let Some(&hit) = self.memo.get(&(primal, key.clone())) {
            return hit;
        }
        let starts: Vec<(Vec<u32>, u32)> = key.iter().map(|&(s, c)| (runs[s as usize].slots.clone(), c)).collect();
        let ok = self.feasible(primal, &Query { starts: &starts, ends: None });
        self.memo.insert((primal, key), ok);
        ok
    }

    /// Distributes σ (already rotated) over runs in `order`, run by run.
    fn distribute(&mut self, runs: &[Run], order: &[u32], sigma: &[bool], pos: usize, counts: &mut Vec<(u32, u32)>) -> bool {
        if pos == sigma.len() {
            return true;
        }
        let Some((&s, rest)) = order.split_first() else {
            return false;
        };
        let run = &runs[s as usize];
        let avail = sigma[pos..].iter().take_while(|&&b| b == run.primal).count();
        let first = counts.is_empty();
        let max = avail.min(run.slots.len());
        let min = usize::from(first && self.geo.cyclic);
        for c in (min..=max).rev() {
            if c > 0 {
                counts.push((s, c as u32));
                let ok = self.feasible_counts(run.primal, runs, counts) && self.distribute(runs, rest, sigma, pos + c, counts);
                counts.pop();
                if ok {
                    return true;
                }
            } else if !first || !self.geo.cyclic {
                if self.distribute(runs, rest, sigma, pos, counts) {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Clone, Debug)]
struct Run {
    primal: bool,
    slots: Vec<u32>,
}

fn good_runs(geo: &ArmGeometry, good: &[bool]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for (i, rs) in geo.inner.iter().enumerate() {
        if !good[i] {
            continue;
        }
        let primal = rs.slot.is_primal();
        match runs.last_mut() {
            Some(run) if run.primal == primal => run.slots.push(i as u32),
            _ => runs.push(Run { primal, slots: vec![i as u32] }),
        }
    }
    if geo.cyclic && runs.len() >= 2 && runs[0].primal == runs[runs.len() - 1].primal {
        let last = runs.pop().unwrap();
        let mut slots = last.slots;
        slots.extend_from_slice(&runs[0].slots);
        runs[0].slots = slots;
    }
    runs
}

fn rotated(sigma: &[bool], j: usize) -> Vec<bool> {
    (0..sigma.len()).map(|i| sigma[(i + j) % sigma.len()]).collect()
}

fn plain_detect(geo: &ArmGeometry, config: &Configuration, sigma: &[bool]) -> bool {
    plain_detect_with(geo, config, sigma, Default::default()).0
}

fn plain_detect_with(geo: &ArmGeometry, config: &Configuration, sigma: &[bool], scratch: [FlowNetwork; 2]) -> (bool, [FlowNetwork; 2]) {
    let mut ev = Evaluation::with_scratch(geo, config, scratch);
    let found = plain_search(&mut ev, geo, sigma);
    (found, ev.into_scratch())
}

fn plain_search(ev: &mut Evaluation, geo: &ArmGeometry, sigma: &[bool]) -> bool {
    let good = ev.good_slots();
    let ones = sigma.iter().filter(|&&b| b).count();
    let zeros = sigma.len() - ones;
    let good_ones = geo.inner.iter().zip(&good).filter(|(s, &g)| g && s.slot.is_primal()).count();
    let good_zeros = good.iter().filter(|&&g| g).count() - good_ones;
    if good_ones < ones || good_zeros < zeros {
        return false;
    }
    if sigma.len() == 1 {
        return true;
    }
    let runs = good_runs(geo, &good);
    let m = runs.len() as u32;
    if geo.cyclic {
        for i in 0..m {
            let order: Vec<u32> = (0..m).map(|t| (i + t) % m).collect();
            for j in 0..sigma.len() {
                let rot = rotated(sigma, j);
                if rot[0] != runs[i as usize].primal {
                    continue;
                }
                if ev.distribute(&runs, &order, &rot, 0, &mut Vec::new()) {
                    return true;
                }
            }
        }
        false
    } else {
        let order: Vec<u32> = (0..m).collect();
        ev.distribute(&runs, &order, sigma, 0, &mut Vec::new())
    }
}

/// Single arm with at most `budget` wrong-state edges, by 0/1 breadth-first
/// search over vertices (primal) or band faces (dual).
fn single_arm_with_defects(geo: &ArmGeometry, config: &Configuration, primal: bool, budget: u32) -> bool {
    let mut deque = VecDeque::new();
    if primal {
        let mut dist = vec![u32::MAX; geo.verts.len()];
        for (i, &c) in geo.class.iter().enumerate() {
            if c == 0 {
                dist[i] = 0;
                deque.push_back(i as u32);
            }
        }
        while let Some(u) = deque.pop_front() {
            let d = dist[u as usize];
            if geo.class[u as usize] == 2 {
                return d <= budget;
            }
            for &(w, e) in &geo.vadj[u as usize] {
                if geo.class[w as usize] == 0 {
                    continue;
                }
                let cost = u32::from(blocked(config, e, true));
                if d + cost < dist[w as usize] {
                    dist[w as usize] = d + cost;
                    if cost == 0 { deque.push_front(w) } else { deque.push_back(w) }
                }
            }
        }
        false
    } else {
        // Face distances include the crossing into the band; an exit adds
        // the cost of the outer edge crossed.
        let mut dist = vec![u32::MAX; geo.faces.len()];
        let mut entries: Vec<(u32, u32)> = geo
            .inner
            .iter()
            .filter_map(|s| match s.slot {
                Slot::Edge(e) if s.local != NONE => Some((s.local, u32::from(blocked(config, e, false)))),
                _ => None,
            })
            .collect();
        entries.sort_by_key(|&(_, c)| c);
        for &(f, c) in &entries {
            if c < dist[f as usize] {
                dist[f as usize] = c;
                deque.push_back(f);
            }
        }
        let mut best = u32::MAX;
        while let Some(f) = deque.pop_front() {
            let d = dist[f as usize];
            for &i in &geo.fexit[f as usize] {
                if let Slot::Edge(e) = geo.outer[i as usize].slot {
                    best = best.min(d + u32::from(blocked(config, e, false)));
                }
            }
            for &(e, h) in &geo.fadj[f as usize] {
                if h == NONE {
                    continue;
                }
                let cost = u32::from(blocked(config, e, false));
                if d + cost < dist[h as usize] {
                    dist[h as usize] = d + cost;
                    if cost == 0 { deque.push_front(h) } else { deque.push_back(h) }
                }
            }
        }
        best <= budget
    }
}

fn check_radius(annulus: &Annulus, spec: &ArmSpec) -> Result<()> {
    if annulus.inner < spec.r_sigma {
        return Err(Error::BelowMinimalRadius { r: annulus.inner, r_sigma: spec.r_sigma });
    }
    if annulus.mask != spec.mask {
        return Err(Error::InvalidParams("annulus mask differs from the arm specification"));
    }
    Ok(())
}

/// Detector bound to a domain, an annulus and a specification, reusable
/// across a stream of configurations.
#[derive(Clone, Debug)]
pub struct ArmDetector<'d> {
    domain: &'d Domain,
    geo: ArmGeometry,
    spec: ArmSpec,
    scratch: RefCell<[FlowNetwork; 2]>,
}

impl<'d> ArmDetector<'d> {
    pub fn new(domain: &'d Domain, annulus: &Annulus, spec: &ArmSpec) -> Result<Self> {
        check_radius(annulus, spec)?;
        let geo = ArmGeometry::new(domain, annulus)?;
        Ok(ArmDetector { domain, geo, spec: spec.clone(), scratch: RefCell::default() })
    }

    pub fn geometry(&self) -> &ArmGeometry {
        &self.geo
    }

    /// A_σ, or the single-arm event with defects when the spec carries a budget.
    pub fn detect(&self, config: &Configuration) -> Result<bool> {
        config.check_len(self.domain)?;
        if self.spec.defects > 0 {
            return Ok(single_arm_with_defects(&self.geo, config, self.spec.sigma[0], self.spec.defects));
        }
        let (found, scratch) = plain_detect_with(&self.geo, config, &self.spec.sigma, self.scratch.take());
        self.scratch.replace(scratch);
        Ok(found)
    }

    pub fn detect_well_separated(&self, config: &Configuration) -> Result<bool> {
        config.check_len(self.domain)?;
        let delta = self.spec.delta.ok_or(Error::InvalidParams("separation parameter missing"))?;
        if delta == 0.0 {
            return Ok(plain_detect(&self.geo, config, &self.spec.sigma));
        }
        separated(self.domain, &self.geo, config, &self.spec.sigma, delta)
    }

    pub fn detect_localized(&self, config: &Configuration) -> Result<bool> {
        config.check_len(self.domain)?;
        let landing = self.spec.landing.as_ref().ok_or(Error::InvalidIntervals)?;
        Ok(localized(&self.geo, config, &self.spec.sigma, landing))
    }
}

pub fn detect_arms(domain: &Domain, config: &Configuration, annulus: &Annulus, spec: &ArmSpec) -> Result<bool> {
    ArmDetector::new(domain, annulus, spec)?.detect(config)
}

pub fn detect_well_separated(domain: &Domain, config: &Configuration, annulus: &Annulus, spec: &ArmSpec) -> Result<bool> {
    ArmDetector::new(domain, annulus, spec)?.detect_well_separated(config)
}

pub fn detect_localized_arms(domain: &Domain, config: &Configuration, annulus: &Annulus, spec: &ArmSpec) -> Result<bool> {
    ArmDetector::new(domain, annulus, spec)?.detect_localized(config)
}

fn localized(geo: &ArmGeometry, config: &Configuration, sigma: &[bool], landing: &Landing) -> bool {
    let mut ev = Evaluation::new(geo, config);
    let good = ev.good_slots();
    let r0 = geo.annulus.inner == 0;
    for primal in [true, false] {
        let mut starts = Vec::new();
        let mut ends = Vec::new();
        for (i, &t) in sigma.iter().enumerate() {
            if t != primal {
                continue;
            }
            let s: Vec<u32> = (0..geo.inner.len() as u32)
                .filter(|&j| {
                    let rs = &geo.inner[j as usize];
                    good[j as usize] && rs.slot.is_primal() == primal && (r0 || landing.inner[i].contains(rs.s))
                })
                .collect();
            let e: Vec<u32> = (0..geo.outer.len() as u32)
                .filter(|&j| {
                    let rs = &geo.outer[j as usize];
                    rs.slot.is_primal() == primal && landing.outer[i].contains(rs.s)
                })
                .collect();
            starts.push((s, 1));
            ends.push((e, 1));
        }
        if !ev.feasible(primal, &Query { starts: &starts, ends: Some(&ends) }) {
            return false;
        }
    }
    true
}

/// σ-connection from a ring slot within a box of radius `d` around it,
/// staying on the centre side (`inward`) or the far side of the ring, until
/// depth `d` beyond the ring.
fn local_connection(domain: &Domain, geo: &ArmGeometry, config: &Configuration, rs: &RingSlot, inward: bool, d: i32) -> bool {
    let a = &geo.annulus;
    let c = a.center;
    let rho = if inward { a.inner as i32 } else { a.outer as i32 };
    let rel = |p: Point| Point::new(p.x - c.x, p.y - c.y);
    let x = rs.doubled;
    let side_ok = |n2: i32| if inward { n2 <= 2 * rho } else { n2 >= 2 * rho };
    let target = |n2: i32| if inward { n2 <= 2 * (rho - d) } else { n2 >= 2 * (rho + d) };
    let within = |p2: Point| (p2.x - x.x).abs().max((p2.y - x.y).abs()) <= 2 * d;
    let mut queue = VecDeque::new();
    match rs.slot {
        Slot::Vertex(v) => {
            let mut seen = alloc::collections::BTreeSet::new();
            seen.insert(v);
            queue.push_back(v);
            while let Some(u) = queue.pop_front() {
                let p = rel(domain.vertex(u));
                if target(2 * p.norm()) {
                    return true;
                }
                for &(w, e) in domain.neighbors(u) {
                    let q = rel(domain.vertex(w));
                    let q2 = Point::new(2 * q.x, 2 * q.y);
                    if config.get(e as usize) && a.mask.allows(q) && side_ok(q2.norm()) && within(q2) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            false
        }
        Slot::Edge(e) => {
            if config.get(e as usize) {
                return false;
            }
            // Faces by lower-left corner relative to the centre.
            let face_ok = |f: Point| {
                let corners = [f, f.offset(1, 0), f.offset(0, 1), f.offset(1, 1)];
                let centre2 = Point::new(2 * f.x + 1, 2 * f.y + 1);
                corners.iter().all(|q| a.mask.allows(*q) && side_ok(2 * q.norm())) && within(centre2)
            };
            let (p, q) = domain.edge_points(e);
            let (p, q) = (rel(p), rel(q));
            let lo = p.min(q);
            let start = if p.y == q.y {
                if (p.y > 0) != inward { lo } else { lo.offset(0, -1) }
            } else if (p.x > 0) != inward {
                lo
            } else {
                lo.offset(-1, 0)
            };
            if !face_ok(start) {
                return false;
            }
            let mut seen = alloc::collections::BTreeSet::new();
            seen.insert(start);
            let mut fqueue = VecDeque::new();
            fqueue.push_back(start);
            while let Some(f) = fqueue.pop_front() {
                if target(Point::new(2 * f.x + 1, 2 * f.y + 1).norm()) {
                    return true;
                }
                let sides = [
                    (f, f.offset(1, 0), f.offset(0, -1)),
                    (f.offset(0, 1), f.offset(1, 1), f.offset(0, 1)),
                    (f, f.offset(0, 1), f.offset(-1, 0)),
                    (f.offset(1, 0), f.offset(1, 1), f.offset(1, 0)),
                ];
                for (p, q, g) in sides {
                    let Some(e) = domain.edge_between(c.offset(p.x, p.y), c.offset(q.x, q.y)) else {
                        continue;
                    };
                    if !config.get(e as usize) && face_ok(g) && seen.insert(g) {
                        fqueue.push_back(g);
                    }
                }
            }
            false
        }
    }
}

fn far_apart(a: Point, b: Point, min_doubled: f64) -> bool {
    (a.x - b.x).abs().max((a.y - b.y).abs()) as f64 > min_doubled
}

/// Chooses `k` slot indices from `cands` in ring order with pairwise spacing
/// and a type word among `words`.
fn choose_spaced(
    slots: &[RingSlot],
    cands: &[u32],
    words: &[Vec<bool>],
    min_doubled: f64,
    from: usize,
    chosen: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    let k = words[0].len();
    if chosen.len() == k {
        return visit(chosen);
    }
    for ci in from..cands.len() {
        let i = cands[ci];
        let rs = &slots[i as usize];
        let ty = rs.slot.is_primal();
        let depth = chosen.len();
        let prefix_ok = words.iter().any(|w| w[depth] == ty && chosen.iter().enumerate().all(|(t, &j)| w[t] == slots[j as usize].slot.is_primal()));
        if !prefix_ok || !chosen.iter().all(|&j| far_apart(slots[j as usize].doubled, rs.doubled, min_doubled)) {
            continue;
        }
        chosen.push(i);
        let done = choose_spaced(slots, cands, words, min_doubled, ci + 1, chosen, visit);
        chosen.pop();
        if done {
            return true;
        }
    }
    false
}

fn separated(domain: &Domain, geo: &ArmGeometry, config: &Configuration, sigma: &[bool], delta: f64) -> Result<bool> {
    let a = geo.annulus;
    let (r, big) = (a.inner as f64, a.outer as f64);
    let d_in = libm::ceil(delta * r) as i32;
    let d_out = libm::ceil(delta * big) as i32;
    if d_in > a.inner as i32 {
        return Ok(false);
    }
    if !domain.contains_box(a.center, a.outer as i32 + d_out) {
        return Err(Error::OutOfDomain);
    }
    let words: Vec<Vec<bool>> = if geo.cyclic { (0..sigma.len()).map(|j| rotated(sigma, j)).collect() } else { vec![sigma.to_vec()] };
    let mut ev = Evaluation::new(geo, config);
    let good = ev.good_slots();
    let starts: Vec<u32> = (0..geo.inner.len() as u32)
        .filter(|&i| good[i as usize] && local_connection(domain, geo, config, &geo.inner[i as usize], true, d_in))
        .collect();
    let ends: Vec<u32> = (0..geo.outer.len() as u32)
        .filter(|&i| local_connection(domain, geo, config, &geo.outer[i as usize], false, d_out))
        .collect();
    // Spacing is strict in real units; doubled coordinates double it.
    let (gap_in, gap_out) = (4.0 * delta * r, 4.0 * delta * big);
    let found = choose_spaced(&geo.inner, &starts, &words, gap_in, 0, &mut Vec::new(), &mut |chosen_starts| {
        choose_spaced(&geo.outer, &ends, &words, gap_out, 0, &mut Vec::new(), &mut |chosen_ends| {
            [true, false].into_iter().all(|primal| {
                let s: Vec<(Vec<u32>, u32)> =
                    chosen_starts.iter().filter(|&&i| geo.inner[i as usize].slot.is_primal() == primal).map(|&i| (vec![i], 1)).collect();
                let e: Vec<(Vec<u32>, u32)> =
                    chosen_ends.iter().filter(|&&i| geo.outer[i as usize].slot.is_primal() == primal).map(|&i| (vec![i], 1)).collect();
                ev.feasible(primal, &Query { starts: &s, ends: Some(&e) })
            })
        })
    });
    Ok(found)
}

/// Outward directions from a ring vertex that keep a straight ray in the mask.
fn ray_directions(p: Point, mask: Mask) -> Vec<(i32, i32)> {
    let n = p.norm();
    [(1, 0), (0, 1), (-1, 0), (0, -1)]
        .into_iter()
        .filter(|&(dx, dy)| p.offset(dx, dy).norm() > n && mask.allows(p.offset(dx, dy)) && mask.allows(p))
        .collect()
}

/// r_σ: the smallest inner radius at which a configuration of straight
/// radial rays (open rays for the primal arms, everything else closed)
/// realises σ for R = r+1, r+2, r+3.
pub fn minimal_radius(sigma: &[bool], mask: Mask) -> Option<u32> {
    let ones = sigma.iter().filter(|&&b| b).count();
    for r in 0..=R_SIGMA_SEARCH_LIMIT {
        let big = r as i32 + 3;
        let domain = box_domain(big, Point::new(0, 0)).ok()?;
        let geos: Vec<ArmGeometry> = (r + 1..=r + 3)
            .map(|rr| ArmGeometry::new(&domain, &Annulus { center: Point::new(0, 0), inner: r, outer: rr, mask }))
            .collect::<Result<_>>()
            .ok()?;
        let ring: Vec<Point> = ring_points(r as i32).into_iter().filter(|&p| mask.allows(p)).collect();
        let options: Vec<Vec<(i32, i32)>> = ring.iter().map(|&p| ray_directions(p, mask)).collect();
        let mut chosen: Vec<(usize, (i32, i32))> = Vec::new();
        let mut try_config = |chosen: &[(usize, (i32, i32))]| {
            let mut cfg = Configuration::empty(domain.num_edges());
            for &(i, (dx, dy)) in chosen {
                let mut p = ring[i];
                while p.offset(dx, dy).norm() <= big {
                    let q = p.offset(dx, dy);
                    cfg.set(domain.edge_between(p, q).unwrap() as usize, true);
                    p = q;
                }
            }
            geos.iter().all(|g| plain_detect(g, &cfg, sigma))
        };
        if ray_search(&ring, &options, ones, 0, &mut chosen, &mut try_config) {
            return Some(r);
        }
    }
    None
}

fn ray_search(
    ring: &[Point],
    options: &[Vec<(i32, i32)>],
    remaining: usize,
    from: usize,
    chosen: &mut Vec<(usize, (i32, i32))>,
    test: &mut dyn FnMut(&[(usize, (i32, i32))]) -> bool,
) -> bool {
    if remaining == 0 {
        return test(chosen);
    }
    for i in from..ring.len() {
        for &dir in &options[i] {
            chosen.push((i, dir));
            let ok = ray_search(ring, options, remaining - 1, i + 1, chosen, test);
            chosen.pop();
            if ok {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> Point {
        Point::new(0, 0)
    }

    fn setup(n: i32) -> Domain {
        box_domain(n, origin()).unwrap()
    }

    fn open_ray(d: &Domain, cfg: &mut Configuration, from: Point, dir: (i32, i32), len: i32) {
        let mut p = from;
        for _ in 0..len {
            let q = p.offset(dir.0, dir.1);
            cfg.set(d.edge_between(p, q).unwrap() as usize, true);
            p = q;
        }
    }

    #[test]
    fn minimal_radii() {
        assert_eq!(minimal_radius(&[true], Mask::Full), Some(0));
        assert_eq!(minimal_radius(&[false], Mask::Full), Some(1));
        assert_eq!(minimal_radius(&[true, true], Mask::Full), Some(1));
        assert_eq!(minimal_radius(&[true, false, true, false, true], Mask::Full), Some(1));
        assert_eq!(minimal_radius(&[true, false], Mask::Half), Some(1));
    }

    #[test]
    fn ring_slot_order() {
        let d = setup(3);
        let half = ring_slots(&d, origin(), 1, Mask::Half).unwrap();
        assert_eq!(half.len(), 9);
        assert_eq!(half[0].0, Slot::Vertex(d.vertex_index(Point::new(1, 0)).unwrap()));
        assert_eq!(half[8].0, Slot::Vertex(d.vertex_index(Point::new(-1, 0)).unwrap()));
        assert_eq!(ring_slots(&d, origin(), 1, Mask::Full).unwrap().len(), 16);
        assert_eq!(ring_slots(&d, origin(), 2, Mask::Quarter).unwrap().len(), 9);
        assert!((perimeter_coordinate(0.0, 1.0) - 2.0).abs() < 1e-12);
        assert!((perimeter_coordinate(1.0, -0.5) - 7.5).abs() < 1e-12);
    }

    #[test]
    fn trivial_cases() {
        let d = setup(3);
        let full = Configuration::full(d.num_edges());
        let empty = Configuration::empty(d.num_edges());
        let ann = Annulus::new(origin(), 1, 3, Mask::Full).unwrap();
        let one = ArmSpec::parse("1", Mask::Full).unwrap();
        assert!(detect_arms(&d, &full, &ann, &one).unwrap());
        assert!(!detect_arms(&d, &empty, &ann, &one).unwrap());
        let half = Annulus::new(origin(), 1, 3, Mask::Half).unwrap();
        let ten = ArmSpec::parse("10", Mask::Half).unwrap();
        assert!(!detect_arms(&d, &empty, &half, &ten).unwrap());
        let zero = ArmSpec::parse("0", Mask::Full).unwrap();
        let centre = Annulus::new(origin(), 0, 3, Mask::Full).unwrap();
        assert_eq!(detect_arms(&d, &empty, &centre, &zero), Err(Error::BelowMinimalRadius { r: 0, r_sigma: 1 }));
    }

    fn five_arm_instance(d: &Domain) -> Configuration {
        let mut cfg = Configuration::empty(d.num_edges());
        open_ray(d, &mut cfg, Point::new(1, 0), (1, 0), 2);
        open_ray(d, &mut cfg, Point::new(0, 1), (0, 1), 2);
        open_ray(d, &mut cfg, Point::new(-1, 0), (-1, 0), 2);
        cfg
    }

    #[test]
    fn five_arms_by_hand() {
        let d = setup(3);
        let ann = Annulus::new(origin(), 1, 3, Mask::Full).unwrap();
        let spec = ArmSpec::parse("10101", Mask::Full).unwrap();
        let mut cfg = five_arm_instance(&d);
        assert!(detect_arms(&d, &cfg, &ann, &spec).unwrap());
        // Cutting one primal ray leaves only two primal arms.
        cfg.set(d.edge_between(Point::new(2, 0), Point::new(3, 0)).unwrap() as usize, false);
        assert!(!detect_arms(&d, &cfg, &ann, &spec).unwrap());
    }

    #[test]
    fn two_primal_arms_need_two_paths() {
        let d = setup(3);
        let ann = Annulus::new(origin(), 1, 3, Mask::Full).unwrap();
        let spec = ArmSpec::parse("11", Mask::Full).unwrap();
        let mut cfg = Configuration::empty(d.num_edges());
        // A fork: two inner vertices feed one path to the outer ring.
        open_ray(&d, &mut cfg, Point::new(1, 0), (1, 0), 2);
        open_ray(&d, &mut cfg, Point::new(1, 1), (1, 0), 1);
        open_ray(&d, &mut cfg, Point::new(2, 1), (0, -1), 1);
        assert!(!detect_arms(&d, &cfg, &ann, &spec).unwrap());
        open_ray(&d, &mut cfg, Point::new(2, 1), (1, 0), 1);
        assert!(detect_arms(&d, &cfg, &ann, &spec).unwrap());
    }

    #[test]
    fn defects_on_single_arm() {
        let d = setup(4);
        let ann = Annulus::new(origin(), 1, 4, Mask::Full).unwrap();
        let mut cfg = Configuration::empty(d.num_edges());
        open_ray(&d, &mut cfg, Point::new(1, 0), (1, 0), 3);
        cfg.set(d.edge_between(Point::new(2, 0), Point::new(3, 0)).unwrap() as usize, false);
        let one = ArmSpec::parse("1", Mask::Full).unwrap();
        assert!(!detect_arms(&d, &cfg, &ann, &one).unwrap());
        assert!(detect_arms(&d, &cfg, &ann, &one.clone().with_defects(1).unwrap()).unwrap());
        let full = Configuration::full(d.num_edges());
        let zero = ArmSpec::parse("0", Mask::Full).unwrap();
        assert!(!detect_arms(&d, &full, &ann, &zero.clone().with_defects(2).unwrap()).unwrap());
        assert!(detect_arms(&d, &full, &ann, &zero.with_defects(4).unwrap()).unwrap());
        assert!(ArmSpec::parse("10", Mask::Full).unwrap().with_defects(1).is_err());
    }

    #[test]
    fn separation() {
        let d = setup(16);
        let ann = Annulus::new(origin(), 4, 12, Mask::Full).unwrap();
        let spec = ArmSpec::parse("11", Mask::Full).unwrap();
        let mut cfg = Configuration::empty(d.num_edges());
        // Straight rays on opposite sides, extended one step inward and
        // three steps beyond the outer ring.
        open_ray(&d, &mut cfg, Point::new(3, 0), (1, 0), 12);
        open_ray(&d, &mut cfg, Point::new(-3, 0), (-1, 0), 12);
        let sep = spec.clone().with_separation(0.25).unwrap();
        assert!(detect_well_separated(&d, &cfg, &ann, &sep).unwrap());
        let zero = spec.clone().with_separation(0.0).unwrap();
        assert_eq!(detect_well_separated(&d, &cfg, &ann, &zero).unwrap(), detect_arms(&d, &cfg, &ann, &spec).unwrap());
        // Both rays close together on the right side.
        let mut near = Configuration::empty(d.num_edges());
        open_ray(&d, &mut near, Point::new(3, 0), (1, 0), 12);
        open_ray(&d, &mut near, Point::new(3, 1), (1, 0), 12);
        assert!(detect_arms(&d, &near, &ann, &spec).unwrap());
        assert!(!detect_well_separated(&d, &near, &ann, &sep).unwrap());
    }

    #[test]
    fn landing_intervals() {
        let d = setup(4);
        let ann = Annulus::new(origin(), 1, 4, Mask::Full).unwrap();
        let full = Configuration::full(d.num_edges());
        let one = ArmSpec::parse("1", Mask::Full).unwrap();
        let everywhere = one.clone().with_landing(vec![Interval::full()], vec![Interval::full()]).unwrap();
        assert!(detect_localized_arms(&d, &full, &ann, &everywhere).unwrap());
        let right = one.clone().with_landing(vec![Interval::side(0)], vec![Interval::full()]).unwrap();
        assert!(detect_localized_arms(&d, &full, &ann, &right).unwrap());
        // A single arm leaving through the top side.
        let mut cfg = Configuration::empty(d.num_edges());
        open_ray(&d, &mut cfg, Point::new(0, 1), (0, 1), 3);
        let top = one.clone().with_landing(vec![Interval::full()], vec![Interval::side(1)]).unwrap();
        let bottom = one.clone().with_landing(vec![Interval::full()], vec![Interval::side(3)]).unwrap();
        assert!(detect_localized_arms(&d, &cfg, &ann, &top).unwrap());
        assert!(!detect_localized_arms(&d, &cfg, &ann, &bottom).unwrap());
        let two = ArmSpec::parse("10", Mask::Full).unwrap();
        assert_eq!(
            two.clone().with_landing(vec![Interval::side(0), Interval::side(0)], vec![Interval::side(0), Interval::side(2)]),
            Err(Error::InvalidIntervals)
        );
        let sym = ArmSpec::parse("11", Mask::Full).unwrap();
        assert!(matches!(
            sym.with_landing(vec![Interval::side(0), Interval::side(2)], vec![Interval::side(0), Interval::side(2)]),
            Err(Error::Unsupported(_))
        ));
    }
}
