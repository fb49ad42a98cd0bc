//! Cluster geometry of a configuration: labelings, crossings, circuits,
//! Hamming distance to a crossing, chains of clusters and boundary-touching
//! counts. Distances are L∞ throughout.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{is_r_centred, Domain, Point, Quad};
use crate::error::{Error, Result};
use crate::measure::{BoundaryPartition, Configuration};
use crate::unionfind::UnionFind;

const NONE: u32 = u32::MAX;

/// Axis-aligned bounding box of a cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    fn at(p: Point) -> Self {
        BoundingBox { min: p, max: p }
    }

    fn include(&mut self, p: Point) {
        self.min = Point::new(self.min.x.min(p.x), self.min.y.min(p.y));
        self.max = Point::new(self.max.x.max(p.x), self.max.y.max(p.y));
    }

    /// L∞ diameter of the point set spanning the box.
    pub fn diameter(&self) -> u32 {
        (self.max.x - self.min.x).max(self.max.y - self.min.y) as u32
    }
}

/// Primal clusters of ω (wired blocks contracted) and dual clusters of ω*.
/// Dual vertices are the interior faces plus one exterior vertex with index
/// `num_faces`, reached through closed edges on the boundary.
#[derive(Clone, Debug)]
pub struct ClusterLabeling {
    pub primal: Vec<u32>,
    pub primal_sizes: Vec<u32>,
    pub primal_boxes: Vec<BoundingBox>,
    pub dual: Vec<u32>,
    pub dual_sizes: Vec<u32>,
}

impl ClusterLabeling {
    pub fn num_primal(&self) -> usize {
        self.primal_sizes.len()
    }

    pub fn num_dual(&self) -> usize {
        self.dual_sizes.len()
    }
}

/// Relabels union-find roots as 0, 1, 2, … in order of first appearance.
fn compact_labels(uf: &mut UnionFind, n: usize) -> (Vec<u32>, Vec<u32>) {
    let mut map = vec![NONE; n];
    let mut labels = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for v in 0..n as u32 {
        let r = uf.find(v) as usize;
        if map[r] == NONE {
            map[r] = sizes.len() as u32;
            sizes.push(0);
        }
        labels.push(map[r]);
        sizes[map[r] as usize] += 1;
    }
    (labels, sizes)
}

pub fn clusters(domain: &Domain, config: &Configuration, bc: &BoundaryPartition) -> Result<ClusterLabeling> {
    config.check_len(domain)?;
    if bc.num_vertices() != domain.num_vertices() {
        return Err(Error::SizeMismatch { expected: domain.num_vertices(), found: bc.num_vertices() });
    }
    let mut uf = UnionFind::new(0);
    bc.seed(&mut uf);
    for (e, &[u, v]) in domain.edges().iter().enumerate() {
        if config.get(e) {
            uf.union(u, v);
        }
    }
    let (primal, primal_sizes) = compact_labels(&mut uf, domain.num_vertices());
    let mut primal_boxes: Vec<Option<BoundingBox>> = vec![None; primal_sizes.len()];
    for (v, &c) in primal.iter().enumerate() {
        let p = domain.vertex(v as u32);
        match &mut primal_boxes[c as usize] {
            Some(b) => b.include(p),
            slot => *slot = Some(BoundingBox::at(p)),
        }
    }

    let nf = domain.num_faces();
    let mut duf = UnionFind::new(nf + 1);
    for e in 0..domain.num_edges() as u32 {
        if !config.get(e as usize) {
            let [f, g] = domain.edge_faces(e);
            duf.union(f.unwrap_or(nf as u32), g.unwrap_or(nf as u32));
        }
    }
    let (dual, dual_sizes) = compact_labels(&mut duf, nf + 1);
    Ok(ClusterLabeling {
        primal,
        primal_sizes,
        primal_boxes: primal_boxes.into_iter().map(Option::unwrap).collect(),
        dual,
        dual_sizes,
    })
}

/// Labels of the clusters of ω restricted to the vertices selected by
/// `keep`; unselected vertices get `u32::MAX`. Returns labels and boxes.
pub fn region_clusters(
    domain: &Domain,
    config: &Configuration,
    keep: impl Fn(Point) -> bool,
) -> (Vec<u32>, Vec<BoundingBox>) {
    let n = domain.num_vertices();
    let inside: Vec<bool> = domain.vertices().iter().map(|&p| keep(p)).collect();
    let mut uf = UnionFind::new(n);
    for (e, &[u, v]) in domain.edges().iter().enumerate() {
        if config.get(e) && inside[u as usize] && inside[v as usize] {
            uf.union(u, v);
        }
    }
    let mut map = vec![NONE; n];
    let mut labels = vec![NONE; n];
    let mut boxes: Vec<BoundingBox> = Vec::new();
    for v in 0..n as u32 {
        if !inside[v as usize] {
            continue;
        }
        let r = uf.find(v) as usize;
        let p = domain.vertex(v);
        if map[r] == NONE {
            map[r] = boxes.len() as u32;
            boxes.push(BoundingBox::at(p));
        } else {
            boxes[map[r] as usize].include(p);
        }
        labels[v as usize] = map[r];
    }
    (labels, boxes)
}

/// Whether an open path joins `from` to `to` using vertices selected by `keep`.
pub fn open_path_exists(
    domain: &Domain,
    config: &Configuration,
    from: &[u32],
    to: &[u32],
    keep: impl Fn(Point) -> bool,
) -> bool {
    let mut target = vec![false; domain.num_vertices()];
    for &v in to {
        target[v as usize] = true;
    }
    let mut seen = vec![false; domain.num_vertices()];
    let mut queue = VecDeque::new();
    for &v in from {
        if keep(domain.vertex(v)) && !seen[v as usize] {
            seen[v as usize] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if target[v as usize] {
            return true;
        }
        for &(w, e) in domain.neighbors(v) {
            if config.get(e as usize) && !seen[w as usize] && keep(domain.vertex(w)) {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Open path from (ab) to (cd) inside the quad.
pub fn has_crossing(quad: &Quad, config: &Configuration) -> bool {
    open_path_exists(quad.domain(), config, &quad.arc(0), &quad.arc(2), |_| true)
}

/// Open circuit in Λ_{2n}(c) \ Λ_n(c) surrounding Λ_n(c). Equivalent to the
/// absence of a dual path through the faces of that annulus crossing a
/// closed edge of the inner ring first and a closed edge of the outer ring last.
pub fn has_circuit(domain: &Domain, config: &Configuration, center: Point, n: i32) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidParams("box radius must be at least 1"));
    }
    if !domain.contains_box(center, 2 * n) {
        return Err(Error::OutOfDomain);
    }
    let (lo, hi) = (n + 1, 2 * n);
    let edge = |p: Point, q: Point| domain.edge_between(p, q).unwrap() as usize;
    let ring = |rad: i32| -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for t in -rad..rad {
            out.push((center.offset(t, -rad), center.offset(t + 1, -rad)));
            out.push((center.offset(t, rad), center.offset(t + 1, rad)));
            out.push((center.offset(-rad, t), center.offset(-rad, t + 1)));
            out.push((center.offset(rad, t), center.offset(rad, t + 1)));
        }
        out
    };
    if lo == hi {
        return Ok(ring(lo).iter().all(|&(p, q)| config.get(edge(p, q))));
    }
    // Faces (lower-left corners relative to the centre) with all corners in the band.
    let side = 2 * hi;
    let in_band = |f: Point| {
        let rel = Point::new(f.x - center.x, f.y - center.y);
        let corners = [rel, rel.offset(1, 0), rel.offset(0, 1), rel.offset(1, 1)];
        corners.iter().all(|c| c.norm() >= lo && c.norm() <= hi)
    };
    let fidx = |f: Point| ((f.y - center.y + hi) * side + (f.x - center.x + hi)) as usize;
    let mut seen = vec![false; (side * side) as usize];
    let mut queue = VecDeque::new();
    for (p, q) in ring(lo) {
        if config.get(edge(p, q)) {
            continue;
        }
        // The face on the far side from the centre.
        let f = if p.y == q.y {
            if p.y > center.y { p.min(q) } else { p.min(q).offset(0, -1) }
        } else if p.x > center.x {
            p.min(q)
        } else {
            p.min(q).offset(-1, 0)
        };
        if in_band(f) && !seen[fidx(f)] {
            seen[fidx(f)] = true;
            queue.push_back(f);
        }
    }
    let outer: Vec<(Point, Point)> = ring(hi);
    while let Some(f) = queue.pop_front() {
        let sides = [
            (f, f.offset(1, 0), f.offset(0, -1)),
            (f.offset(0, 1), f.offset(1, 1), f.offset(0, 1)),
            (f, f.offset(0, 1), f.offset(-1, 0)),
            (f.offset(1, 0), f.offset(1, 1), f.offset(1, 0)),
        ];
        for (p, q, g) in sides {
            if config.get(edge(p, q)) {
                continue;
            }
            if outer.contains(&(p, q)) {
                return Ok(false);
            }
            if in_band(g) && !seen[fidx(g)] {
                seen[fidx(g)] = true;
                queue.push_back(g);
            }
        }
    }
    Ok(true)
}

/// Distinct clusters C₁…C_k consecutively joined by closed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterChain {
    /// Cluster labels of ω with free boundary conditions in the domain.
    pub clusters: Vec<u32>,
    /// The closed edge joining C_j to C_{j+1}.
    pub defects: Vec<u32>,
    pub diameters: Vec<u32>,
}

/// Minimal number of closed edges on a path from (ab) to (cd), by 0/1
/// breadth-first search, with the chain of clusters along one optimal path.
pub fn hamming_crossing(quad: &Quad, config: &Configuration) -> (u32, ClusterChain) {
    let domain = quad.domain();
    let n = domain.num_vertices();
    let mut dist = vec![u32::MAX; n];
    let mut pred: Vec<(u32, u32)> = vec![(NONE, NONE); n];
    let mut deque = VecDeque::new();
    for v in quad.arc(0) {
        dist[v as usize] = 0;
        deque.push_back(v);
    }
    let mut target = vec![false; n];
    for v in quad.arc(2) {
        target[v as usize] = true;
    }
    let mut end = NONE;
    while let Some(v) = deque.pop_front() {
        if target[v as usize] {
            end = v;
            break;
        }
        let d = dist[v as usize];
        for &(w, e) in domain.neighbors(v) {
            let cost = u32::from(!config.get(e as usize));
            if d + cost < dist[w as usize] {
                dist[w as usize] = d + cost;
                pred[w as usize] = (v, e);
                if cost == 0 {
                    deque.push_front(w);
                } else {
                    deque.push_back(w);
                }
            }
        }
    }
    let k = dist[end as usize];
    let (labels, boxes) = region_clusters(domain, config, |_| true);
    let mut clusters = vec![labels[end as usize]];
    let mut defects = Vec::new();
    let mut v = end;
    while pred[v as usize].0 != NONE {
        let (u, e) = pred[v as usize];
        if !config.get(e as usize) {
            defects.push(e);
            clusters.push(labels[u as usize]);
        }
        v = u;
    }
    clusters.reverse();
    defects.reverse();
    let diameters = clusters.iter().map(|&c| boxes[c as usize].diameter()).collect();
    (k, ClusterChain { clusters, defects, diameters })
}

/// Adjacency of clusters through single closed edges, restricted to clusters
/// accepted by `allowed`.
fn cluster_graph(domain: &Domain, config: &Configuration, labels: &[u32], n_clusters: usize, allowed: &[bool]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n_clusters];
    for (e, &[u, v]) in domain.edges().iter().enumerate() {
        if config.get(e) {
            continue;
        }
        let (a, b) = (labels[u as usize], labels[v as usize]);
        if a == NONE || b == NONE || a == b || !allowed[a as usize] || !allowed[b as usize] {
            continue;
        }
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Number of clusters on a shortest chain from any source, per cluster.
fn chain_lengths(adj: &[Vec<u32>], sources: &[u32]) -> Vec<u32> {
    let mut len = vec![u32::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if len[s as usize] == u32::MAX {
            len[s as usize] = 1;
            queue.push_back(s);
        }
    }
    while let Some(c) = queue.pop_front() {
        for &d in &adj[c as usize] {
            if len[d as usize] == u32::MAX {
                len[d as usize] = len[c as usize] + 1;
                queue.push_back(d);
            }
        }
    }
    len
}

/// G(K, α, N, ℓ): a chain of at most `k_max` clusters of ω inside the quad,
/// each of diameter at least `min_diameter`, joining (ab) to (cd).
pub fn event_g(quad: &Quad, config: &Configuration, k_max: u32, min_diameter: u32) -> bool {
    let domain = quad.domain();
    let (labels, boxes) = region_clusters(domain, config, |_| true);
    let allowed: Vec<bool> = boxes.iter().map(|b| b.diameter() >= min_diameter).collect();
    let adj = cluster_graph(domain, config, &labels, boxes.len(), &allowed);
    let sources: Vec<u32> =
        quad.arc(0).iter().map(|&v| labels[v as usize]).filter(|&c| allowed[c as usize]).collect();
    let len = chain_lengths(&adj, &sources);
    quad.arc(2).iter().any(|&v| len[labels[v as usize] as usize] <= k_max)
}

fn in_box(center: Point, n: i32) -> impl Fn(Point) -> bool {
    move |p: Point| p.linf(center) <= n
}

/// H(K, α, δ, N): any two clusters of ω ∩ Λ_N of diameter at least
/// `delta_diameter` are joined by a chain of at most `k_max` clusters each of
/// diameter at least `alpha_diameter`.
pub fn event_h(
    domain: &Domain,
    config: &Configuration,
    center: Point,
    n: i32,
    k_max: u32,
    alpha_diameter: u32,
    delta_diameter: u32,
) -> Result<bool> {
    if !domain.contains_box(center, n) {
        return Err(Error::OutOfDomain);
    }
    let (labels, boxes) = region_clusters(domain, config, in_box(center, n));
    let allowed: Vec<bool> = boxes.iter().map(|b| b.diameter() >= alpha_diameter).collect();
    let big: Vec<u32> = (0..boxes.len() as u32).filter(|&c| boxes[c as usize].diameter() >= delta_diameter).collect();
    let adj = cluster_graph(domain, config, &labels, boxes.len(), &allowed);
    for (i, &c) in big.iter().enumerate() {
        if !allowed[c as usize] {
            if big.len() > 1 {
                return Ok(false);
            }
            continue;
        }
        let len = chain_lengths(&adj, &[c]);
        if big[i + 1..].iter().any(|&d| len[d as usize] > k_max) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// F(α, δ, N): two clusters of ω ∩ Λ_N of diameter at least `delta_diameter`
/// at L∞ distance d with 1 < d ≤ `alpha_distance`.
pub fn event_f(
    domain: &Domain,
    config: &Configuration,
    center: Point,
    n: i32,
    alpha_distance: u32,
    delta_diameter: u32,
) -> Result<bool> {
    if !domain.contains_box(center, n) {
        return Err(Error::OutOfDomain);
    }
    let (labels, boxes) = region_clusters(domain, config, in_box(center, n));
    let big: Vec<bool> = boxes.iter().map(|b| b.diameter() >= delta_diameter).collect();
    let side = 2 * n + 1;
    let idx = |p: Point| ((p.y - center.y + n) * side + (p.x - center.x + n)) as usize;
    let mut cell_label = vec![NONE; (side * side) as usize];
    let mut members: Vec<Vec<Point>> = vec![Vec::new(); boxes.len()];
    for (v, &c) in labels.iter().enumerate() {
        if c != NONE {
            let p = domain.vertex(v as u32);
            cell_label[idx(p)] = c;
            if big[c as usize] {
                members[c as usize].push(p);
            }
        }
    }
    // Chebyshev breadth-first search from each big cluster up to radius
    // `alpha_distance`; the first time another big cluster is reached gives
    // the distance between the two.
    let mut dist = vec![u32::MAX; cell_label.len()];
    let mut touched = Vec::new();
    let mut nearest = vec![u32::MAX; boxes.len()];
    for (a, start) in members.iter().enumerate() {
        if start.is_empty() {
            continue;
        }
        for &k in &touched {
            dist[k] = u32::MAX;
        }
        touched.clear();
        let mut queue = VecDeque::new();
        for &p in start {
            dist[idx(p)] = 0;
            touched.push(idx(p));
            queue.push_back(p);
        }
        let mut found = Vec::new();
        while let Some(p) = queue.pop_front() {
            let d = dist[idx(p)];
            if d >= alpha_distance {
                continue;
            }
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let q = p.offset(dx, dy);
                    if q.linf(center) > n || dist[idx(q)] != u32::MAX {
                        continue;
                    }
                    let j = idx(q);
                    dist[j] = d + 1;
                    touched.push(j);
                    queue.push_back(q);
                    let c = cell_label[j];
                    if c != NONE && c as usize != a && big[c as usize] && nearest[c as usize] == u32::MAX {
                        nearest[c as usize] = d + 1;
                        found.push(c);
                    }
                }
            }
        }
        if found.iter().any(|&c| nearest[c as usize] > 1) {
            return Ok(true);
        }
        for c in found {
            nearest[c as usize] = u32::MAX;
        }
    }
    Ok(false)
}

fn check_centred(domain: &Domain, r: i32) -> Result<()> {
    if !is_r_centred(domain, r) {
        return Err(Error::NotCentred);
    }
    Ok(())
}

/// M_r(D, R): r-boxes (translates of Λ_r by (1∨r)Z²) meeting ∂D with a vertex
/// connected to Λ_R by an open path in D ∩ Λ_{7R}.
pub fn count_boundary_boxes(domain: &Domain, config: &Configuration, big_r: i32, r: i32) -> Result<usize> {
    check_centred(domain, big_r)?;
    if r < 0 {
        return Err(Error::InvalidParams("box radius must be non-negative"));
    }
    let origin = Point::new(0, 0);
    let (labels, boxes) = region_clusters(domain, config, in_box(origin, 7 * big_r));
    let mut hits_core = vec![false; boxes.len()];
    for (v, &c) in labels.iter().enumerate() {
        if c != NONE && domain.vertex(v as u32).norm() <= big_r {
            hits_core[c as usize] = true;
        }
    }
    let step = r.max(1);
    let mut seen: Vec<(i32, i32)> = Vec::new();
    for &v in domain.boundary() {
        let p = domain.vertex(v);
        // Box centres kZ² within distance r of p.
        let (xl, xh) = ((p.x - r).div_euclid(step), (p.x + r).div_euclid(step) + 1);
        let (yl, yh) = ((p.y - r).div_euclid(step), (p.y + r).div_euclid(step) + 1);
        for i in xl..=xh {
            for j in yl..=yh {
                let c = Point::new(i * step, j * step);
                if c.linf(p) <= r {
                    seen.push((i, j));
                }
            }
        }
    }
    seen.sort_unstable();
    seen.dedup();
    let mut count = 0;
    for (i, j) in seen {
        let c = Point::new(i * step, j * step);
        let connected = (-r..=r).any(|dx| {
            (-r..=r).any(|dy| {
                domain
                    .vertex_index(c.offset(dx, dy))
                    .is_some_and(|v| labels[v as usize] != NONE && hits_core[labels[v as usize] as usize])
            })
        });
        if connected {
            count += 1;
        }
    }
    Ok(count)
}

/// Λ_R is joined to ∂D by an open path in D ∩ Λ_{9R}.
pub fn core_touches_boundary(domain: &Domain, config: &Configuration, big_r: i32) -> Result<bool> {
    check_centred(domain, big_r)?;
    let core: Vec<u32> = (0..domain.num_vertices() as u32).filter(|&v| domain.vertex(v).norm() <= big_r).collect();
    Ok(open_path_exists(domain, config, &core, domain.boundary(), in_box(Point::new(0, 0), 9 * big_r)))
}
