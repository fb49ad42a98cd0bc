//! Discrete domains of Z², quads, annuli and the special shapes used by the
//! experiments.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    /// L∞ norm.
    pub fn norm(self) -> i32 {
        self.x.abs().max(self.y.abs())
    }

    pub fn linf(self, other: Point) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn offset(self, dx: i32, dy: i32) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }

    fn is_unit_step(self, other: Point) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

/// Simple counterclockwise lattice loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryLoop {
    points: Vec<Point>,
}

impl BoundaryLoop {
    /// Validates the loop; a clockwise loop is reversed rather than rejected.
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(Error::InvalidLoop("fewer than four vertices"));
        }
        for i in 0..n {
            if !points[i].is_unit_step(points[(i + 1) % n]) {
                return Err(Error::InvalidLoop("consecutive vertices are not lattice neighbours"));
            }
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLoop("loop visits a vertex twice"));
        }
        let area2: i64 = (0..n)
            .map(|i| {
                let (p, q) = (points[i], points[(i + 1) % n]);
                p.x as i64 * q.y as i64 - q.x as i64 * p.y as i64
            })
            .sum();
        if area2 == 0 {
            return Err(Error::InvalidLoop("loop encloses no area"));
        }
        if area2 < 0 {
            points.reverse();
        }
        Ok(BoundaryLoop { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Bounding box with dense row-major lookup tables.
#[derive(Clone, Debug)]
struct Grid {
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
}

impl Grid {
    fn index(&self, p: Point) -> Option<usize> {
        let (dx, dy) = (p.x - self.x0, p.y - self.y0);
        if dx < 0 || dy < 0 || dx >= self.w || dy >= self.h {
            None
        } else {
            Some((dy * self.w + dx) as usize)
        }
    }

    fn len(&self) -> usize {
        (self.w * self.h) as usize
    }
}

/// A simply connected subgraph of Z² enclosed by a simple loop.
///
/// Vertices are stored in lexicographic order, so vertex indices, and edges
/// sorted by `(min endpoint, max endpoint)`, give the canonical edge order used
/// for every configuration bit string.
#[derive(Clone, Debug)]
pub struct Domain {
    boundary_loop: BoundaryLoop,
    vertices: Vec<Point>,
    edges: Vec<[u32; 2]>,
    faces: Vec<Point>,
    boundary: Vec<u32>,
    boundary_pos: Vec<u32>,
    grid: Grid,
    vid: Vec<u32>,
    hedge: Vec<u32>,
    vedge: Vec<u32>,
    fid: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<(u32, u32)>,
}

impl Domain {
    pub fn new(boundary_loop: BoundaryLoop) -> Domain {
        let pts = boundary_loop.points();
        let xmin = pts.iter().map(|p| p.x).min().unwrap();
        let xmax = pts.iter().map(|p| p.x).max().unwrap();
        let ymin = pts.iter().map(|p| p.y).min().unwrap();
        let ymax = pts.iter().map(|p| p.y).max().unwrap();
        let grid = Grid { x0: xmin, y0: ymin, w: xmax - xmin + 1, h: ymax - ymin + 1 };

        // Scanline fill: the ray at height y + 1/2 crosses the vertical loop
        // edges spanning [y, y+1]; faces between consecutive crossings are inside.
        let mut crossings: Vec<Vec<i32>> = vec![Vec::new(); grid.h as usize];
        let n = pts.len();
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            if p.x == q.x {
                crossings[(p.y.min(q.y) - ymin) as usize].push(p.x);
            }
        }
        let mut faces = Vec::new();
        for (row, xs) in crossings.iter_mut().enumerate() {
            xs.sort_unstable();
            for pair in xs.chunks(2) {
                for x in pair[0]..pair[1] {
                    faces.push(Point::new(x, ymin + row as i32));
                }
            }
        }
        faces.sort_unstable();

        let cells = grid.len();
        let mut is_vertex = vec![false; cells];
        let mut has_h = vec![false; cells];
        let mut has_v = vec![false; cells];
        let mut fid = vec![NONE; cells];
        for p in pts {
            is_vertex[grid.index(*p).unwrap()] = true;
        }
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            let lo = p.min(q);
            if p.y == q.y {
                has_h[grid.index(lo).unwrap()] = true;
            } else {
                has_v[grid.index(lo).unwrap()] = true;
            }
        }
        for (k, f) in faces.iter().enumerate() {
            fid[grid.index(*f).unwrap()] = k as u32;
            for c in [*f, f.offset(1, 0), f.offset(0, 1), f.offset(1, 1)] {
                is_vertex[grid.index(c).unwrap()] = true;
            }
            has_h[grid.index(*f).unwrap()] = true;
            has_h[grid.index(f.offset(0, 1)).unwrap()] = true;
            has_v[grid.index(*f).unwrap()] = true;
            has_v[grid.index(f.offset(1, 0)).unwrap()] = true;
        }

        // Vertices in lexicographic (x, y) order.
        let mut vertices = Vec::new();
        let mut vid = vec![NONE; cells];
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                let k = grid.index(Point::new(x, y)).unwrap();
                if is_vertex[k] {
                    vid[k] = vertices.len() as u32;
                    vertices.push(Point::new(x, y));
                }
            }
        }
        // Canonical order: by lower endpoint, then by upper endpoint. From a
        // vertex (x, y) the vertical edge goes to (x, y+1) and the horizontal
        // one to (x+1, y), and (x, y+1) < (x+1, y) lexicographically.
        let mut edges = Vec::new();
        let mut hedge = vec![NONE; cells];
        let mut vedge = vec![NONE; cells];
        for (i, p) in vertices.iter().enumerate() {
            let k = grid.index(*p).unwrap();
            if has_v[k] {
                vedge[k] = edges.len() as u32;
                edges.push([i as u32, vid[grid.index(p.offset(0, 1)).unwrap()]]);
            }
            if has_h[k] {
                hedge[k] = edges.len() as u32;
                edges.push([i as u32, vid[grid.index(p.offset(1, 0)).unwrap()]]);
            }
        }

        let boundary: Vec<u32> = pts.iter().map(|p| vid[grid.index(*p).unwrap()]).collect();
        let mut boundary_pos = vec![NONE; vertices.len()];
        for (pos, &v) in boundary.iter().enumerate() {
            boundary_pos[v as usize] = pos as u32;
        }

        let mut d = Domain {
            boundary_loop,
            vertices,
            edges,
            faces,
            boundary,
            boundary_pos,
            grid,
            vid,
            hedge,
            vedge,
            fid,
            adj_start: Vec::new(),
            adj: Vec::new(),
        };
        d.build_adjacency();
        d
    }

    fn build_adjacency(&mut self) {
        let mut adj_start = Vec::with_capacity(self.vertices.len() + 1);
        let mut adj = Vec::with_capacity(2 * self.edges.len());
        for &p in &self.vertices {
            adj_start.push(adj.len() as u32);
            for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                let q = p.offset(dx, dy);
                if let Some(e) = self.edge_between(p, q) {
                    adj.push((self.vertex_index(q).unwrap(), e));
                }
            }
        }
        adj_start.push(adj.len() as u32);
        self.adj_start = adj_start;
        self.adj = adj;
    }

    /// Builds the domain enclosed by a union of unit faces (given by their
    /// lower-left corners). Fails unless the faces form a simply connected
    /// region whose boundary is a simple loop.
    pub fn from_faces(faces: &[Point]) -> Result<Domain> {
        if faces.is_empty() {
            return Err(Error::InvalidParams("empty face set"));
        }
        let mut fs = faces.to_vec();
        fs.sort_unstable();
        fs.dedup();
        let has = |p: Point| fs.binary_search(&p).is_ok();
        // Directed boundary edges with the region on the left.
        let mut next: Vec<(Point, Point)> = Vec::new();
        for &f in &fs {
            if !has(f.offset(0, -1)) {
                next.push((f, f.offset(1, 0)));
            }
            if !has(f.offset(1, 0)) {
                next.push((f.offset(1, 0), f.offset(1, 1)));
            }
            if !has(f.offset(0, 1)) {
                next.push((f.offset(1, 1), f.offset(0, 1)));
            }
            if !has(f.offset(-1, 0)) {
                next.push((f.offset(0, 1), f));
            }
        }
        next.sort_unstable();
        if next.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParams("face set has a pinch vertex"));
        }
        let start = next[0].0;
        let mut pts = vec![start];
        let mut cur = start;
        loop {
            let k = next
                .binary_search_by(|probe| probe.0.cmp(&cur))
                .map_err(|_| Error::InvalidParams("boundary does not close"))?;
            cur = next[k].1;
            if cur == start {
                break;
            }
            pts.push(cur);
            if pts.len() > next.len() {
                return Err(Error::InvalidParams("boundary does not close"));
            }
        }
        if pts.len() != next.len() {
            return Err(Error::InvalidParams("face set has holes or several components"));
        }
        let d = Domain::new(BoundaryLoop::new(pts).map_err(|_| Error::InvalidParams("non-simple boundary"))?);
        if d.faces.len() != fs.len() {
            return Err(Error::InvalidParams("face set has holes"));
        }
        Ok(d)
    }

    pub fn boundary_loop(&self) -> &BoundaryLoop {
        &self.boundary_loop
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: u32) -> Point {
        self.vertices[v as usize]
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> [u32; 2] {
        self.edges[e as usize]
    }

    pub fn edge_points(&self, e: u32) -> (Point, Point) {
        let [a, b] = self.edges[e as usize];
        (self.vertices[a as usize], self.vertices[b as usize])
    }

    /// Interior faces by lower-left corner, lexicographic.
    pub fn faces(&self) -> &[Point] {
        &self.faces
    }

    /// Boundary vertices in counterclockwise loop order.
    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        self.boundary_pos[v as usize] != NONE
    }

    /// Position of `v` along the boundary loop.
    pub fn boundary_position(&self, v: u32) -> Option<usize> {
        let p = self.boundary_pos[v as usize];
        (p != NONE).then_some(p as usize)
    }

    pub fn vertex_index(&self, p: Point) -> Option<u32> {
        let k = self.grid.index(p)?;
        let v = self.vid[k];
        (v != NONE).then_some(v)
    }

    pub fn contains_vertex(&self, p: Point) -> bool {
        self.vertex_index(p).is_some()
    }

    pub fn edge_between(&self, p: Point, q: Point) -> Option<u32> {
        if !p.is_unit_step(q) {
            return None;
        }
        let lo = p.min(q);
        let k = self.grid.index(lo)?;
        let e = if p.y == q.y { self.hedge[k] } else { self.vedge[k] };
        (e != NONE).then_some(e)
    }

    pub fn face_index(&self, lower_left: Point) -> Option<u32> {
        let k = self.grid.index(lower_left)?;
        let f = self.fid[k];
        (f != NONE).then_some(f)
    }

    /// The two lattice faces bordering edge `e` (lower-left corners): for a
    /// horizontal edge the face above then below, for a vertical edge the face
    /// to the right then left.
    pub fn edge_face_corners(&self, e: u32) -> [Point; 2] {
        let (p, q) = self.edge_points(e);
        if p.y == q.y {
            [p, p.offset(0, -1)]
        } else {
            [p, p.offset(-1, 0)]
        }
    }

    /// Interior faces bordering `e`, if any, in the order of
    /// [`Domain::edge_face_corners`].
    pub fn edge_faces(&self, e: u32) -> [Option<u32>; 2] {
        let [f, g] = self.edge_face_corners(e);
        [self.face_index(f), self.face_index(g)]
    }

    /// `(neighbour, edge)` pairs in E, N, W, S order.
    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        let (s, t) = (self.adj_start[v as usize] as usize, self.adj_start[v as usize + 1] as usize);
        &self.adj[s..t]
    }

    /// Edges with exactly one adjacent interior face.
    pub fn boundary_edges(&self) -> Vec<u32> {
        (0..self.edges.len() as u32)
            .filter(|&e| {
                let [f, g] = self.edge_faces(e);
                f.is_some() != g.is_some()
            })
            .collect()
    }

    /// Recovers the boundary loop from (V, E) alone: follow the edges with one
    /// interior face, keeping that face on the left.
    pub fn extract_boundary_loop(&self) -> Vec<Point> {
        let bedges = self.boundary_edges();
        let mut succ: Vec<(Point, Point)> = bedges
            .iter()
            .map(|&e| {
                let (p, q) = self.edge_points(e);
                let [first, second] = self.edge_faces(e);
                // Walking east the left face is the one above (first); walking
                // north it is the one to the west (second).
                let forward = if p.y == q.y { first.is_some() } else { second.is_some() };
                if forward {
                    (p, q)
                } else {
                    (q, p)
                }
            })
            .collect();
        succ.sort_unstable();
        let start = self.vertices[self.boundary[0] as usize];
        let mut out = vec![start];
        let mut cur = start;
        loop {
            let k = succ.binary_search_by(|s| s.0.cmp(&cur)).expect("boundary is a cycle");
            cur = succ[k].1;
            if cur == start {
                break;
            }
            out.push(cur);
        }
        out
    }

    /// Whether every edge of the box `Λ_n(center)` lies in the domain.
    pub fn contains_box(&self, center: Point, n: i32) -> bool {
        for x in -n..=n {
            for y in -n..=n {
                let p = center.offset(x, y);
                if !self.contains_vertex(p) {
                    return false;
                }
                if x < n && self.edge_between(p, p.offset(1, 0)).is_none() {
                    return false;
                }
                if y < n && self.edge_between(p, p.offset(0, 1)).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Closed counterclockwise arc of loop positions from `from` to `to`.
    pub fn arc_positions(&self, from: usize, to: usize) -> Vec<usize> {
        let n = self.boundary.len();
        let len = (to + n - from) % n;
        (0..=len).map(|k| (from + k) % n).collect()
    }
}

/// Box Λ_n(center) = center + [-n, n]².
pub fn box_domain(n: i32, center: Point) -> Result<Domain> {
    if n < 1 {
        return Err(Error::InvalidParams("box radius must be at least 1"));
    }
    rectangle(center.x - n, center.y - n, 2 * n, 2 * n)
}

/// The rectangle [x0, x0 + w] × [y0, y0 + h].
pub fn rectangle(x0: i32, y0: i32, w: i32, h: i32) -> Result<Domain> {
    if w < 1 || h < 1 {
        return Err(Error::InvalidParams("rectangle sides must be positive"));
    }
    let mut pts = Vec::with_capacity(2 * (w + h) as usize);
    for i in 0..w {
        pts.push(Point::new(x0 + i, y0));
    }
    for j in 0..h {
        pts.push(Point::new(x0 + w, y0 + j));
    }
    for i in 0..w {
        pts.push(Point::new(x0 + w - i, y0 + h));
    }
    for j in 0..h {
        pts.push(Point::new(x0, y0 + h - j));
    }
    Ok(Domain::new(BoundaryLoop::new(pts)?))
}

/// Closing curve of a corner domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerClosing {
    /// Monotone staircase from (ℓ, 0) up to (0, m).
    Staircase,
    /// The rectangle [0, ℓ] × [0, m].
    Rectangle,
}

/// Named special shapes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecialKind {
    Box { n: i32, center: Point },
    /// Λ_{3R} with the vertices (x, 0), x ≥ 1 removed; marks a = b = 0.
    SlitBox { r: i32 },
    /// Boundary made of [0, ℓ]×{0}, {0}×[0, m] and a closing curve; marks
    /// a = (ℓ, 0), b = (0, m), wired arc (ba) along the two axes.
    Corner { m: i32, ell: i32, closing: CornerClosing },
    /// [-w, w] × [0, 2R] with a = b = 0.
    TruncatedStrip { r: i32, half_width: i32 },
    /// Points of the strip Z × [0, 2R] above the two half-lines leaving
    /// (0, -r) with slopes ±1/k; marks a = (kr, 0), b = (-kr, 0).
    Trapeze { big_r: i32, r: i32, k: i32 },
    /// Mirror image (y ↦ -y) of ([-w, w] × [-2R, 2R]) minus the trapeze.
    TrapezeComplement { big_r: i32, r: i32, k: i32, half_width: i32 },
    /// [-n, n] × [0, n], the finite-volume stand-in for the half-plane.
    HalfPlaneRect { n: i32 },
}

/// Builds a special domain together with the marks (a, b) its kind defines.
pub fn special_domain(kind: SpecialKind) -> Result<(Domain, Option<(Point, Point)>)> {
    let origin = Point::new(0, 0);
    match kind {
        SpecialKind::Box { n, center } => Ok((box_domain(n, center)?, None)),
        SpecialKind::SlitBox { r } => {
            if r < 1 {
                return Err(Error::InvalidParams("slit box needs R >= 1"));
            }
            let n = 3 * r;
            let faces: Vec<Point> = (-n..n)
                .flat_map(|x| (-n..n).map(move |y| Point::new(x, y)))
                .filter(|f| !(f.x >= 0 && (f.y == 0 || f.y == -1)))
                .collect();
            Ok((Domain::from_faces(&faces)?, Some((origin, origin))))
        }
        SpecialKind::Corner { m, ell, closing } => {
            if m < 1 || ell < 1 {
                return Err(Error::InvalidParams("corner needs m, l >= 1"));
            }
            let width = |j: i32| -> i32 {
                match closing {
                    CornerClosing::Rectangle => ell,
                    CornerClosing::Staircase => (ell * (m - j) + m - 1) / m,
                }
                .max(1)
            };
            let faces: Vec<Point> =
                (0..m).flat_map(|j| (0..width(j)).map(move |i| Point::new(i, j))).collect();
            Ok((Domain::from_faces(&faces)?, Some((Point::new(ell, 0), Point::new(0, m)))))
        }
        SpecialKind::TruncatedStrip { r, half_width } => {
            if r < 1 || half_width < 1 {
                return Err(Error::InvalidParams("strip needs R, w >= 1"));
            }
            Ok((rectangle(-half_width, 0, 2 * half_width, 2 * r)?, Some((origin, origin))))
        }
        SpecialKind::Trapeze { big_r, r, k } => {
            let faces = trapeze_faces(big_r, r, k)?;
            let (a, b) = (Point::new(k * r, 0), Point::new(-k * r, 0));
            Ok((Domain::from_faces(&faces)?, Some((a, b))))
        }
        SpecialKind::TrapezeComplement { big_r, r, k, half_width } => {
            let inner = trapeze_faces(big_r, r, k)?;
            if half_width <= k * (2 * big_r + r) {
                return Err(Error::InvalidParams("truncation narrower than the trapeze"));
            }
            let faces: Vec<Point> = (-half_width..half_width)
                .flat_map(|x| (-2 * big_r..2 * big_r).map(move |y| Point::new(x, y)))
                .filter(|f| inner.binary_search(f).is_err())
                .map(|f| Point::new(f.x, -f.y - 1))
                .collect();
            let (a, b) = (Point::new(-k * r, 0), Point::new(k * r, 0));
            Ok((Domain::from_faces(&faces)?, Some((a, b))))
        }
        SpecialKind::HalfPlaneRect { n } => Ok((rectangle(-n, 0, 2 * n, n)?, None)),
    }
}

fn trapeze_faces(big_r: i32, r: i32, k: i32) -> Result<Vec<Point>> {
    if big_r < 1 || r < 1 || k < 1 {
        return Err(Error::InvalidParams("trapeze needs R, r, k >= 1"));
    }
    // A face is kept when all four corners lie on or above both half-lines,
    // i.e. |x| <= k (y + r).
    let inside = |x: i32, y: i32| x.abs() <= k * (y + r);
    let w = k * (2 * big_r + r);
    let mut faces = Vec::new();
    for x in -w..w {
        for y in 0..2 * big_r {
            if inside(x, y) && inside(x + 1, y) && inside(x, y + 1) && inside(x + 1, y + 1) {
                faces.push(Point::new(x, y));
            }
        }
    }
    faces.sort_unstable();
    Ok(faces)
}

/// Every domain with at most `max_edges` edges, up to translation: unions of
/// unit faces with a simple boundary loop, normalised so that the lowest
/// face row and leftmost face column are at 0. Sorted by (|E|, faces).
pub fn all_domains(max_edges: usize) -> Vec<Domain> {
    use alloc::collections::BTreeSet;

    fn normalise(mut faces: Vec<Point>) -> Vec<Point> {
        let x0 = faces.iter().map(|f| f.x).min().unwrap();
        let y0 = faces.iter().map(|f| f.y).min().unwrap();
        for f in &mut faces {
            *f = Point::new(f.x - x0, f.y - y0);
        }
        faces.sort_unstable();
        faces
    }
    // |E| of a face set whose boundary is a loop of length L is (4n + L) / 2.
    fn edge_count(faces: &[Point]) -> usize {
        let has = |p: Point| faces.binary_search(&p).is_ok();
        let exposed: usize = faces
            .iter()
            .map(|&f| [(0, -1), (1, 0), (0, 1), (-1, 0)].iter().filter(|&&(dx, dy)| !has(f.offset(dx, dy))).count())
            .sum();
        (4 * faces.len() + exposed) / 2
    }

    // Adding a face never removes an edge, so growth stops at the edge cap.
    let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
    let mut frontier = vec![vec![Point::new(0, 0)]];
    while let Some(faces) = frontier.pop() {
        if edge_count(&faces) > max_edges || !seen.insert(faces.clone()) {
            continue;
        }
        for &f in &faces {
            for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                let g = f.offset(dx, dy);
                if faces.binary_search(&g).is_err() {
                    let mut next = faces.clone();
                    next.push(g);
                    frontier.push(normalise(next));
                }
            }
        }
    }
    let mut out: Vec<(usize, Vec<Point>, Domain)> = seen
        .into_iter()
        .filter_map(|faces| Domain::from_faces(&faces).ok().map(|d| (d.num_edges(), faces, d)))
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, d)| d).collect()
}

/// Λ_{2R} ⊆ D and Λ_{3R} ⊄ D.
pub fn is_r_centred(domain: &Domain, r: i32) -> bool {
    r >= 1 && domain.contains_box(Point::new(0, 0), 2 * r) && !domain.contains_box(Point::new(0, 0), 3 * r)
}

/// Families of randomly generated R-centred domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentredFamily {
    /// Λ_{2R} with random-walk height profiles grown outward from each side.
    StaircaseNoise,
    /// Λ_{2R} with a unit-width corridor spiralling around it.
    Spiral,
    /// Λ_{2R} with unit-width teeth of random length on two opposite sides.
    SlitComb,
}

impl CentredFamily {
    pub const ALL: [CentredFamily; 3] = [CentredFamily::StaircaseNoise, CentredFamily::Spiral, CentredFamily::SlitComb];

    pub fn name(self) -> &'static str {
        match self {
            CentredFamily::StaircaseNoise => "staircase-noise",
            CentredFamily::Spiral => "spiral",
            CentredFamily::SlitComb => "slit-comb",
        }
    }
}

/// Deterministic per `(R, family, seed)`.
pub fn random_centred_domain(r: i32, family: CentredFamily, seed: u64) -> Result<Domain> {
    if r < 1 {
        return Err(Error::InvalidParams("R must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let mut faces = box_faces(2 * r);
        match family {
            CentredFamily::StaircaseNoise => staircase_noise(&mut faces, r, &mut rng),
            CentredFamily::Spiral => spiral(&mut faces, r, &mut rng),
            CentredFamily::SlitComb => slit_comb(&mut faces, r, &mut rng),
        }
        let turn = rng.gen_range(0..4);
        let flip = rng.gen_bool(0.5);
        let faces: Vec<Point> = faces.into_iter().map(|f| dihedral_face(f, turn, flip)).collect();
        if let Ok(d) = Domain::from_faces(&faces) {
            if is_r_centred(&d, r) {
                return Ok(d);
            }
        }
    }
    Err(Error::GenerationFailed)
}

fn box_faces(n: i32) -> Vec<Point> {
    (-n..n).flat_map(|x| (-n..n).map(move |y| Point::new(x, y))).collect()
}

/// Rotates by `turn` quarter turns (after an optional mirror x ↦ -x) the unit
/// face with lower-left corner `f`, returning the image's lower-left corner.
fn dihedral_face(f: Point, turn: i32, flip: bool) -> Point {
    // Work with doubled face centres so the maps stay integral.
    let (mut cx, mut cy) = (2 * f.x + 1, 2 * f.y + 1);
    if flip {
        cx = -cx;
    }
    for _ in 0..turn {
        (cx, cy) = (-cy, cx);
    }
    Point::new((cx - 1) / 2, (cy - 1) / 2)
}

fn staircase_noise(faces: &mut Vec<Point>, r: i32, rng: &mut ChaCha8Rng) {
    let n = 2 * r;
    let forced_gap = rng.gen_range(1..2 * n - 1);
    for side in 0..4 {
        let mut h: i32 = rng.gen_range(0..=r);
        for t in -n..n {
            h = (h + rng.gen_range(-1..=1)).clamp(0, n);
            // End columns stay empty so neighbouring sides never pinch.
            let mut height = if t == -n || t == n - 1 { 0 } else { h };
            if side == 0 && t == -n + forced_gap {
                height = 0;
            }
            for s in 0..height {
                // side 0 grows upward from the top; the others are rotations.
                let f = Point::new(t, n + s);
                faces.push(dihedral_face(f, side, false));
            }
        }
    }
}

fn spiral(faces: &mut Vec<Point>, r: i32, rng: &mut ChaCha8Rng) {
    let n = 2 * r;
    let legs = rng.gen_range(2..=9);
    faces.push(Point::new(n, 0));
    let (mut x, mut y) = (n + 1, 0);
    faces.push(Point::new(x, y));
    for leg in 0..legs {
        let ring = leg / 4;
        let right = n + 1 + 2 * ring;
        let top = n + 1 + 2 * ring;
        let left = -n - 2 - 2 * ring;
        let bottom = -n - 2 - 2 * ring;
        let (dx, dy, target) = match leg % 4 {
            0 => (0, 1, top),
            1 => (-1, 0, left),
            2 => (0, -1, bottom),
            _ => (1, 0, right + 2),
        };
        let full = if dx != 0 { (target - x).abs() } else { (target - y).abs() };
        let steps = if leg + 1 == legs { rng.gen_range(1..=full) } else { full };
        for _ in 0..steps {
            x += dx;
            y += dy;
            faces.push(Point::new(x, y));
        }
    }
}

fn slit_comb(faces: &mut Vec<Point>, r: i32, rng: &mut ChaCha8Rng) {
    let n = 2 * r;
    for side in [0, 2] {
        let mut t = -n + 1;
        while t <= n - 3 {
            let len = rng.gen_range(1..=n);
            for s in 0..len {
                faces.push(dihedral_face(Point::new(t, n + s), side, false));
            }
            t += 2;
        }
    }
}

/// Quad (D; a, b, c, d) with marks stored as loop positions.
#[derive(Clone, Debug)]
pub struct Quad {
    domain: Domain,
    marks: [usize; 4],
}

impl Quad {
    /// Marks must be distinct boundary vertices in counterclockwise order.
    pub fn new(domain: Domain, marks: [Point; 4]) -> Result<Quad> {
        let mut pos = [0usize; 4];
        for (k, m) in marks.iter().enumerate() {
            let v = domain.vertex_index(*m).ok_or(Error::InvalidMarks("mark outside the domain"))?;
            pos[k] = domain.boundary_position(v).ok_or(Error::InvalidMarks("mark not on the boundary"))?;
        }
        let n = domain.boundary().len();
        let rel = |p: usize| (p + n - pos[0]) % n;
        if !(0 < rel(pos[1]) && rel(pos[1]) < rel(pos[2]) && rel(pos[2]) < rel(pos[3])) {
            return Err(Error::InvalidMarks("marks not distinct and counterclockwise"));
        }
        Ok(Quad { domain, marks: pos })
    }

    /// [0, w] × [0, h] with (ab) the left side and (cd) the right side.
    pub fn rectangle(w: i32, h: i32) -> Result<Quad> {
        let d = rectangle(0, 0, w, h)?;
        Quad::new(d, [Point::new(0, h), Point::new(0, 0), Point::new(w, 0), Point::new(w, h)])
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn mark(&self, k: usize) -> Point {
        self.domain.vertex(self.domain.boundary()[self.marks[k]])
    }

    pub fn marks(&self) -> [Point; 4] {
        [self.mark(0), self.mark(1), self.mark(2), self.mark(3)]
    }

    /// Vertex indices of the closed arc from mark `k` to mark `k+1`
    /// (0 = (ab), 1 = (bc), 2 = (cd), 3 = (da)).
    pub fn arc(&self, k: usize) -> Vec<u32> {
        self.domain
            .arc_positions(self.marks[k], self.marks[(k + 1) % 4])
            .into_iter()
            .map(|p| self.domain.boundary()[p])
            .collect()
    }

    /// The same domain with marks shifted by one: (bc) and (da) become the
    /// arcs to be connected.
    pub fn rotated(&self) -> Quad {
        Quad { domain: self.domain.clone(), marks: [self.marks[1], self.marks[2], self.marks[3], self.marks[0]] }
    }
}

/// Restriction of an annulus to a half- or quarter-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mask {
    Full,
    /// y ≥ 0 relative to the centre.
    Half,
    /// x, y ≥ 0 relative to the centre.
    Quarter,
}

impl Mask {
    pub fn allows(self, rel: Point) -> bool {
        match self {
            Mask::Full => true,
            Mask::Half => rel.y >= 0,
            Mask::Quarter => rel.x >= 0 && rel.y >= 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mask::Full => "full",
            Mask::Half => "half",
            Mask::Quarter => "quarter",
        }
    }
}

/// Λ_R(x) \ Λ_r(x) restricted by a mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Annulus {
    pub center: Point,
    pub inner: u32,
    pub outer: u32,
    pub mask: Mask,
}

impl Annulus {
    pub fn new(center: Point, inner: u32, outer: u32, mask: Mask) -> Result<Annulus> {
        if outer <= inner {
            return Err(Error::InvalidParams("outer radius must exceed inner radius"));
        }
        Ok(Annulus { center, inner, outer, mask })
    }

    /// Whether the point (relative to nothing, absolute) lies in the closed
    /// masked annulus r ≤ |v - x|∞ ≤ R.
    pub fn contains(&self, p: Point) -> bool {
        let rel = Point::new(p.x - self.center.x, p.y - self.center.y);
        let n = rel.norm() as u32;
        self.mask.allows(rel) && n >= self.inner && n <= self.outer
    }
}
