//! Medial lattice in doubled coordinates.
//!
//! A primal vertex (x, y) sits at (2x, 2y), a face centre at (2x+1, 2y+1) and
//! an edge midpoint at a point with odd coordinate sum. A medial edge joins two
//! midpoints diagonally and separates exactly one primal vertex from one face
//! centre; it is oriented so that the primal vertex lies on its left, i.e.
//! counterclockwise around primal vertices.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::measure::{wired_arc, wired_arc_edges, Configuration};

pub type Dir = (i32, i32);

pub const DIRS: [Dir; 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];

fn dir_index(d: Dir) -> usize {
    match d {
        (1, 1) => 0,
        (-1, 1) => 1,
        (-1, -1) => 2,
        _ => 3,
    }
}

pub fn rotate_left(d: Dir) -> Dir {
    (-d.1, d.0)
}

pub fn rotate_right(d: Dir) -> Dir {
    (d.1, -d.0)
}

/// Doubled coordinates of the midpoint of the lattice edge p–q.
pub fn midpoint(p: Point, q: Point) -> Point {
    Point::new(p.x + q.x, p.y + q.y)
}

/// Lattice endpoints of the edge whose midpoint is `m` (doubled).
pub fn primal_edge_at(m: Point) -> (Point, Point) {
    if m.x.rem_euclid(2) == 1 {
        (Point::new((m.x - 1) / 2, m.y / 2), Point::new((m.x + 1) / 2, m.y / 2))
    } else {
        (Point::new(m.x / 2, (m.y - 1) / 2), Point::new(m.x / 2, (m.y + 1) / 2))
    }
}

fn is_even_even(p: Point) -> bool {
    p.x.rem_euclid(2) == 0 && p.y.rem_euclid(2) == 0
}

/// An oriented medial edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MedialEdge {
    pub tail: Point,
    pub head: Point,
    /// Doubled coordinates of the primal vertex on the left.
    pub primal: Point,
    /// Doubled coordinates of the face centre on the right.
    pub dual: Point,
}

impl MedialEdge {
    /// The medial edge separating a primal vertex from a diagonally adjacent
    /// face centre (both doubled).
    pub fn between(primal: Point, dual: Point) -> MedialEdge {
        let (sx, sy) = (dual.x - primal.x, dual.y - primal.y);
        let m1 = Point::new(primal.x, dual.y);
        let m2 = Point::new(dual.x, primal.y);
        if sx * sy < 0 {
            MedialEdge { tail: m1, head: m2, primal, dual }
        } else {
            MedialEdge { tail: m2, head: m1, primal, dual }
        }
    }

    /// The medial edge leaving midpoint `tail` in direction `d`.
    pub fn leaving(tail: Point, d: Dir) -> MedialEdge {
        let c1 = Point::new(tail.x, tail.y + d.1);
        let c2 = Point::new(tail.x + d.0, tail.y);
        let (primal, dual) = if is_even_even(c1) { (c1, c2) } else { (c2, c1) };
        MedialEdge { tail, head: Point::new(tail.x + d.0, tail.y + d.1), primal, dual }
    }

    pub fn dir(&self) -> Dir {
        (self.head.x - self.tail.x, self.head.y - self.tail.y)
    }

    /// Lattice coordinates of the primal vertex.
    pub fn primal_vertex(&self) -> Point {
        Point::new(self.primal.x / 2, self.primal.y / 2)
    }

    /// Lower-left corner of the face on the right.
    pub fn dual_face(&self) -> Point {
        Point::new((self.dual.x - 1) / 2, (self.dual.y - 1) / 2)
    }
}

/// Direction taken after arriving at midpoint `m` along `d`: the path turns by
/// a quarter turn so as not to cross the open primal edge at `m`, or its dual
/// when the primal edge is closed.
pub fn next_direction(m: Point, d: Dir, primal_open: bool) -> Dir {
    let horizontal_edge = m.x.rem_euclid(2) == 1;
    let blocking_line_horizontal = horizontal_edge == primal_open;
    let left = rotate_left(d);
    let stays = if blocking_line_horizontal { left.1 == -d.1 } else { left.0 == -d.0 };
    if stays {
        left
    } else {
        rotate_right(d)
    }
}

/// +1 for a left turn, -1 for a right turn.
pub fn turn(d: Dir, next: Dir) -> i32 {
    if next == rotate_left(d) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
struct DoubledGrid {
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
}

impl DoubledGrid {
    fn index(&self, p: Point) -> Option<usize> {
        let (dx, dy) = (p.x - self.x0, p.y - self.y0);
        (dx >= 0 && dy >= 0 && dx < self.w && dy < self.h).then(|| (dy * self.w + dx) as usize)
    }
}

/// Dobrushin data attached to a medial graph.
#[derive(Clone, Debug)]
pub struct Marks {
    pub a: u32,
    pub b: u32,
    pub e_a: u32,
    pub e_b: u32,
    /// Domain edges on the wired arc (ba), completed open.
    pub wired_edges: Vec<u32>,
    pub is_wired_edge: Vec<bool>,
    /// Domain edges of Ω \ (ba), the random ones.
    pub free_edges: Vec<u32>,
    /// Fixed medial edges hugging (ba) from outside, from e_b's successor to
    /// e_a's predecessor.
    pub outer_chain: Vec<MedialEdge>,
}

/// Medial graph of a domain, optionally with Dobrushin marks.
#[derive(Clone, Debug)]
pub struct MedialGraph {
    edges: Vec<MedialEdge>,
    vertices: Vec<Point>,
    vertex_edge: Vec<Option<u32>>,
    incident: Vec<Vec<u32>>,
    grid: DoubledGrid,
    edge_at: Vec<u32>,
    vertex_at: Vec<u32>,
    marks: Option<Marks>,
    steps: Vec<Step>,
}

/// State of the primal edge at the head of a medial edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeadState {
    Closed,
    Open,
    Random(u32),
}

/// Precomputed continuation of a medial edge: the head state and, for a
/// closed and an open primal edge, the next edge (`u32::MAX` when it leaves
/// the graph) with the turn taken.
#[derive(Clone, Copy, Debug)]
pub struct Step {
    pub head: HeadState,
    pub next: [(u32, i8); 2],
}

impl MedialGraph {
    /// Without marks: induced on the midpoints of E. With marks (a, b): the
    /// edges bordering a primal vertex of V \ (ba) or an interior face, plus
    /// the entry and exit edges e_a and e_b.
    pub fn new(domain: &Domain, marks: Option<(Point, Point)>) -> Result<MedialGraph> {
        let mut cand: Vec<MedialEdge> = Vec::new();
        for &p in domain.vertices() {
            for (dx, dy) in DIRS {
                cand.push(MedialEdge::between(Point::new(2 * p.x, 2 * p.y), Point::new(2 * p.x + dx, 2 * p.y + dy)));
            }
        }
        cand.sort_unstable();
        cand.dedup();
        let face_inside = |e: &MedialEdge| domain.face_index(e.dual_face()).is_some();
        let mid_in_e = |m: Point| {
            let (p, q) = primal_edge_at(m);
            domain.edge_between(p, q)
        };

        let (edges, mark_data) = match marks {
            None => {
                let edges: Vec<MedialEdge> =
                    cand.into_iter().filter(|e| mid_in_e(e.tail).is_some() && mid_in_e(e.head).is_some()).collect();
                (edges, None)
            }
            Some((pa, pb)) => {
                let a = domain.vertex_index(pa).ok_or(Error::InvalidMarks("a outside the domain"))?;
                let b = domain.vertex_index(pb).ok_or(Error::InvalidMarks("b outside the domain"))?;
                if !domain.is_boundary(a) || !domain.is_boundary(b) {
                    return Err(Error::InvalidMarks("marks must lie on the boundary loop"));
                }
                let mut wired_vertex = vec![false; domain.num_vertices()];
                for v in wired_arc(domain, a, b) {
                    wired_vertex[v as usize] = true;
                }
                let wired_edges = wired_arc_edges(domain, a, b);
                let mut is_wired_edge = vec![false; domain.num_edges()];
                for &e in &wired_edges {
                    is_wired_edge[e as usize] = true;
                }
                let free_edges: Vec<u32> =
                    (0..domain.num_edges() as u32).filter(|&e| !is_wired_edge[e as usize]).collect();
                let is_free_mid = |m: Point| mid_in_e(m).is_some_and(|e| !is_wired_edge[e as usize]);
                let wired_at = |e: &MedialEdge| {
                    domain.vertex_index(e.primal_vertex()).is_some_and(|v| wired_vertex[v as usize])
                };
                let mut kept = Vec::new();
                let mut hug = Vec::new();
                for e in cand {
                    if face_inside(&e) || !wired_at(&e) {
                        kept.push(e);
                    } else {
                        hug.push(e);
                    }
                }
                // The hugging edges form one chain from e_b to e_a, linked through
                // midpoints whose state is fixed.
                hug.sort_unstable();
                let find_hug = |e: &MedialEdge| hug.binary_search(e).ok();
                let starts: Vec<usize> = (0..hug.len()).filter(|&i| is_free_mid(hug[i].tail)).collect();
                if starts.len() != 1 {
                    return Err(Error::InvalidMarks("wired arc does not yield a single exploration path"));
                }
                let mut chain = vec![hug[starts[0]]];
                loop {
                    let cur = *chain.last().unwrap();
                    if is_free_mid(cur.head) {
                        break;
                    }
                    let open = mid_in_e(cur.head).is_some_and(|e| is_wired_edge[e as usize]);
                    let nd = next_direction(cur.head, cur.dir(), open);
                    let nxt = MedialEdge::leaving(cur.head, nd);
                    if find_hug(&nxt).is_none() || chain.len() > hug.len() {
                        return Err(Error::InvalidMarks("wired arc does not yield a single exploration path"));
                    }
                    chain.push(nxt);
                }
                if chain.len() != hug.len() || chain.len() < 2 {
                    return Err(Error::InvalidMarks("degenerate exploration path for these marks"));
                }
                let e_b = chain[0];
                let e_a = *chain.last().unwrap();
                kept.push(e_a);
                kept.push(e_b);
                kept.sort_unstable();
                let outer_chain = chain[1..chain.len() - 1].to_vec();
                (
                    kept,
                    Some((a, b, e_a, e_b, wired_edges, is_wired_edge, free_edges, outer_chain)),
                )
            }
        };

        let mut vertices: Vec<Point> = edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let xs = vertices.iter().map(|p| p.x);
        let ys = vertices.iter().map(|p| p.y);
        let (x0, x1) = (xs.clone().min().unwrap_or(0) - 2, xs.max().unwrap_or(0) + 2);
        let (y0, y1) = (ys.clone().min().unwrap_or(0) - 2, ys.max().unwrap_or(0) + 2);
        let grid = DoubledGrid { x0, y0, w: x1 - x0 + 1, h: y1 - y0 + 1 };
        let cells = (grid.w * grid.h) as usize;
        let mut vertex_at = vec![u32::MAX; cells];
        for (i, v) in vertices.iter().enumerate() {
            vertex_at[grid.index(*v).unwrap()] = i as u32;
        }
        let mut edge_at = vec![u32::MAX; 4 * cells];
        let mut incident = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            edge_at[4 * grid.index(e.tail).unwrap() + dir_index(e.dir())] = i as u32;
            incident[vertex_at[grid.index(e.tail).unwrap()] as usize].push(i as u32);
            incident[vertex_at[grid.index(e.head).unwrap()] as usize].push(i as u32);
        }
        let vertex_edge = vertices.iter().map(|&m| mid_in_e(m)).collect();
        let mut mg =
            MedialGraph { edges, vertices, vertex_edge, incident, grid, edge_at, vertex_at, marks: None, steps: Vec::new() };
        if let Some((a, b, e_a, e_b, wired_edges, is_wired_edge, free_edges, outer_chain)) = mark_data {
            let e_a = mg.edge_id(&e_a).unwrap();
            let e_b = mg.edge_id(&e_b).unwrap();
            mg.marks = Some(Marks { a, b, e_a, e_b, wired_edges, is_wired_edge, free_edges, outer_chain });
        }
        mg.steps = (0..mg.edges.len())
            .map(|k| {
                let e = mg.edges[k];
                let head = match mid_in_e(e.head) {
                    None => HeadState::Closed,
                    Some(pe) if mg.marks.as_ref().is_some_and(|m| m.is_wired_edge[pe as usize]) => HeadState::Open,
                    Some(pe) => HeadState::Random(pe),
                };
                let d = e.dir();
                let next = [false, true].map(|open| {
                    let nd = next_direction(e.head, d, open);
                    (mg.edge_from(e.head, nd).unwrap_or(u32::MAX), turn(d, nd) as i8)
                });
                Step { head, next }
            })
            .collect();
        Ok(mg)
    }

    pub fn edges(&self) -> &[MedialEdge] {
        &self.edges
    }

    pub fn edge(&self, k: u32) -> MedialEdge {
        self.edges[k as usize]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_id(&self, m: Point) -> Option<u32> {
        let v = self.vertex_at[self.grid.index(m)?];
        (v != u32::MAX).then_some(v)
    }

    /// Domain edge whose midpoint is medial vertex `v`, if it lies in E.
    pub fn primal_edge(&self, v: u32) -> Option<u32> {
        self.vertex_edge[v as usize]
    }

    /// Medial edges incident to vertex `v`.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.incident[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.incident[v as usize].len()
    }

    pub fn edge_id(&self, e: &MedialEdge) -> Option<u32> {
        self.edge_from(e.tail, e.dir())
    }

    pub fn edge_from(&self, tail: Point, d: Dir) -> Option<u32> {
        let k = self.edge_at[4 * self.grid.index(tail)? + dir_index(d)];
        (k != u32::MAX).then_some(k)
    }

    pub fn marks(&self) -> Option<&Marks> {
        self.marks.as_ref()
    }

    pub fn step(&self, k: u32) -> &Step {
        &self.steps[k as usize]
    }

    /// The successor of medial edge `k` under `config` and the turn taken
    /// (+1 left, -1 right), or None if the walk leaves the graph.
    pub fn next_edge(&self, config: &Configuration, k: u32) -> (Option<u32>, i32) {
        let st = &self.steps[k as usize];
        let open = match st.head {
            HeadState::Closed => false,
            HeadState::Open => true,
            HeadState::Random(e) => config.get(e as usize),
        };
        let (n, t) = st.next[open as usize];
        ((n != u32::MAX).then_some(n), t as i32)
    }

    /// State of the primal edge at midpoint `m`: the configuration on E,
    /// open on the wired arc, closed outside the domain.
    pub fn primal_open(&self, domain: &Domain, config: &Configuration, m: Point) -> bool {
        let (p, q) = primal_edge_at(m);
        match domain.edge_between(p, q) {
            None => false,
            Some(e) => match &self.marks {
                Some(mk) if mk.is_wired_edge[e as usize] => true,
                _ => config.get(e as usize),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{box_domain, rectangle};

    #[test]
    fn unit_square_unmarked() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        let mg = MedialGraph::new(&d, None).unwrap();
        assert_eq!(mg.num_vertices(), 4);
        assert_eq!(mg.num_edges(), 4);
        // The square runs clockwise around the face, i.e. counterclockwise
        // around each corner.
        for e in mg.edges() {
            assert_eq!(e.dual, Point::new(1, 1));
        }
    }

    #[test]
    fn orientation_keeps_primal_on_left() {
        for (dx, dy) in DIRS {
            let e = MedialEdge::between(Point::new(0, 0), Point::new(dx, dy));
            let d = e.dir();
            let to_primal = (e.primal.x - e.tail.x, e.primal.y - e.tail.y);
            assert!(d.0 * to_primal.1 - d.1 * to_primal.0 > 0);
            assert_eq!(MedialEdge::leaving(e.tail, d), e);
        }
    }

    #[test]
    fn turning_rule() {
        // Arriving at (1,0) from the north-east: open edge sends the path to
        // the north-west, closed edge to the south-east.
        assert_eq!(next_direction(Point::new(1, 0), (-1, -1), true), (-1, 1));
        assert_eq!(next_direction(Point::new(1, 0), (-1, -1), false), (1, -1));
        // Vertical edge at (0,1), arriving from the south-west.
        assert_eq!(next_direction(Point::new(0, 1), (1, 1), true), (-1, 1));
        assert_eq!(next_direction(Point::new(0, 1), (1, 1), false), (1, -1));
    }

    #[test]
    fn unit_square_marks() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        let mg = MedialGraph::new(&d, Some((Point::new(0, 0), Point::new(0, 0)))).unwrap();
        let mk = mg.marks().unwrap();
        let e_b = mg.edge(mk.e_b);
        let e_a = mg.edge(mk.e_a);
        assert_eq!((e_b.tail, e_b.head), (Point::new(0, 1), Point::new(-1, 0)));
        assert_eq!((e_a.tail, e_a.head), (Point::new(0, -1), Point::new(1, 0)));
        assert_eq!(mk.outer_chain.len(), 1);
    }

    #[test]
    fn interior_degree_four() {
        let d = box_domain(1, Point::new(0, 0)).unwrap();
        let mg = MedialGraph::new(&d, Some((Point::new(1, -1), Point::new(-1, 1)))).unwrap();
        for v in 0..mg.num_vertices() as u32 {
            if let Some(e) = mg.primal_edge(v) {
                let (p, q) = d.edge_points(e);
                let inner = !(d.is_boundary(d.vertex_index(p).unwrap()) && d.is_boundary(d.vertex_index(q).unwrap()))
                    || d.edge_faces(e).iter().all(|f| f.is_some());
                if inner {
                    assert_eq!(mg.degree(v), 4);
                }
            }
        }
        let plain = MedialGraph::new(&d, None).unwrap();
        for v in 0..plain.num_vertices() as u32 {
            let e = plain.primal_edge(v).unwrap();
            if d.edge_faces(e).iter().all(|f| f.is_some()) {
                assert_eq!(plain.degree(v), 4);
            }
        }
    }
}
