//! The random-cluster weight (p/(1-p))^{|ω|} q^{k(ω^ξ)} and its ingredients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// √q / (1 + √q).
pub fn critical_p(q: f64) -> f64 {
    let s = libm::sqrt(q);
    s / (1.0 + s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights {
    p: f64,
    q: f64,
    edge_factor: f64,
}

impl Weights {
    pub fn new(p: f64, q: f64) -> Result<Weights> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams("p must lie in (0, 1)"));
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidParams("q must be positive"));
        }
        Ok(Weights { p, q, edge_factor: p / (1.0 - p) })
    }

    pub fn critical(q: f64) -> Result<Weights> {
        Weights::new(critical_p(q), q)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// p / (1 - p).
    pub fn edge_factor(&self) -> f64 {
        self.edge_factor
    }

    /// Probability of opening an edge whose endpoints are otherwise
    /// disconnected: p / (p + (1 - p) q).
    pub fn bridge_probability(&self) -> f64 {
        self.p / (self.p + (1.0 - self.p) * self.q)
    }
}

/// Partition ξ of ∂D. Each vertex maps to the representative of its block;
/// vertices off the boundary and singleton blocks map to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPartition {
    rep: Vec<u32>,
    wired_blocks: Vec<Vec<u32>>,
    dobrushin: Option<(u32, u32)>,
}

impl BoundaryPartition {
    pub fn free(domain: &Domain) -> Self {
        BoundaryPartition { rep: (0..domain.num_vertices() as u32).collect(), wired_blocks: Vec::new(), dobrushin: None }
    }

    pub fn wired(domain: &Domain) -> Self {
        Self::from_blocks_unchecked(domain, vec![domain.boundary().to_vec()], None)
    }

    /// Free on the arc (ab), wired on the arc (ba) (counterclockwise from b
    /// to a, endpoints included).
    pub fn dobrushin(domain: &Domain, a: Point, b: Point) -> Result<Self> {
        let (va, vb) = boundary_marks(domain, a, b)?;
        let arc = wired_arc(domain, va, vb);
        Ok(Self::from_blocks_unchecked(domain, vec![arc], Some((va, vb))))
    }

    /// Arbitrary partition given as blocks of boundary points; boundary
    /// vertices not listed are singletons.
    pub fn custom(domain: &Domain, blocks: &[Vec<Point>]) -> Result<Self> {
        let mut seen = vec![false; domain.num_vertices()];
        let mut idx_blocks = Vec::new();
        for block in blocks {
            let mut ids = Vec::new();
            for p in block {
                let v = domain.vertex_index(*p).ok_or(Error::InvalidParams("block vertex outside domain"))?;
                if !domain.is_boundary(v) {
                    return Err(Error::InvalidParams("block vertex not on the boundary"));
                }
                if core::mem::replace(&mut seen[v as usize], true) {
                    return Err(Error::InvalidParams("blocks overlap"));
                }
                ids.push(v);
            }
            if !ids.is_empty() {
                idx_blocks.push(ids);
            }
        }
        Ok(Self::from_blocks_unchecked(domain, idx_blocks, None))
    }

    fn from_blocks_unchecked(domain: &Domain, blocks: Vec<Vec<u32>>, dobrushin: Option<(u32, u32)>) -> Self {
        let mut rep: Vec<u32> = (0..domain.num_vertices() as u32).collect();
        let wired_blocks: Vec<Vec<u32>> = blocks.into_iter().filter(|b| b.len() > 1).collect();
        for b in &wired_blocks {
            let r = *b.iter().min().unwrap();
            for &v in b {
                rep[v as usize] = r;
            }
        }
        BoundaryPartition { rep, wired_blocks, dobrushin }
    }

    pub fn num_vertices(&self) -> usize {
        self.rep.len()
    }

    /// Block representative of vertex `v`.
    pub fn rep(&self, v: u32) -> u32 {
        self.rep[v as usize]
    }

    /// Blocks with at least two vertices.
    pub fn wired_blocks(&self) -> &[Vec<u32>] {
        &self.wired_blocks
    }

    /// Dobrushin marks (a, b) as vertex indices, if built that way.
    pub fn dobrushin_marks(&self) -> Option<(u32, u32)> {
        self.dobrushin
    }

    /// Union-find over V seeded with the wired blocks already merged.
    pub fn seed(&self, uf: &mut UnionFind) {
        uf.reset(self.rep.len());
        for b in &self.wired_blocks {
            for &v in &b[1..] {
                uf.union(b[0], v);
            }
        }
    }
}

fn boundary_marks(domain: &Domain, a: Point, b: Point) -> Result<(u32, u32)> {
    let va = domain.vertex_index(a).ok_or(Error::InvalidMarks("a outside the domain"))?;
    let vb = domain.vertex_index(b).ok_or(Error::InvalidMarks("b outside the domain"))?;
    if !domain.is_boundary(va) || !domain.is_boundary(vb) {
        return Err(Error::InvalidMarks("marks must lie on the boundary loop"));
    }
    Ok((va, vb))
}

/// Vertices of the closed arc (ba), counterclockwise from b to a.
pub fn wired_arc(domain: &Domain, a: u32, b: u32) -> Vec<u32> {
    let pa = domain.boundary_position(a).unwrap();
    let pb = domain.boundary_position(b).unwrap();
    domain.arc_positions(pb, pa).into_iter().map(|p| domain.boundary()[p]).collect()
}

/// Loop edges of the arc (ba).
pub fn wired_arc_edges(domain: &Domain, a: u32, b: u32) -> Vec<u32> {
    let arc = wired_arc(domain, a, b);
    arc.windows(2)
        .map(|w| domain.edge_between(domain.vertex(w[0]), domain.vertex(w[1])).expect("loop edge"))
        .collect()
}

/// One bit per edge in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    words: Vec<u64>,
    len: usize,
}

impl Configuration {
    pub fn empty(len: usize) -> Self {
        Configuration { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut c = Self::empty(len);
        for e in 0..len {
            c.set(e, true);
        }
        c
    }

    /// Low `len` bits of `word`, bit e = edge e.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut c = Self::empty(len);
        if len > 0 {
            c.words[0] = if len == 64 { word } else { word & ((1u64 << len) - 1) };
        }
        c
    }

    pub fn from_fn(len: usize, mut open: impl FnMut(usize) -> bool) -> Self {
        let mut c = Self::empty(len);
        for e in 0..len {
            if open(e) {
                c.set(e, true);
            }
        }
        c
    }

    /// Parses a `0`/`1` string in canonical edge order.
    pub fn parse(bits: &str) -> Result<Self> {
        let bits = bits.trim();
        let mut c = Self::empty(bits.len());
        for (e, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set(e, true),
                _ => return Err(Error::InvalidParams("configuration strings use only 0 and 1")),
            }
        }
        Ok(c)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|e| if self.get(e) { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, e: usize) -> bool {
        (self.words[e >> 6] >> (e & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, e: usize, open: bool) {
        let m = 1u64 << (e & 63);
        if open {
            self.words[e >> 6] |= m;
        } else {
            self.words[e >> 6] &= !m;
        }
    }

    pub fn flip(&mut self, e: usize) {
        self.words[e >> 6] ^= 1u64 << (e & 63);
    }

    /// |ω|.
    pub fn count_open(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Clears bits past `len` after bulk word writes.
    pub fn mask_tail(&mut self) {
        let r = self.len & 63;
        if r != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << r) - 1;
        }
    }

    /// Whether every open edge of `self` is open in `other`.
    pub fn le(&self, other: &Configuration) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn check_len(&self, domain: &Domain) -> Result<()> {
        if self.len != domain.num_edges() {
            return Err(Error::SizeMismatch { expected: domain.num_edges(), found: self.len });
        }
        Ok(())
    }
}

/// k(ω^ξ): components of ω with each block of ξ contracted.
pub fn cluster_count(domain: &Domain, config: &Configuration, bc: &BoundaryPartition) -> Result<usize> {
    config.check_len(domain)?;
    let mut uf = UnionFind::new(0);
    Ok(cluster_count_with(domain, config, bc, &mut uf))
}

/// [`cluster_count`] reusing a caller-owned union-find buffer.
pub fn cluster_count_with(domain: &Domain, config: &Configuration, bc: &BoundaryPartition, uf: &mut UnionFind) -> usize {
    bc.seed(uf);
    for (e, [u, v]) in domain.edges().iter().enumerate() {
        if config.get(e) {
            uf.union(*u, *v);
        }
    }
    uf.components()
}

/// Natural logarithm of the unnormalised weight.
pub fn log_weight(domain: &Domain, config: &Configuration, bc: &BoundaryPartition, w: &Weights) -> Result<f64> {
    let k = cluster_count(domain, config, bc)?;
    Ok(config.count_open() as f64 * libm::log(w.edge_factor()) + k as f64 * libm::log(w.q()))
}

/// (p/(1-p))^{|ω|} · q^{k(ω^ξ)}.
pub fn weight(domain: &Domain, config: &Configuration, bc: &BoundaryPartition, w: &Weights) -> Result<f64> {
    let k = cluster_count(domain, config, bc)?;
    Ok(libm::pow(w.edge_factor(), config.count_open() as f64) * libm::pow(w.q(), k as f64))
}
