//! Brute-force summation over {0,1}^E for tiny domains.
//!
//! Configuration `i` is the bit pattern of the integer `i` in canonical edge
//! order. The index range is cut into fixed-size chunks whose partial results
//! are combined in chunk order, so the answer does not depend on how an
//! [`Executor`] schedules them.

use alloc::vec::Vec;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::measure::{cluster_count_with, BoundaryPartition, Configuration, Weights};
use crate::unionfind::UnionFind;

pub const DEFAULT_CAP: usize = 24;
const CHUNK_BITS: u32 = 14;

/// Runs independent jobs `0..n` and returns their results in job order.
pub trait Executor: Sync {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }
}

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// The exact measure on a domain with at most `cap` edges. Stores the
/// cluster count of every configuration so that probabilities of arbitrary
/// events cost one pass without recomputing clusters.
#[derive(Clone, Debug)]
pub struct ExactMeasure {
    weights: Weights,
    num_edges: usize,
    clusters: Vec<u8>,
    log_z: f64,
    ln_x: f64,
    ln_q: f64,
}

/// Enumerates with the default cap on the calling thread.
pub fn enumerate(domain: &Domain, bc: &BoundaryPartition, w: Weights) -> Result<ExactMeasure> {
    ExactMeasure::build(domain, bc, w, DEFAULT_CAP, &Sequential)
}

impl ExactMeasure {
    pub fn build<E: Executor>(
        domain: &Domain,
        bc: &BoundaryPartition,
        w: Weights,
        cap: usize,
        exec: &E,
    ) -> Result<ExactMeasure> {
        let m = domain.num_edges();
        if m > cap || m > 32 {
            return Err(Error::CapExceeded { edges: m, cap });
        }
        if bc.num_vertices() != domain.num_vertices() {
            return Err(Error::SizeMismatch { expected: domain.num_vertices(), found: bc.num_vertices() });
        }
        let total = 1u64 << m;
        let chunk = 1u64 << CHUNK_BITS.min(m as u32);
        let n_chunks = (total / chunk) as usize;
        let ln_x = libm::log(w.edge_factor());
        let ln_q = libm::log(w.q());
        let parts = exec.map(n_chunks, |c| {
            let mut uf = UnionFind::new(0);
            let mut cfg = Configuration::empty(m);
            let start = c as u64 * chunk;
            let mut ks = Vec::with_capacity(chunk as usize);
            for i in start..start + chunk {
                cfg.words_mut()[0] = i;
                ks.push(cluster_count_with(domain, &cfg, bc, &mut uf) as u8);
            }
            let lw = |i: u64, k: u8| i.count_ones() as f64 * ln_x + k as f64 * ln_q;
            let mx = ks.iter().enumerate().map(|(j, &k)| lw(start + j as u64, k)).fold(f64::NEG_INFINITY, f64::max);
            let mut s = KahanSum::default();
            for (j, &k) in ks.iter().enumerate() {
                s.add(libm::exp(lw(start + j as u64, k) - mx));
            }
            (ks, mx, s.value())
        });
        let gmax = parts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let mut z = KahanSum::default();
        let mut clusters = Vec::with_capacity(total as usize);
        for (ks, mx, s) in parts {
            z.add(s * libm::exp(mx - gmax));
            clusters.extend_from_slice(&ks);
        }
        Ok(ExactMeasure { weights: w, num_edges: m, clusters, log_z: gmax + libm::log(z.value()), ln_x, ln_q })
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_configurations(&self) -> usize {
        self.clusters.len()
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn z(&self) -> f64 {
        libm::exp(self.log_z)
    }

    /// k(ω^ξ) of configuration `index`.
    pub fn cluster_count(&self, index: usize) -> usize {
        self.clusters[index] as usize
    }

    pub fn log_weight(&self, index: usize) -> f64 {
        (index as u64).count_ones() as f64 * self.ln_x + self.clusters[index] as f64 * self.ln_q
    }

    /// Normalised probability of configuration `index`.
    pub fn probability(&self, index: usize) -> f64 {
        libm::exp(self.log_weight(index) - self.log_z)
    }

    /// All 2^|E| probabilities, indexed by configuration word.
    pub fn distribution(&self) -> Vec<f64> {
        (0..self.clusters.len()).map(|i| self.probability(i)).collect()
    }

    /// E[f(ω)] accumulated chunk by chunk.
    pub fn expectation_with<E: Executor, F>(&self, exec: &E, f: F) -> f64
    where
        F: Fn(&Configuration) -> f64 + Sync + Send,
    {
        let total = self.clusters.len();
        let chunk = (1usize << CHUNK_BITS).min(total);
        let parts = exec.map(total / chunk, |c| {
            let mut cfg = Configuration::empty(self.num_edges);
            let mut s = KahanSum::default();
            for i in c * chunk..(c + 1) * chunk {
                if self.num_edges > 0 {
                    cfg.words_mut()[0] = i as u64;
                }
                let v = f(&cfg);
                if v != 0.0 {
                    s.add(v * self.probability(i));
                }
            }
            s.value()
        });
        let mut s = KahanSum::default();
        for p in parts {
            s.add(p);
        }
        s.value()
    }

    pub fn expectation<F>(&self, f: F) -> f64
    where
        F: Fn(&Configuration) -> f64 + Sync + Send,
    {
        self.expectation_with(&Sequential, f)
    }
}

/// Σ_{ω ∈ event} weight(ω) / Z.
pub fn exact_probability<F>(em: &ExactMeasure, event: F) -> f64
where
    F: Fn(&Configuration) -> bool + Sync + Send,
{
    em.expectation(|c| if event(c) { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{rectangle, Point};
    use crate::measure::weight;

    #[test]
    fn bernoulli_unit_square() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        let em = enumerate(&d, &BoundaryPartition::free(&d), Weights::new(0.5, 1.0).unwrap()).unwrap();
        assert!((em.z() - 16.0).abs() < 1e-12);
        for i in 0..16 {
            assert!((em.probability(i) - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!((exact_probability(&em, |_| true) - 1.0).abs() < 1e-12);
        assert!((exact_probability(&em, |c| c.get(0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn q2_unit_square_against_direct_sum() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        let bc = BoundaryPartition::free(&d);
        let w = Weights::critical(2.0).unwrap();
        let em = enumerate(&d, &bc, w).unwrap();
        let mut z = 0.0;
        let mut open0 = 0.0;
        for word in 0..16u64 {
            let c = Configuration::from_word(word, 4);
            let wt = weight(&d, &c, &bc, &w).unwrap();
            z += wt;
            if c.get(0) {
                open0 += wt;
            }
        }
        assert!((em.z() - z).abs() < 1e-12 * z);
        assert!((exact_probability(&em, |c| c.get(0)) - open0 / z).abs() < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let d = rectangle(0, 0, 4, 3).unwrap();
        let err = ExactMeasure::build(&d, &BoundaryPartition::free(&d), Weights::new(0.5, 1.0).unwrap(), 24, &Sequential);
        assert_eq!(err.unwrap_err(), Error::CapExceeded { edges: 31, cap: 24 });
        let _ = Point::new(0, 0);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-17);
        }
        assert!((s.value() - (1.0 + 1e-14)).abs() < 1e-16);
    }
}
