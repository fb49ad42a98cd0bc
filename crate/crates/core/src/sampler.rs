//! Heat-bath and Chayes–Machta chains for φ^ξ_{D,p,q}.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`; chain `i` of a run with master seed `s` uses
//! `s ^ splitmix64(i)`.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::measure::{BoundaryPartition, Configuration, Weights};
use crate::unionfind::UnionFind;

pub type ChainRng = ChaCha8Rng;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for stream `index` under master seed `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed ^ splitmix64(index))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    HeatBath,
    ChayesMachta,
}

/// Scratch space for connectivity queries under contracted boundary blocks.
#[derive(Clone, Debug)]
pub struct HeatBath {
    block_of: Vec<u32>,
    blocks: Vec<Vec<u32>>,
    mark: Vec<u32>,
    stamp: u32,
    queue: Vec<u32>,
}

impl HeatBath {
    pub fn new(domain: &Domain, bc: &BoundaryPartition) -> Self {
        let mut block_of = vec![u32::MAX; domain.num_vertices()];
        for (i, b) in bc.wired_blocks().iter().enumerate() {
            for &v in b {
                block_of[v as usize] = i as u32;
            }
        }
        HeatBath {
            block_of,
            blocks: bc.wired_blocks().to_vec(),
            mark: vec![0; domain.num_vertices()],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    /// Whether `u` and `v` are joined in (ω \ skip)^ξ.
    pub fn connected_without(&mut self, domain: &Domain, config: &Configuration, u: u32, v: u32, skip: u32) -> bool {
        let bu = self.block_of[u as usize];
        if bu != u32::MAX && bu == self.block_of[v as usize] {
            return true;
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        let s = self.stamp;
        self.queue.clear();
        self.visit(u, s);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            if x == v {
                return true;
            }
            for &(y, e) in domain.neighbors(x) {
                if e != skip && config.get(e as usize) && self.mark[y as usize] != s {
                    self.visit(y, s);
                }
            }
        }
        false
    }

    fn visit(&mut self, x: u32, s: u32) {
        self.mark[x as usize] = s;
        self.queue.push(x);
        let b = self.block_of[x as usize];
        if b != u32::MAX {
            for &y in &self.blocks[b as usize] {
                if self.mark[y as usize] != s {
                    self.mark[y as usize] = s;
                    self.queue.push(y);
                }
            }
        }
    }

    /// Resamples edge `e` from its conditional law given the other edges.
    pub fn step<R: Rng + ?Sized>(&mut self, domain: &Domain, config: &mut Configuration, w: &Weights, rng: &mut R, e: u32) {
        let [u, v] = domain.edge(e);
        let prob = if self.connected_without(domain, config, u, v, e) { w.p() } else { w.bridge_probability() };
        let draw: f64 = rng.gen();
        config.set(e as usize, draw < prob);
    }

    /// One systematic scan over E in canonical order. At q = 1 the
    /// conditional law ignores connectivity, so the scan is an independent
    /// redraw; at p = 1/2 that is one random word per 64 edges.
    pub fn sweep<R: Rng + ?Sized>(&mut self, domain: &Domain, config: &mut Configuration, w: &Weights, rng: &mut R) {
        if w.q() == 1.0 {
            if w.p() == 0.5 {
                config.words_mut().iter_mut().for_each(|word| *word = rng.next_u64());
                config.mask_tail();
            } else {
                for e in 0..domain.num_edges() {
                    config.set(e, rng.gen_bool(w.p()));
                }
            }
            return;
        }
        for e in 0..domain.num_edges() as u32 {
            self.step(domain, config, w, rng, e);
        }
    }
}

/// Single-edge heat-bath update.
pub fn heat_bath_step<R: Rng + ?Sized>(
    domain: &Domain,
    config: &mut Configuration,
    bc: &BoundaryPartition,
    w: &Weights,
    rng: &mut R,
    e: u32,
) {
    HeatBath::new(domain, bc).step(domain, config, w, rng, e);
}

/// Scratch space for the Chayes–Machta update.
#[derive(Clone, Debug, Default)]
pub struct ChayesMachta {
    uf: UnionFind,
    active: Vec<u8>,
}

impl ChayesMachta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Labels clusters of ω^ξ, activates each with probability 1/q (draws in
    /// order of first appearance by vertex index), then resamples every edge
    /// whose endpoints are both active.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        domain: &Domain,
        config: &mut Configuration,
        bc: &BoundaryPartition,
        w: &Weights,
        rng: &mut R,
    ) -> Result<()> {
        if w.q() < 1.0 {
            return Err(Error::UnsupportedQ(w.q()));
        }
        bc.seed(&mut self.uf);
        for (e, [u, v]) in domain.edges().iter().enumerate() {
            if config.get(e) {
                self.uf.union(*u, *v);
            }
        }
        let n = domain.num_vertices();
        // 0 = undecided, 1 = inactive, 2 = active (indexed by root)
        self.active.clear();
        self.active.resize(n, 0);
        let pa = 1.0 / w.q();
        for v in 0..n as u32 {
            let r = self.uf.find(v) as usize;
            if self.active[r] == 0 {
                let draw: f64 = rng.gen();
                self.active[r] = if draw < pa { 2 } else { 1 };
            }
        }
        let p = w.p();
        for (e, [u, v]) in domain.edges().iter().enumerate() {
            let ru = self.uf.find(*u) as usize;
            let rv = self.uf.find(*v) as usize;
            if self.active[ru] == 2 && self.active[rv] == 2 {
                let draw: f64 = rng.gen();
                config.set(e, draw < p);
            }
        }
        Ok(())
    }
}

pub fn chayes_machta_step<R: Rng + ?Sized>(
    domain: &Domain,
    config: &mut Configuration,
    bc: &BoundaryPartition,
    w: &Weights,
    rng: &mut R,
) -> Result<()> {
    ChayesMachta::new().step(domain, config, bc, w, rng)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub weights: Weights,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Sweeps discarded before the first sample; `None` uses 100.
    pub burn_in: Option<u64>,
    /// Sweeps between recorded samples; 0 is treated as 1.
    pub thin: u64,
}

impl ChainSpec {
    pub fn new(weights: Weights, algorithm: Algorithm, seed: u64) -> Self {
        ChainSpec { weights, algorithm, seed, burn_in: None, thin: 1 }
    }

    pub fn burn_in_sweeps(&self) -> u64 {
        self.burn_in.unwrap_or(100)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm == Algorithm::ChayesMachta && self.weights.q() < 1.0 {
            return Err(Error::UnsupportedQ(self.weights.q()));
        }
        Ok(())
    }
}

/// A running chain. One sweep is |E| heat-bath updates or one Chayes–Machta
/// step. The chain starts from the empty configuration.
pub struct Chain<'a> {
    domain: &'a Domain,
    bc: &'a BoundaryPartition,
    spec: ChainSpec,
    rng: ChainRng,
    config: Configuration,
    sweep: u64,
    heat_bath: Option<HeatBath>,
    cm: ChayesMachta,
    burned: bool,
}

impl<'a> Chain<'a> {
    pub fn new(domain: &'a Domain, bc: &'a BoundaryPartition, spec: ChainSpec) -> Result<Self> {
        spec.validate()?;
        if bc.num_vertices() != domain.num_vertices() {
            return Err(Error::SizeMismatch { expected: domain.num_vertices(), found: bc.num_vertices() });
        }
        let heat_bath = (spec.algorithm == Algorithm::HeatBath).then(|| HeatBath::new(domain, bc));
        Ok(Chain {
            domain,
            bc,
            spec,
            rng: stream_rng(spec.seed, 0),
            config: Configuration::empty(domain.num_edges()),
            sweep: 0,
            heat_bath,
            cm: ChayesMachta::new(),
            burned: false,
        })
    }

    /// Replaces the generator with stream `index` of the master seed.
    pub fn with_stream(mut self, index: u64) -> Self {
        self.rng = stream_rng(self.spec.seed, index);
        self
    }

    pub fn sweep(&mut self) {
        match &mut self.heat_bath {
            Some(hb) => hb.sweep(self.domain, &mut self.config, &self.spec.weights, &mut self.rng),
            None => self
                .cm
                .step(self.domain, &mut self.config, self.bc, &self.spec.weights, &mut self.rng)
                .expect("validated"),
        }
        self.sweep += 1;
    }

    /// Runs the burn-in once, then advances by the thinning stride and returns
    /// the sweep index together with the current state.
    pub fn next_sample(&mut self) -> (u64, &Configuration) {
        if !self.burned {
            for _ in 0..self.spec.burn_in_sweeps() {
                self.sweep();
            }
            self.burned = true;
        }
        for _ in 0..self.spec.thin.max(1) {
            self.sweep();
        }
        (self.sweep, &self.config)
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn sweeps_done(&self) -> u64 {
        self.sweep
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleStream {
    pub spec: ChainSpec,
    pub samples: Vec<(u64, Configuration)>,
}

pub fn run_chain(domain: &Domain, bc: &BoundaryPartition, spec: ChainSpec, n_samples: usize) -> Result<SampleStream> {
    let mut chain = Chain::new(domain, bc, spec)?;
    if n_samples == 0 {
        for _ in 0..spec.burn_in_sweeps() {
            chain.sweep();
        }
    }
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let (t, c) = chain.next_sample();
        samples.push((t, c.clone()));
    }
    Ok(SampleStream { spec, samples })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutocorrTime {
    /// τ_int = 1/2 + Σ_{t≥1} ρ(t); 1/2 for independent samples.
    pub tau: f64,
    /// Sokal's estimate sqrt(2(2M+1)/n) τ with M the summation window.
    pub std_err: f64,
    pub window: usize,
}

/// Integrated autocorrelation time with Geyer's initial-positive-sequence
/// truncation.
pub fn autocorrelation(series: &[f64]) -> Result<AutocorrTime> {
    let n = series.len();
    if n < 100 {
        return Err(Error::InsufficientData { needed: 100, found: n });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let c = |t: usize| -> f64 { (0..n - t).map(|i| (series[i] - mean) * (series[i + t] - mean)).sum::<f64>() / n as f64 };
    let c0 = c(0);
    if c0 <= 1e-300 {
        return Err(Error::ZeroVariance);
    }
    let mut tau = -0.5;
    let mut k = 0;
    while 2 * k + 1 < n {
        let gamma = (c(2 * k) + c(2 * k + 1)) / c0;
        if gamma <= 0.0 {
            break;
        }
        tau += gamma;
        k += 1;
    }
    let window = 2 * k + 1;
    let tau = tau.max(0.5);
    let std_err = libm::sqrt(2.0 * (2 * window + 1) as f64 / n as f64) * tau;
    Ok(AutocorrTime { tau, std_err, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::rectangle;
    use crate::enumerate::enumerate;

    /// Exact transition matrix of one edge update, built from the conditional
    /// probabilities, compared against the enumeration oracle.
    #[test]
    fn single_edge_kernel_preserves_measure() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        for q in [1.0, 2.0, 3.5] {
            let bc = BoundaryPartition::free(&d);
            let w = Weights::critical(q).unwrap();
            let pi = enumerate(&d, &bc, w).unwrap().distribution();
            let mut hb = HeatBath::new(&d, &bc);
            for e in 0..4u32 {
                let mut out = [0.0f64; 16];
                for (i, &pi_i) in pi.iter().enumerate() {
                    let c = Configuration::from_word(i as u64, 4);
                    let [u, v] = d.edge(e);
                    let po = if hb.connected_without(&d, &c, u, v, e) { w.p() } else { w.bridge_probability() };
                    let open = i | (1 << e);
                    let closed = i & !(1 << e);
                    out[open] += pi_i * po;
                    out[closed] += pi_i * (1.0 - po);
                }
                for i in 0..16 {
                    assert!((out[i] - pi[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn determinism_and_empty_stream() {
        let d = rectangle(0, 0, 3, 3).unwrap();
        let bc = BoundaryPartition::wired(&d);
        for alg in [Algorithm::HeatBath, Algorithm::ChayesMachta] {
            let mut spec = ChainSpec::new(Weights::critical(2.0).unwrap(), alg, 99);
            spec.burn_in = Some(5);
            let a = run_chain(&d, &bc, spec, 20).unwrap();
            let b = run_chain(&d, &bc, spec, 20).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.samples[0].0, 6);
            assert!(run_chain(&d, &bc, spec, 0).unwrap().samples.is_empty());
        }
    }

    #[test]
    fn cm_rejects_small_q() {
        let d = rectangle(0, 0, 1, 1).unwrap();
        let bc = BoundaryPartition::free(&d);
        let w = Weights::critical(0.5).unwrap();
        let mut c = Configuration::empty(4);
        let mut rng = stream_rng(1, 0);
        assert_eq!(chayes_machta_step(&d, &mut c, &bc, &w, &mut rng), Err(Error::UnsupportedQ(0.5)));
    }

    #[test]
    fn autocorrelation_edge_cases() {
        assert!(matches!(autocorrelation(&[1.0; 10]), Err(Error::InsufficientData { .. })));
        assert_eq!(autocorrelation(&[1.0; 200]), Err(Error::ZeroVariance));
        let mut rng = stream_rng(5, 0);
        let iid: Vec<f64> = (0..20000).map(|_| rng.gen::<f64>()).collect();
        let t = autocorrelation(&iid).unwrap();
        assert!((t.tau - 0.5).abs() < 0.1, "{t:?}");
        // AR(1) with coefficient 0.9 has τ = (1 + 0.9) / (2 (1 - 0.9)) = 9.5.
        let mut x = 0.0;
        let ar: Vec<f64> = (0..200000)
            .map(|_| {
                x = 0.9 * x + (rng.gen::<f64>() - 0.5);
                x
            })
            .collect();
        let t = autocorrelation(&ar).unwrap();
        assert!((t.tau - 9.5).abs() < 4.0 * t.std_err + 0.5, "{t:?}");
    }
}
