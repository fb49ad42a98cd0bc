//! Experiment drivers. Each driver turns an ExperimentConfig into a list of
//! EstimateRecords. Sampling work is split into (point, chain) jobs that run
//! on an Executor; results are gathered by job index so the output does not
//! depend on the number of worker threads.

use std::time::Instant;

use rcmlab_core::sampler::{Chain, ChainSpec};
use rcmlab_core::stats::{estimate, Estimate};
use rcmlab_core::{BoundaryPartition, Configuration, Domain, Executor};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::record::EstimateRecord;

pub mod arms;
pub mod chains;
pub mod crossing;
pub mod parafermion;
pub mod touching;

pub use arms::exp_arm_exponents;
pub use chains::exp_chains;
pub use crossing::exp_crossing_vs_modulus;
pub use parafermion::exp_parafermion_verify;
pub use touching::exp_touching_boundary;

/// Observables evaluated on every sample; one value per observable.
pub type Observer<'d> = Box<dyn FnMut(&Configuration) -> rcmlab_core::Result<Vec<f64>> + 'd>;
pub type ObserverFactory = Box<dyn for<'d> Fn(&'d Domain) -> rcmlab_core::Result<Observer<'d>> + Send + Sync>;

pub struct SamplingPoint {
    pub domain: Domain,
    pub bc: BoundaryPartition,
    pub spec: ChainSpec,
    pub observe: ObserverFactory,
}

pub struct PointResult {
    pub estimates: Vec<Estimate>,
    pub wall_ms: u64,
}

/// Runs `chains` independent chains per point, `samples` samples split evenly
/// between them. Job j = point · chains + chain uses stream j of the point's
/// seed.
pub fn sample_points<E: Executor>(
    exec: &E,
    points: &[SamplingPoint],
    chains: usize,
    samples: usize,
) -> CliResult<Vec<PointResult>> {
    let per_chain = samples.div_ceil(chains);
    let jobs = exec.map(points.len() * chains, |j| -> CliResult<(Vec<Vec<f64>>, u64)> {
        let start = Instant::now();
        let pt = &points[j / chains];
        let mut chain = Chain::new(&pt.domain, &pt.bc, pt.spec)?.with_stream(j as u64);
        let mut observe = (pt.observe)(&pt.domain)?;
        let mut series: Vec<Vec<f64>> = Vec::new();
        for _ in 0..per_chain {
            let (_, cfg) = chain.next_sample();
            let values = observe(cfg)?;
            if series.is_empty() {
                series = vec![Vec::with_capacity(per_chain); values.len()];
            }
            for (s, v) in series.iter_mut().zip(values) {
                s.push(v);
            }
        }
        Ok((series, start.elapsed().as_millis() as u64))
    });
    let mut jobs = jobs.into_iter();
    let mut out = Vec::with_capacity(points.len());
    for _ in points {
        let mut per_obs: Vec<Vec<Estimate>> = Vec::new();
        let mut wall_ms = 0;
        for _ in 0..chains {
            let (series, ms) = jobs.next().expect("one result per job")?;
            wall_ms += ms;
            per_obs.resize(series.len(), Vec::new());
            for (k, s) in series.iter().enumerate() {
                per_obs[k].push(estimate(s)?);
            }
        }
        out.push(PointResult { estimates: per_obs.iter().map(|e| combine(e)).collect(), wall_ms });
    }
    Ok(out)
}

/// Pools per-chain estimates: the sample-weighted mean, with the chains'
/// autocorrelation-corrected variances added in quadrature.
pub fn combine(parts: &[Estimate]) -> Estimate {
    let n: usize = parts.iter().map(|e| e.n_samples).sum();
    let nf = n as f64;
    let mean = parts.iter().map(|e| e.mean * e.n_samples as f64).sum::<f64>() / nf;
    let var = parts.iter().map(|e| (e.std_err * e.n_samples as f64).powi(2)).sum::<f64>() / (nf * nf);
    let tau = parts.iter().map(|e| e.tau * e.n_samples as f64).sum::<f64>() / nf;
    Estimate { mean, std_err: var.sqrt(), n_samples: n, tau }
}

impl EstimateRecord {
    pub fn with_estimate(mut self, e: &Estimate) -> Self {
        self.estimate = e.mean;
        self.std_err = e.std_err;
        self.n_samples = e.n_samples;
        self
    }

    pub fn timed(mut self, cfg: &ExperimentConfig, wall_ms: u64) -> Self {
        self.seed = cfg.seed;
        self.wall_ms = if cfg.record_wall_time { wall_ms } else { 0 };
        self
    }
}

pub fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Dispatches on `cfg.experiment`.
pub fn run<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> CliResult<Vec<EstimateRecord>> {
    cfg.validate()?;
    match cfg.experiment.as_str() {
        "crossing" => exp_crossing_vs_modulus(cfg, exec),
        "arms" => exp_arm_exponents(cfg, exec),
        "touch" => exp_touching_boundary(cfg, exec),
        "chains" => exp_chains(cfg, exec),
        "parafermion" => exp_parafermion_verify(cfg, exec),
        other => Err(CliError::Invalid(format!("unknown experiment {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcmlab_core::domain::box_domain;
    use rcmlab_core::sampler::Algorithm;
    use rcmlab_core::{Point, Sequential, Weights};

    #[test]
    fn combine_pools_chains() {
        let a = Estimate { mean: 0.2, std_err: 0.1, n_samples: 100, tau: 0.5 };
        let b = Estimate { mean: 0.4, std_err: 0.1, n_samples: 100, tau: 1.5 };
        let c = combine(&[a, b]);
        assert!((c.mean - 0.3).abs() < 1e-15);
        assert!((c.std_err - 0.1 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.n_samples, 200);
        assert!((c.tau - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = box_domain(2, Point::new(0, 0)).unwrap();
        let point = || SamplingPoint {
            bc: BoundaryPartition::free(&d),
            domain: d.clone(),
            spec: ChainSpec::new(Weights::critical(2.0).unwrap(), Algorithm::ChayesMachta, 9),
            observe: Box::new(|_| Ok(Box::new(|c: &Configuration| Ok(vec![c.count_open() as f64])))),
        };
        let a = sample_points(&Sequential, &[point(), point()], 3, 300).unwrap();
        let b = sample_points(&crate::exec::Parallel::new(2), &[point(), point()], 3, 300).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.estimates, y.estimates);
            assert_eq!(x.estimates[0].n_samples, 300);
        }
        // Different streams per point.
        assert_ne!(a[0].estimates[0].mean, a[1].estimates[0].mean);
    }
}
