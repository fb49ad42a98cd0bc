//! Hamming distance to the crossing of an ℓN × N rectangle, chain diameters
//! and the frequencies of the chain events G, H and F.

use rcmlab_core::connectivity::{event_f, event_g, event_h, hamming_crossing};
use rcmlab_core::domain::{box_domain, rectangle};
use rcmlab_core::{BoundaryPartition, Configuration, Domain, Executor, Point, Quad};

use super::{indicator, sample_points, SamplingPoint};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::record::EstimateRecord;

/// Edge index in `big` of every edge of `small`.
pub fn edge_map(small: &Domain, big: &Domain) -> CliResult<Vec<u32>> {
    (0..small.num_edges() as u32)
        .map(|e| {
            let (p, q) = small.edge_points(e);
            big.edge_between(p, q).ok_or_else(|| CliError::Invalid("sub-domain is not contained in the sampling box".into()))
        })
        .collect()
}

pub fn restrict(config: &Configuration, map: &[u32]) -> Configuration {
    Configuration::from_fn(map.len(), |e| config.get(map[e] as usize))
}

fn fraction(x: f64, n: u32) -> u32 {
    (x * n as f64).ceil() as u32
}

/// The sampling box Λ_M is centred on the origin and holds both the
/// rectangle [-ℓN/2, ℓN/2] × [-N/2, N/2] (crossed left to right) and Λ_N with
/// a margin of N/2.
pub fn exp_chains<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> CliResult<Vec<EstimateRecord>> {
    let (n, ell) = (cfg.n as i32, cfg.ell as i32);
    if n < 2 || ell < 1 {
        return Err(CliError::Invalid("chains need N >= 2 and ell >= 1".into()));
    }
    let (w, h) = (ell * n, n);
    let m = (w / 2 + 1).max(n) + n / 2;
    let big = box_domain(m, Point::new(0, 0))?;
    let rect = rectangle(-w / 2, -h / 2, w, h)?;
    let (x0, y0) = (-w / 2, -h / 2);
    let p = Point::new;
    let quad = Quad::new(rect, [p(x0, y0 + h), p(x0, y0), p(x0 + w, y0), p(x0 + w, y0 + h)])?;
    let map = edge_map(quad.domain(), &big)?;

    let k_max = cfg.k_max;
    let delta = fraction(cfg.delta, cfg.n);
    let alphas: Vec<u32> = cfg.alpha.iter().map(|&a| fraction(a, cfg.n)).collect();

    let mut points = Vec::new();
    for &q in &cfg.q {
        let (quad, map, alphas) = (quad.clone(), map.clone(), alphas.clone());
        points.push(SamplingPoint {
            bc: BoundaryPartition::free(&big),
            domain: big.clone(),
            spec: cfg.chain_spec(q)?,
            observe: Box::new(move |d| {
                let (quad, map, alphas) = (quad.clone(), map.clone(), alphas.clone());
                Ok(Box::new(move |c| {
                    let local = restrict(c, &map);
                    let (k, chain) = hamming_crossing(&quad, &local);
                    let mut v: Vec<f64> = (0..=k_max).map(|j| indicator(k == j)).collect();
                    v.extend((0..=k_max).map(|j| indicator(k <= j)));
                    v.push(chain.diameters.iter().copied().min().unwrap_or(0) as f64);
                    for &a in &alphas {
                        v.push(indicator(event_g(&quad, &local, k_max, a)));
                        v.push(indicator(event_h(d, c, Point::new(0, 0), n, k_max, a, delta)?));
                        v.push(indicator(event_f(d, c, Point::new(0, 0), n, a, delta)?));
                    }
                    Ok(v)
                }))
            }),
        });
    }
    let results = sample_points(exec, &points, cfg.chains, cfg.samples)?;

    let mut out = Vec::new();
    for (&q, res) in cfg.q.iter().zip(&results) {
        let base = |kind: &str| {
            EstimateRecord::new("chains", q).param("stat", kind).param("N", cfg.n).param("ell", cfg.ell).timed(cfg, res.wall_ms)
        };
        let e = &res.estimates;
        let k1 = k_max as usize + 1;
        for j in 0..k1 {
            out.push(base("P(k=K)").param("K", j).with_estimate(&e[j]));
        }
        for j in 0..k1 {
            out.push(base("P(k<=K)").param("K", j).with_estimate(&e[k1 + j]));
        }
        out.push(base("min-chain-diameter").with_estimate(&e[2 * k1]));
        for (i, &a) in cfg.alpha.iter().enumerate() {
            let at = 2 * k1 + 1 + 3 * i;
            for (kind, off) in [("G", 0), ("H", 1), ("F", 2)] {
                let mut rec = base(kind).param("alpha", a);
                if kind != "F" {
                    rec = rec.param("K", k_max);
                }
                if kind != "G" {
                    rec = rec.param("delta", cfg.delta);
                }
                out.push(rec.with_estimate(&e[at + off]));
            }
        }
    }
    Ok(out)
}
