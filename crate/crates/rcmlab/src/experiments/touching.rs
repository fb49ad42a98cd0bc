//! Probability that the core Λ_R of an R-centred domain reaches the boundary
//! under free boundary conditions, and the number of boundary r-boxes it
//! touches.

use rcmlab_core::connectivity::{core_touches_boundary, count_boundary_boxes};
use rcmlab_core::domain::random_centred_domain;
use rcmlab_core::sampler::splitmix64;
use rcmlab_core::{BoundaryPartition, Executor};

use super::{indicator, sample_points, SamplingPoint};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::record::EstimateRecord;

/// Seed of domain `index` of family `family` at scale R.
fn domain_seed(master: u64, family: usize, big_r: u32, index: usize) -> u64 {
    splitmix64(master ^ splitmix64(((family as u64) << 48) ^ ((big_r as u64) << 24) ^ index as u64))
}

/// Records: `touch` (one per q, family, R, domain) with the estimate of
/// p(R), `touch-boxes` with the mean count of touched r-boxes for each r < R,
/// and `touch-min` with the smallest p(R) over the domains of a family.
pub fn exp_touching_boundary<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> CliResult<Vec<EstimateRecord>> {
    let families = cfg.families()?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for &q in &cfg.q {
        for (fi, &family) in families.iter().enumerate() {
            for &big in &cfg.big_r {
                for k in 0..cfg.domains_per_family {
                    let domain = random_centred_domain(big as i32, family, domain_seed(cfg.seed, fi, big, k))?;
                    let boxes: Vec<i32> = cfg.r.iter().filter(|&&r| r < big).map(|&r| r as i32).collect();
                    labels.push((q, family.name(), big, k, boxes.clone()));
                    let big = big as i32;
                    points.push(SamplingPoint {
                        bc: BoundaryPartition::free(&domain),
                        domain,
                        spec: cfg.chain_spec(q)?,
                        observe: Box::new(move |d| {
                            let boxes = boxes.clone();
                            Ok(Box::new(move |c| {
                                let mut v = vec![indicator(core_touches_boundary(d, c, big)?)];
                                for &r in &boxes {
                                    v.push(count_boundary_boxes(d, c, big, r)? as f64);
                                }
                                Ok(v)
                            }))
                        }),
                    });
                }
            }
        }
    }
    let results = sample_points(exec, &points, cfg.chains, cfg.samples)?;

    let mut out = Vec::new();
    let mut minima: Vec<EstimateRecord> = Vec::new();
    for ((q, family, big, k, boxes), res) in labels.into_iter().zip(&results) {
        let rec = EstimateRecord::new("touch", q)
            .param("family", family)
            .param("R", big)
            .param("domain", k)
            .with_estimate(&res.estimates[0])
            .timed(cfg, res.wall_ms);
        match minima.iter_mut().find(|m| m.q == q && m.get("family") == Some(family) && m.get("R") == Some(&big.to_string())) {
            Some(m) if m.estimate <= rec.estimate => {}
            Some(m) => {
                (m.estimate, m.std_err, m.n_samples) = (rec.estimate, rec.std_err, rec.n_samples);
            }
            None => {
                let mut m = EstimateRecord::new("touch-min", q).param("family", family).param("R", big).timed(cfg, 0);
                (m.estimate, m.std_err, m.n_samples) = (rec.estimate, rec.std_err, rec.n_samples);
                minima.push(m);
            }
        }
        out.push(rec);
        for (j, r) in boxes.iter().enumerate() {
            out.push(
                EstimateRecord::new("touch-boxes", q)
                    .param("family", family)
                    .param("R", big)
                    .param("domain", k)
                    .param("r", r)
                    .with_estimate(&res.estimates[j + 1])
                    .timed(cfg, res.wall_ms),
            );
        }
    }
    out.extend(minima);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcmlab_core::domain::CentredFamily;
    use rcmlab_core::{Configuration, Sequential};

    #[test]
    fn full_configuration_always_touches() {
        let d = random_centred_domain(2, CentredFamily::Spiral, 3).unwrap();
        let full = Configuration::full(d.num_edges());
        assert!(core_touches_boundary(&d, &full, 2).unwrap());
        assert!(count_boundary_boxes(&d, &full, 2, 1).unwrap() > 0);
    }

    #[test]
    fn sweep_layout_and_minima() {
        let cfg = ExperimentConfig {
            experiment: "touch".into(),
            big_r: vec![2],
            r: vec![1],
            domains_per_family: 2,
            samples: 400,
            chains: 2,
            record_wall_time: false,
            ..ExperimentConfig::default()
        };
        let recs = exp_touching_boundary(&cfg, &Sequential).unwrap();
        // 3 families × 2 domains × (p + boxes) + 3 minima.
        assert_eq!(recs.len(), 15);
        let mins: Vec<&EstimateRecord> = recs.iter().filter(|r| r.experiment == "touch-min").collect();
        assert_eq!(mins.len(), 3);
        for m in mins {
            let fam = m.get("family").unwrap();
            let least = recs
                .iter()
                .filter(|r| r.experiment == "touch" && r.get("family") == Some(fam))
                .map(|r| r.estimate)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(m.estimate, least);
            assert!(m.estimate > 0.0 && m.estimate <= 1.0);
        }
    }
}
