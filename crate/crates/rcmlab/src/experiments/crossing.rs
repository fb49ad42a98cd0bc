//! Crossing probabilities of quads against their extremal distance.

use rcmlab_core::connectivity::has_crossing;
use rcmlab_core::extremal::extremal_distance;
use rcmlab_core::{BoundaryPartition, Executor, Quad};

use super::{indicator, sample_points, SamplingPoint};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::record::EstimateRecord;

const EXTREMAL_TOL: f64 = 1e-10;

/// Per q and quad: ℓ = ℓ[(ab), (cd)], the crossing probability under free
/// and wired boundary conditions for (ab)↔(cd) and for the rotated quad
/// (bc)↔(da), and the duality sum p_free(ab↔cd) + p_wired(bc↔da).
pub fn exp_crossing_vs_modulus<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> CliResult<Vec<EstimateRecord>> {
    let quads: Vec<(String, Quad, f64)> = cfg
        .quads
        .iter()
        .map(|spec| {
            let quad = spec.build()?;
            let ell = extremal_distance(&quad, cfg.refine, EXTREMAL_TOL)?;
            Ok((spec.name(), quad, ell))
        })
        .collect::<CliResult<_>>()?;

    let mut points = Vec::new();
    for &q in &cfg.q {
        for (_, quad, _) in &quads {
            for wired in [false, true] {
                let d = quad.domain();
                let bc = if wired { BoundaryPartition::wired(d) } else { BoundaryPartition::free(d) };
                let (straight, rotated) = (quad.clone(), quad.rotated());
                points.push(SamplingPoint {
                    domain: d.clone(),
                    bc,
                    spec: cfg.chain_spec(q)?,
                    observe: Box::new(move |_| {
                        let (a, b) = (straight.clone(), rotated.clone());
                        Ok(Box::new(move |c| Ok(vec![indicator(has_crossing(&a, c)), indicator(has_crossing(&b, c))])))
                    }),
                });
            }
        }
    }
    let results = sample_points(exec, &points, cfg.chains, cfg.samples)?;

    let mut out = Vec::new();
    let mut it = results.iter();
    for &q in &cfg.q {
        for (name, _, ell) in &quads {
            let free = it.next().expect("free point");
            let wired = it.next().expect("wired point");
            for (bc, res) in [("free", free), ("wired", wired)] {
                for (arcs, k, l) in [("ab-cd", 0, *ell), ("bc-da", 1, 1.0 / ell)] {
                    out.push(
                        EstimateRecord::new("crossing", q)
                            .param("quad", name)
                            .param("arcs", arcs)
                            .param("bc", bc)
                            .param("ell", l)
                            .with_estimate(&res.estimates[k])
                            .timed(cfg, res.wall_ms),
                    );
                }
            }
            let (a, b) = (free.estimates[0], wired.estimates[1]);
            let mut sum = EstimateRecord::new("crossing-duality", q)
                .param("quad", name)
                .param("arcs", "ab-cd+bc-da")
                .param("bc", "free+wired")
                .param("ell", ell)
                .with_estimate(&a)
                .timed(cfg, free.wall_ms + wired.wall_ms);
            sum.estimate = a.mean + b.mean;
            sum.std_err = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
            out.push(sum);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::QuadSpec;
    use rcmlab_core::Sequential;

    #[test]
    fn square_percolation_is_near_one_half() {
        let cfg = ExperimentConfig {
            experiment: "crossing".into(),
            quads: vec![QuadSpec::Rectangle { w: 5, h: 4 }],
            samples: 4000,
            refine: 4,
            record_wall_time: false,
            ..ExperimentConfig::default()
        };
        let recs = exp_crossing_vs_modulus(&cfg, &Sequential).unwrap();
        assert_eq!(recs.len(), 5);
        let free = &recs[0];
        assert_eq!(free.get("bc"), Some("free"));
        assert!((free.estimate - 0.5).abs() < 4.0 * free.std_err, "{free:?}");
        // The rotated quad is crossed the short way.
        assert_eq!(recs[1].get("arcs"), Some("bc-da"));
        assert!(recs[1].estimate > recs[0].estimate);
        assert_eq!(recs[4].experiment, "crossing-duality");
    }
}
