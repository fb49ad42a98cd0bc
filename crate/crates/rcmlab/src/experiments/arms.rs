//! Arm-event frequencies over an (r, R) grid, exponent fits and
//! quasi-multiplicativity ratios.

use std::collections::{BTreeMap, BTreeSet};

use rcmlab_core::arms::ArmDetector;
use rcmlab_core::domain::{box_domain, rectangle, special_domain, SpecialKind};
use rcmlab_core::stats::{fit_exponent, Estimate};
use rcmlab_core::{Annulus, ArmSpec, BoundaryPartition, Domain, Executor, Mask, Point};

use super::{indicator, sample_points, SamplingPoint};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::record::EstimateRecord;

/// Free-boundary stand-in for the plane, half-plane or quadrant seen from the
/// origin, `size` lattice steps across in every allowed direction.
pub fn plane_box(mask: Mask, size: i32) -> CliResult<Domain> {
    let origin = Point::new(0, 0);
    Ok(match mask {
        Mask::Full => box_domain(size, origin)?,
        Mask::Half => special_domain(SpecialKind::HalfPlaneRect { n: size })?.0,
        Mask::Quarter => rectangle(0, 0, size, size)?,
    })
}

/// (r, ρ, R) with r < ρ < R drawn from the r, ρ and R lists.
fn triples(cfg: &ExperimentConfig, r_sigma: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for &r in cfg.r.iter().filter(|&&r| r >= r_sigma) {
        for &rho in cfg.rho.iter().filter(|&&rho| rho > r) {
            for &big in cfg.big_r.iter().filter(|&&big| big > rho) {
                out.push((r, rho, big));
            }
        }
    }
    out
}

pub fn exp_arm_exponents<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> CliResult<Vec<EstimateRecord>> {
    let mask = cfg.mask.mask();
    let mut out = Vec::new();
    // (q, σ) → pairs to sample, grouped by outer radius.
    let mut plan: Vec<(f64, ArmSpec, BTreeMap<u32, Vec<u32>>)> = Vec::new();
    for &q in &cfg.q {
        for word in &cfg.sigma {
            let spec = ArmSpec::parse(word, mask)?;
            let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
            for (r, big) in cfg.scale_pairs() {
                if r < spec.r_sigma() {
                    out.push(arm_record(cfg, q, word, r, big).param("note", format!("r below r_sigma={}", spec.r_sigma())));
                } else {
                    pairs.insert((r, big));
                }
            }
            for (r, rho, big) in triples(cfg, spec.r_sigma()) {
                pairs.extend([(r, rho), (rho, big), (r, big)]);
            }
            let mut by_outer: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for (r, big) in pairs {
                by_outer.entry(big).or_default().push(r);
            }
            plan.push((q, spec, by_outer));
        }
    }

    let mut points = Vec::new();
    for (q, spec, by_outer) in &plan {
        for (&big, inner) in by_outer {
            let domain = plane_box(mask, (cfg.box_factor * big) as i32)?;
            let annuli: Vec<Annulus> =
                inner.iter().map(|&r| Annulus::new(Point::new(0, 0), r, big, mask)).collect::<Result<_, _>>()?;
            let spec = spec.clone();
            points.push(SamplingPoint {
                bc: BoundaryPartition::free(&domain),
                domain,
                spec: cfg.chain_spec(*q)?,
                observe: Box::new(move |d| {
                    let detectors: Vec<ArmDetector> =
                        annuli.iter().map(|a| ArmDetector::new(d, a, &spec)).collect::<Result<_, _>>()?;
                    Ok(Box::new(move |c| detectors.iter().map(|det| det.detect(c).map(indicator)).collect()))
                }),
            });
        }
    }
    let results = sample_points(exec, &points, cfg.chains, cfg.samples)?;

    let mut res_it = results.iter();
    for (q, spec, by_outer) in &plan {
        let word = spec.word();
        let mut table: BTreeMap<(u32, u32), (Estimate, u64)> = BTreeMap::new();
        for (&big, inner) in by_outer {
            let res = res_it.next().expect("one result per point");
            for (k, &r) in inner.iter().enumerate() {
                table.insert((r, big), (res.estimates[k], res.wall_ms));
            }
        }
        let scale_pairs: Vec<(u32, u32)> = cfg.scale_pairs().into_iter().filter(|p| table.contains_key(p)).collect();
        for (r, big) in &scale_pairs {
            let (e, ms) = table[&(*r, *big)];
            let mut rec = arm_record(cfg, *q, &word, *r, *big).with_estimate(&e).timed(cfg, ms);
            if e.mean == 0.0 {
                rec = rec.param("note", "zero count");
            }
            out.push(rec);
        }

        let fit_points: Vec<(f64, Estimate)> =
            scale_pairs.iter().map(|&(r, big)| (big as f64 / r as f64, table[&(r, big)].0)).collect();
        let mut fit = EstimateRecord::new("arms-fit", *q).param("sigma", &word).param("mask", mask.name()).timed(cfg, 0);
        match fit_exponent(&fit_points) {
            Ok((line, excluded)) => {
                fit.estimate = line.slope;
                fit.std_err = line.slope_err;
                fit.n_samples = line.points;
                if excluded > 0 {
                    fit = fit.param("note", format!("{excluded} zero-count points excluded"));
                }
            }
            Err(e) => fit = fit.param("note", e.to_string()),
        }
        out.push(fit);

        for (r, rho, big) in triples(cfg, spec.r_sigma()) {
            let (a, b, c) = (table[&(r, rho)].0, table[&(rho, big)].0, table[&(r, big)].0);
            let mut rec = EstimateRecord::new("arms-qm", *q)
                .param("sigma", &word)
                .param("mask", mask.name())
                .param("r", r)
                .param("rho", rho)
                .param("R", big)
                .timed(cfg, 0);
            rec.n_samples = c.n_samples;
            if a.mean > 0.0 && b.mean > 0.0 && c.mean > 0.0 {
                let ratio = a.mean * b.mean / c.mean;
                let rel = ((a.std_err / a.mean).powi(2) + (b.std_err / b.mean).powi(2) + (c.std_err / c.mean).powi(2)).sqrt();
                rec.estimate = ratio;
                rec.std_err = ratio * rel;
            } else {
                rec = rec.param("note", "zero count");
            }
            out.push(rec);
        }
    }
    Ok(out)
}

fn arm_record(cfg: &ExperimentConfig, q: f64, word: &str, r: u32, big: u32) -> EstimateRecord {
    EstimateRecord::new("arms", q)
        .param("sigma", word)
        .param("mask", cfg.mask.mask().name())
        .param("r", r)
        .param("R", big)
        .timed(cfg, 0)
}
