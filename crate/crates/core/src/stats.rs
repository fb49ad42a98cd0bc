//! Estimates with autocorrelation-corrected errors and log-log exponent fits.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sampler::autocorrelation;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: usize,
    /// Integrated autocorrelation time used for the error; 1/2 when the
    /// series was treated as independent.
    pub tau: f64,
}

/// Mean of a time series with standard error sqrt(2τ var / n). Short or
/// constant series fall back to the independent-sample formula.
pub fn estimate(series: &[f64]) -> Result<Estimate> {
    let n = series.len();
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    let tau = match autocorrelation(series) {
        Ok(a) => a.tau,
        Err(_) => 0.5,
    };
    let std_err = libm::sqrt(2.0 * tau * var / n as f64);
    Ok(Estimate { mean, std_err, n_samples: n, tau })
}

/// Independent Bernoulli trials.
pub fn proportion(successes: usize, n: usize) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    let p = successes as f64 / n as f64;
    Ok(Estimate { mean: p, std_err: libm::sqrt(p * (1.0 - p) / n as f64), n_samples: n, tau: 0.5 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_err: f64,
    pub points: usize,
}

/// Weighted least squares y = a + b x with weights 1/σ².
pub fn weighted_fit(points: &[(f64, f64, f64)]) -> Result<LinearFit> {
    let usable: Vec<(f64, f64, f64)> = points.iter().copied().filter(|&(_, _, s)| s > 0.0 && s.is_finite()).collect();
    if usable.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, found: usable.len() });
    }
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, s) in &usable {
        let w = 1.0 / (s * s);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return Err(Error::InvalidParams("fit abscissae are all equal"));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    Ok(LinearFit { slope, intercept, slope_err: libm::sqrt(sw / det), points: usable.len() })
}

/// Fits P ≈ C (r/R)^α from (R/r, estimate) pairs, returning α. Points with a
/// zero estimate are excluded; their count is returned alongside.
pub fn fit_exponent(points: &[(f64, Estimate)]) -> Result<(LinearFit, usize)> {
    let mut excluded = 0;
    let mut logs = Vec::new();
    for &(ratio, est) in points {
        if est.mean <= 0.0 {
            excluded += 1;
            continue;
        }
        // Delta method: se(ln p) = se(p) / p; a zero error (every trial a
        // success) is floored at one trial's worth.
        let se = (est.std_err / est.mean).max(1.0 / est.n_samples.max(1) as f64);
        logs.push((libm::log(ratio), -libm::log(est.mean), se));
    }
    Ok((weighted_fit(&logs)?, excluded))
}
