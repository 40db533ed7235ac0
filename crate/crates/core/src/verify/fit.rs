use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n: usize,
}

/// Smallest `|v|` accepted by [`decay_fit`].
pub const FIT_FLOOR: f64 = 1e-14;

/// Fewest samples accepted by [`decay_fit`].
pub const MIN_SAMPLES: usize = 3;

/// Least-squares fit of `log|v|` against `log t`; samples must span at least
/// two decades in `t`.
pub fn decay_fit(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(t, v)| {
            if t <= 0.0 || v.abs() < FIT_FLOOR || !v.is_finite() {
                Err(Error::DegenerateFit(format!("sample (t = {t}, v = {v}) has no logarithm")))
            } else {
                Ok((t.ln(), v.abs().ln()))
            }
        })
        .collect::<Result<_>>()?;
    let n = pts.len();
    if n < MIN_SAMPLES {
        return Err(Error::DegenerateFit(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    if hi - lo < 2.0 * std::f64::consts::LN_10 * (1.0 - 1e-12) {
        return Err(Error::DegenerateFit("samples span less than two decades in t".into()));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (ssr / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(DecayFit {
        slope,
        intercept,
        slope_stderr,
        n,
    })
}
