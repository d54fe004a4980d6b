//! Power-law and Hölder-exponent fits on log-log scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_samples: usize,
    /// `(min, max)` of the abscissa window used.
    pub window: (f64, f64),
}

/// Ordinary least squares of `log|v|` on `log t`. Requires at least eight
/// positive samples spanning one decade.
pub fn fit_power_law(ts: &[f64], vals: &[f64]) -> Result<FitResult> {
    if ts.len() != vals.len() || ts.len() < 8 {
        return Err(Error::InsufficientSamples(format!("{} samples, need at least 8", ts.len().min(vals.len()))));
    }
    for (i, (&t, &v)) in ts.iter().zip(vals).enumerate() {
        if !(t > 0.0) || !(v > 0.0) || !t.is_finite() || !v.is_finite() {
            return Err(Error::NonPositiveSample(i));
        }
    }
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InsufficientSamples(format!("span {:.3} decades, need 1", (hi / lo).log10())));
    }
    Ok(loglog(ts, vals, (lo, hi)))
}

fn loglog(xs: &[f64], vals: &[f64], window: (f64, f64)) -> FitResult {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    FitResult { exponent: slope, prefactor: intercept.exp(), r_squared: r2, n_samples: xs.len(), window }
}

/// Which side of the base point the ladder samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Fits `|f(x₀ ± h) - f(x₀)| ~ h^α` from samples on a geometric ladder of
/// offsets `h`. `base` is `f(x₀)`; `samples` are `(h, f(x₀ ± h))`.
pub fn estimate_holder(base: f64, _side: Side, samples: &[(f64, f64)]) -> Result<FitResult> {
    if samples.len() < 4 {
        return Err(Error::InsufficientLadder(format!("{} rungs, need at least 4", samples.len())));
    }
    let hs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ds: Vec<f64> = samples.iter().map(|s| (s.1 - base).abs()).collect();
    for (i, (&h, &d)) in hs.iter().zip(&ds).enumerate() {
        if !(h > 0.0) || !(d > 0.0) {
            return Err(Error::InsufficientLadder(format!("rung {i} has a zero offset or zero increment")));
        }
    }
    let lo = hs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = hs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi / lo < 4.0 {
        return Err(Error::InsufficientLadder("ladder spans less than a factor of 4".into()));
    }
    Ok(loglog(&hs, &ds, (lo, hi)))
}

/// Geometric ladder of `n` offsets from `h_min` to `h_max`.
pub fn geometric_ladder(h_min: f64, h_max: f64, n: usize) -> Vec<f64> {
    let r = (h_max / h_min).powf(1.0 / (n as f64 - 1.0));
    (0..n).map(|i| h_min * r.powi(i as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_monomials() {
        let ts: Vec<f64> = (0..12).map(|i| 1e-4 * 2f64.powi(i)).collect();
        let v: Vec<f64> = ts.iter().map(|t| 2.0 * t.sqrt()).collect();
        let f = fit_power_law(&ts, &v).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-10 && (f.prefactor - 2.0).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let v: Vec<f64> = ts.iter().map(|t| t.powi(3)).collect();
        let f = fit_power_law(&ts, &v).unwrap();
        assert!((f.exponent - 3.0).abs() < 1e-10 && (f.prefactor - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let ts: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        assert!(matches!(fit_power_law(&ts, &[1.0; 8]), Err(Error::InsufficientSamples(_))));
        let ts: Vec<f64> = (0..8).map(|i| 10f64.powi(i)).collect();
        let mut v = vec![1.0; 8];
        v[3] = 0.0;
        assert_eq!(fit_power_law(&ts, &v), Err(Error::NonPositiveSample(3)));
    }

    #[test]
    fn holder_scale_invariance() {
        let hs = geometric_ladder(1e-6, 1e-3, 10);
        let s: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 1.0 + h.sqrt())).collect();
        let a = estimate_holder(1.0, Side::Right, &s).unwrap();
        assert!((a.exponent - 0.5).abs() < 1e-10);
        let s2: Vec<(f64, f64)> = hs.iter().map(|&h| (7.0 * h, 3.0 * h.sqrt())).collect();
        let b = estimate_holder(0.0, Side::Right, &s2).unwrap();
        assert!((a.exponent - b.exponent).abs() < 1e-10);
        let s3: Vec<(f64, f64)> = hs.iter().map(|&h| (h, h)).collect();
        assert!((estimate_holder(0.0, Side::Left, &s3).unwrap().exponent - 1.0).abs() < 1e-10);
    }
}
