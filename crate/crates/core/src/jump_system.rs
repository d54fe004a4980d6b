//! Rankine–Hugoniot algebra on the shock. Given the one-sided traces
//! `w₋ = vl`, `w₊ = vr` (with `z₊ = k₊ = 0` ahead of the shock), the behind
//! state `(z₋, e₋ = e^{k₋} - 1)` is the root of two polynomial residuals;
//! the shock speed then follows from the mass-flux condition.

use serde::{Deserialize, Serialize};

use crate::analysis_io::fit::{fit_power_law, FitResult};
use crate::error::{Error, Result};
use crate::riemann_core::{lax_check, AdmissibilityReport, AzimuthalPoint};

pub const NEWTON_CAP: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockTraces {
    pub vl: f64,
    pub vr: f64,
    pub jump: f64,
    pub mean: f64,
}

impl ShockTraces {
    pub fn new(vl: f64, vr: f64) -> Self {
        ShockTraces { vl, vr, jump: vl - vr, mean: 0.5 * (vl + vr) }
    }

    pub fn from_jump_mean(jump: f64, mean: f64) -> Self {
        Self::new(mean + 0.5 * jump, mean - 0.5 * jump)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpSolution {
    pub z_minus: f64,
    pub k_minus: f64,
    pub e_minus: f64,
    pub sdot: f64,
    pub residual_e1: f64,
    pub residual_e2: f64,
    pub iterations: usize,
    pub admissible: AdmissibilityReport,
}

impl JumpSolution {
    pub fn left_state(&self, vl: f64) -> AzimuthalPoint {
        AzimuthalPoint::new(vl, self.z_minus, self.k_minus, 0.0)
    }
}

struct Parts {
    a: f64,
    b: f64,
    c: f64,
    u: f64,
    p: f64,
    q: f64,
}

fn parts(vl: f64, vr: f64, z: f64, e: f64) -> Parts {
    let u = vl - z;
    let p = vl + z;
    let q = 1.0 + e;
    let u2 = u * u;
    let vr2 = vr * vr;
    Parts {
        a: u2 * p * p + u2 * u2 / 8.0 - 9.0 / 8.0 * q * vr2 * vr2,
        b: u2 - q * vr2,
        c: u2 * p - q * vr2 * vr,
        u,
        p,
        q,
    }
}

/// `E₁` (momentum/mass speed compatibility) and `E₂` (energy relation),
/// both in the polynomial form obtained after clearing `e^{-k₋}`.
pub fn residuals_e1_e2(vl: f64, vr: f64, z_minus: f64, e_minus: f64) -> (f64, f64) {
    let Parts { a, b, c, u, q, .. } = parts(vl, vr, z_minus, e_minus);
    let u2 = u * u;
    let e1 = a * b - c * c;
    let e2 = e_minus * u2 * u2 * (3.0 * vr * vr * q - u2) - b * b * b;
    (e1, e2)
}

fn jacobian(vl: f64, vr: f64, z: f64, e: f64) -> [[f64; 2]; 2] {
    let Parts { a, b, c, u, p, q } = parts(vl, vr, z, e);
    let u2 = u * u;
    let vr2 = vr * vr;
    let da_dz = -2.0 * u * p * p + 2.0 * u2 * p - 0.5 * u2 * u;
    let db_dz = -2.0 * u;
    let dc_dz = -2.0 * u * p + u2;
    let da_de = -9.0 / 8.0 * vr2 * vr2;
    let db_de = -vr2;
    let dc_de = -vr2 * vr;
    let de1_dz = da_dz * b + a * db_dz - 2.0 * c * dc_dz;
    let de1_de = da_de * b + a * db_de - 2.0 * c * dc_de;
    let bracket = 3.0 * vr2 * q - u2;
    let de2_dz = e * (-4.0 * u2 * u * bracket + 2.0 * u2 * u2 * u) + 6.0 * u * b * b;
    let de2_de = u2 * u2 * bracket + 3.0 * e * u2 * u2 * vr2 + 3.0 * b * b * vr2;
    [[de1_dz, de1_de], [de2_dz, de2_de]]
}

/// Leading-order root of the jump system in terms of `[w]` and `⟨w⟩`.
pub fn asymptotic_seed(jump: f64, mean: f64) -> Result<(f64, f64)> {
    if jump == 0.0 {
        return Ok((0.0, 0.0));
    }
    let x = jump / mean;
    if !(x.abs() < 2.0 / 3.0) {
        return Err(Error::SeedOutOfRange(x.abs()));
    }
    let q1 = 1.0 / (1.0 - 2.25 * x * x);
    let q2 = (1.0 - 9.0 / 16.0 * x * x) / (1.0 - 2.25 * x * x);
    let j3 = jump * jump * jump;
    let z = -9.0 * j3 / (16.0 * mean * mean) * q1;
    let e = 4.0 * j3 / (mean * mean * mean) * q2;
    Ok((z, e))
}

/// Shock speed from the mass-flux condition with the full `e^{-k₋}` factor:
/// `ṡ = (2/3)(u²p - (1+e)w₊³)/(u² - (1+e)w₊²)`, `u = w₋ - z₋`, `p = w₋ + z₋`.
/// With `e₋ = 0` this is the entropy-free form.
pub fn shock_speed(vl: f64, vr: f64, z_minus: f64, e_minus: f64) -> Result<f64> {
    let Parts { b, c, .. } = parts(vl, vr, z_minus, e_minus);
    if b.abs() <= 1e-14 * vr * vr {
        return Err(Error::DegenerateDenominator);
    }
    Ok(2.0 / 3.0 * c / b)
}

/// Shock speed from the momentum condition; agrees with [`shock_speed`] at
/// a root of the jump system.
pub fn shock_speed_momentum(vl: f64, vr: f64, z_minus: f64, e_minus: f64) -> Result<f64> {
    let Parts { a, c, .. } = parts(vl, vr, z_minus, e_minus);
    if c.abs() <= 1e-14 * vr * vr * vr {
        return Err(Error::DegenerateDenominator);
    }
    Ok(2.0 / 3.0 * a / c)
}

/// Damped Newton on `(E₁, E₂)` from the asymptotic seed.
pub fn solve_jump(traces: ShockTraces, tol: f64) -> Result<JumpSolution> {
    let ShockTraces { vl, vr, jump, mean } = traces;
    let right = AzimuthalPoint::new(vr, 0.0, 0.0, 0.0);
    if jump == 0.0 {
        let left = AzimuthalPoint::new(vl, 0.0, 0.0, 0.0);
        return Ok(JumpSolution {
            z_minus: 0.0,
            k_minus: 0.0,
            e_minus: 0.0,
            sdot: vl,
            residual_e1: 0.0,
            residual_e2: 0.0,
            iterations: 0,
            admissible: lax_check(&left, &right, vl),
        });
    }
    let (mut z, mut e) = asymptotic_seed(jump, mean)?;
    let norm = |r: (f64, f64)| r.0.abs().max(r.1.abs());
    let mut res = residuals_e1_e2(vl, vr, z, e);
    let mut iters = 0;
    while norm(res) > tol {
        if iters >= NEWTON_CAP {
            return Err(Error::NewtonDiverged { iters, residual: norm(res) });
        }
        iters += 1;
        let j = jacobian(vl, vr, z, e);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NewtonDiverged { iters, residual: norm(res) });
        }
        let dz = -(res.0 * j[1][1] - res.1 * j[0][1]) / det;
        let de = -(j[0][0] * res.1 - j[1][0] * res.0) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let zn = z + lambda * dz;
            let en = e + lambda * de;
            let rn = residuals_e1_e2(vl, vr, zn, en);
            if norm(rn) < norm(res) {
                z = zn;
                e = en;
                res = rn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // rounding floor: the full step no longer reduces the residual
            if norm(res) <= 10.0 * tol {
                break;
            }
            return Err(Error::NewtonDiverged { iters, residual: norm(res) });
        }
    }
    let sdot = shock_speed(vl, vr, z, e)?;
    let k = e.ln_1p();
    let left = AzimuthalPoint::new(vl, z, k, 0.0);
    Ok(JumpSolution {
        z_minus: z,
        k_minus: k,
        e_minus: e,
        sdot,
        residual_e1: res.0,
        residual_e2: res.1,
        iterations: iters,
        admissible: lax_check(&left, &right, sdot),
    })
}

/// Approximate shock speed `⟨w⟩ - 7[w]²/(24⟨w⟩)`.
pub fn shock_speed_approx(jump: f64, mean: f64) -> f64 {
    mean - 7.0 * jump * jump / (24.0 * mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpScalingReport {
    pub jump_w: FitResult,
    pub jump_z: FitResult,
    pub jump_k: FitResult,
    pub jump_dtheta_a: FitResult,
}

impl JumpScalingReport {
    pub fn exponents(&self) -> [f64; 4] {
        [self.jump_w.exponent, self.jump_z.exponent, self.jump_k.exponent, self.jump_dtheta_a.exponent]
    }
}

/// Log-log fits of the four jumps against time (magnitudes are fitted).
pub fn jump_scaling_report(
    ts: &[f64],
    jump_w: &[f64],
    jump_z: &[f64],
    jump_k: &[f64],
    jump_dtheta_a: &[f64],
) -> Result<JumpScalingReport> {
    let abs = |v: &[f64]| v.iter().map(|x| x.abs()).collect::<Vec<_>>();
    Ok(JumpScalingReport {
        jump_w: fit_power_law(ts, &abs(jump_w))?,
        jump_z: fit_power_law(ts, &abs(jump_z))?,
        jump_k: fit_power_law(ts, &abs(jump_k))?,
        jump_dtheta_a: fit_power_law(ts, &abs(jump_dtheta_a))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_root() {
        assert_eq!(residuals_e1_e2(4.0, 4.0, 0.0, 0.0), (0.0, 0.0));
        let s = solve_jump(ShockTraces::new(4.0, 4.0), DEFAULT_TOL).unwrap();
        assert_eq!((s.z_minus, s.k_minus, s.e_minus), (0.0, 0.0, 0.0));
        assert!(s.admissible.no_shock);
    }

    #[test]
    fn nonzero_residual_off_root() {
        // u = 1.5, p = 2.5, q = 1: A = 14.0625 + 0.6328125 - 18, B = -1.75, C = -2.375
        let (e1, e2) = residuals_e1_e2(2.0, 2.0, 0.5, 0.0);
        let a = 2.25 * 6.25 + 1.5f64.powi(4) / 8.0 - 18.0;
        assert!((e1 - (a * -1.75 - 2.375 * 2.375)).abs() < 1e-12);
        assert!((e2 - 1.75f64.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn seed_example() {
        let (z, _) = asymptotic_seed(0.2, 4.0).unwrap();
        assert!((z + 2.8125e-4 / 0.994375).abs() < 1e-16);
        assert!(asymptotic_seed(3.0, 4.0).is_err());
    }

    #[test]
    fn speed_example() {
        assert!((shock_speed(2.0, 1.0, 0.0, 0.0).unwrap() - 14.0 / 9.0).abs() < 1e-15);
        assert!(shock_speed(2.0, 2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn newton_root_and_admissibility() {
        let s = solve_jump(ShockTraces::new(4.1, 3.9), DEFAULT_TOL).unwrap();
        assert!(s.residual_e1.abs() < 1e-12 && s.residual_e2.abs() < 1e-12);
        assert!(s.z_minus < 0.0 && s.k_minus > 0.0);
        assert!(s.admissible.all_ok());
        let alt = shock_speed_momentum(4.1, 3.9, s.z_minus, s.e_minus).unwrap();
        assert!((alt - s.sdot).abs() < 1e-10);
        assert!(s.admissible.mass_flux_residual.abs() < 1e-13);
    }
}
