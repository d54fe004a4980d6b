//! Azimuthal Riemann variables, wave speeds, the γ = 2 ideal-gas
//! thermodynamics and the admissibility predicates used on the shock.
//!
//! Conventions: `w = b + c`, `z = b - c`, with `u_θ = r b`, `u_r = r a`,
//! sound-speed coefficient `σ = r c` and entropy `S = k`. Time carries the
//! 3/4 rescaling of the azimuthal system, so a shock moving at `ṡ` in the
//! rescaled clock moves at `3ṡ/4` relative to the fluid velocity `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adiabatic exponent used by the solver.
pub const GAMMA: f64 = 2.0;
/// Heat capacity in the temperature proxy `1/T = c_v (γ-1) ρ / p`.
pub const CV: f64 = 1.0;
/// Ratio between the physical and the rescaled clock.
pub const TIME_SCALE: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct AzimuthalPoint {
    pub w: f64,
    pub z: f64,
    pub k: f64,
    pub a: f64,
}

impl AzimuthalPoint {
    pub fn new(w: f64, z: f64, k: f64, a: f64) -> Self {
        AzimuthalPoint { w, z, k, a }
    }

    /// Fluid-velocity coefficient `(w + z)/2`.
    pub fn b(&self) -> f64 {
        0.5 * (self.w + self.z)
    }

    /// Sound-speed coefficient `(w - z)/2`.
    pub fn c(&self) -> f64 {
        0.5 * (self.w - self.z)
    }

    pub fn from_bc(b: f64, c: f64, k: f64, a: f64) -> Self {
        AzimuthalPoint { w: b + c, z: b - c, k, a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalState {
    pub u_theta: f64,
    pub u_r: f64,
    pub rho: f64,
    pub p: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "S")]
    pub entropy: f64,
    pub t_inv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpeeds {
    pub lam1: f64,
    pub lam2: f64,
    pub lam3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecificVorticity {
    pub varpi: f64,
}

pub fn wave_speeds(p: &AzimuthalPoint) -> WaveSpeeds {
    WaveSpeeds {
        lam1: p.w / 3.0 + p.z,
        lam2: 2.0 * (p.w + p.z) / 3.0,
        lam3: p.w + p.z / 3.0,
    }
}

pub fn lam1(w: f64, z: f64) -> f64 {
    w / 3.0 + z
}

pub fn lam2(w: f64, z: f64) -> f64 {
    2.0 * (w + z) / 3.0
}

pub fn lam3(w: f64, z: f64) -> f64 {
    w + z / 3.0
}

/// Density `ρ = r²(w-z)² e^{-k}/16`.
pub fn density(w: f64, z: f64, k: f64, r: f64) -> f64 {
    let d = w - z;
    r * r * d * d * (-k).exp() / 16.0
}

pub fn to_physical(p: &AzimuthalPoint, r: f64) -> Result<PhysicalState> {
    if p.w <= p.z {
        return Err(Error::NonPositiveSoundSpeed { w: p.w, z: p.z });
    }
    let sigma = r * p.c();
    let rho = sigma * sigma * (-p.k).exp() / 4.0;
    let pressure = rho * sigma * sigma / 8.0;
    let u_theta = r * p.b();
    let u_r = r * p.a;
    let energy = 0.5 * rho * (u_theta * u_theta + u_r * u_r) + pressure / (GAMMA - 1.0);
    Ok(PhysicalState {
        u_theta,
        u_r,
        rho,
        p: pressure,
        energy,
        entropy: p.k,
        t_inv: CV * (GAMMA - 1.0) * rho / pressure,
    })
}

/// Inverse of [`to_physical`].
pub fn from_physical(s: &PhysicalState, r: f64) -> AzimuthalPoint {
    let sigma = 2.0 * (0.5 * s.entropy).exp() * s.rho.sqrt();
    AzimuthalPoint::from_bc(s.u_theta / r, sigma / r, s.entropy, s.u_r / r)
}

/// `e^{S_-} - 1 = (Q-1)³/(1-3Q)` with `Q = ρ₊/ρ₋` (γ = 2).
pub fn entropy_jump_closed_form(q: f64) -> Result<f64> {
    let den = 1.0 - 3.0 * q;
    if den.abs() < 1e-12 {
        return Err(Error::SingularDenominator(den.abs()));
    }
    let d = q - 1.0;
    Ok(d * d * d / den)
}

/// Residual of the general-γ entropy relation with the smooth factor
/// `B_γ(Q)` replaced by its first-order expansion about `Q = 1`. Exact for
/// γ = 2 (where `B_2 ≡ 0`); only asymptotically accurate elsewhere.
pub fn entropy_jump_residual_general_gamma(gamma: f64, q: f64, e_minus: f64) -> f64 {
    let g = gamma;
    let b1 = (g - 2.0) * (g - 1.0) * g * (g + 1.0) / 12.0;
    let db1 = -(g - 3.0) * (g - 2.0) * (g - 1.0) * g * (g + 1.0) / 40.0;
    let bq = b1 + db1 * (q - 1.0);
    let d = q - 1.0;
    let lead = d * d * d / ((g - 1.0) - (g + 1.0) * q);
    e_minus - lead * (g * (g - 1.0) * (g + 1.0) / 6.0 - d * bq)
}

/// Leading weak-shock entropy jump `(1/12) T₊⁻¹ (∂²V/∂p²)_S [p]³` for the
/// ideal gas, with `(∂²V/∂p²)_S = (γ+1) V / (γ² p²)` from `p V^γ = const`.
pub fn entropy_series(jump_p: f64, plus: &PhysicalState) -> f64 {
    entropy_series_gamma(GAMMA, jump_p, plus)
}

pub fn entropy_series_gamma(gamma: f64, jump_p: f64, plus: &PhysicalState) -> f64 {
    let v = 1.0 / plus.rho;
    let vpp = (gamma + 1.0) * v / (gamma * gamma * plus.p * plus.p);
    let t_inv = CV * (gamma - 1.0) * plus.rho / plus.p;
    t_inv * vpp * jump_p.powi(3) / 12.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// λ₃ ahead of the shock is slower than the shock.
    pub lam3_right_below: bool,
    /// λ₃ behind the shock is faster than the shock.
    pub lam3_left_above: bool,
    /// λ₁, λ₂ on both sides are slower than the shock.
    pub lam12_below: bool,
    /// Fluid crosses the shock from ahead to behind on both sides.
    pub mass_flux_sign: bool,
    /// The two states coincide.
    pub no_shock: bool,
    /// Mass flux `ρ(b - 3ṡ/4)` behind minus ahead.
    pub mass_flux_residual: f64,
}

impl AdmissibilityReport {
    pub fn lax_ok(&self) -> bool {
        !self.no_shock && self.lam3_right_below && self.lam3_left_above && self.lam12_below
    }

    pub fn all_ok(&self) -> bool {
        self.lax_ok() && self.mass_flux_sign
    }
}

pub fn lax_check(left: &AzimuthalPoint, right: &AzimuthalPoint, sdot: f64) -> AdmissibilityReport {
    let no_shock = left.w == right.w && left.z == right.z && left.k == right.k;
    let l = wave_speeds(left);
    let r = wave_speeds(right);
    let rho_l = density(left.w, left.z, left.k, 1.0);
    let rho_r = density(right.w, right.z, right.k, 1.0);
    let v_l = left.b() - TIME_SCALE * sdot;
    let v_r = right.b() - TIME_SCALE * sdot;
    AdmissibilityReport {
        lam3_right_below: !no_shock && r.lam3 < sdot,
        lam3_left_above: !no_shock && l.lam3 > sdot,
        lam12_below: !no_shock && l.lam1 < sdot && l.lam2 < sdot && r.lam1 < sdot && r.lam2 < sdot,
        mass_flux_sign: !no_shock && v_l < 0.0 && v_r < 0.0,
        no_shock,
        mass_flux_residual: rho_l * v_l - rho_r * v_r,
    }
}

pub fn specific_vorticity(p: &AzimuthalPoint, dtheta_a: f64) -> Result<SpecificVorticity> {
    let c = p.c();
    if c <= 0.0 {
        return Err(Error::NonPositiveSoundSpeed { w: p.w, z: p.z });
    }
    Ok(SpecificVorticity { varpi: 4.0 * (p.w + p.z - dtheta_a) * p.k.exp() / (c * c) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_speed_examples() {
        let s = wave_speeds(&AzimuthalPoint::new(3.0, 0.0, 0.0, 0.0));
        assert_eq!((s.lam1, s.lam2, s.lam3), (1.0, 2.0, 3.0));
        let s = wave_speeds(&AzimuthalPoint::new(4.0, 0.3, 0.0, 0.0));
        assert!((s.lam1 - 49.0 / 30.0).abs() < 1e-14);
        assert!((s.lam2 - 43.0 / 15.0).abs() < 1e-14);
        assert!((s.lam3 - 4.1).abs() < 1e-14);
    }

    #[test]
    fn physical_examples() {
        let s = to_physical(&AzimuthalPoint::new(4.0, 0.0, 0.0, 0.0), 1.0).unwrap();
        assert!((s.u_theta - 2.0).abs() < 1e-15);
        assert!((s.rho - 1.0).abs() < 1e-15);
        let s = to_physical(&AzimuthalPoint::new(4.0, -0.1, 0.01, 0.5), 2.0).unwrap();
        assert!((s.rho - 0.25 * 4.1f64.powi(2) * (-0.01f64).exp()).abs() < 1e-14);
        assert!(to_physical(&AzimuthalPoint::new(2.0, 2.0, 0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(entropy_jump_closed_form(1.0).unwrap(), 0.0);
        assert!((entropy_jump_closed_form(0.9).unwrap() - 1.0 / 1700.0).abs() < 1e-17);
        assert!((entropy_jump_closed_form(1.1).unwrap() + 1.0 / 2300.0).abs() < 1e-17);
        assert!(entropy_jump_closed_form(1.0 / 3.0).is_err());
    }

    #[test]
    fn vorticity_examples() {
        let p = AzimuthalPoint::new(4.0, 0.0, 0.0, 0.0);
        assert!((specific_vorticity(&p, 0.0).unwrap().varpi - 4.0).abs() < 1e-15);
        assert_eq!(specific_vorticity(&p, 4.0).unwrap().varpi, 0.0);
    }
}
