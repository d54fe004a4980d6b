//! Pre-shock data family, the Burgers flow map past the pre-shock and its
//! one-sided inversion, the self-similar cusp profile and the fractional
//! inversion of a quartic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bisect, newton_bracketed};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `w₀(θ) = κ - b θ^{1/3} + c θ^{2/3} + g₀(θ)` (odd cube root), together
/// with the radial-velocity datum `a₀` (zero unless given).
#[derive(Clone)]
pub struct CuspDatum {
    pub kappa: f64,
    pub b: f64,
    pub c_coef: f64,
    pub mbar: f64,
    pub g0: Option<ScalarFn>,
    pub a0: Option<ScalarFn>,
}

impl fmt::Debug for CuspDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CuspDatum")
            .field("kappa", &self.kappa)
            .field("b", &self.b)
            .field("c_coef", &self.c_coef)
            .field("mbar", &self.mbar)
            .field("g0", &self.g0.is_some())
            .field("a0", &self.a0.is_some())
            .finish()
    }
}

impl CuspDatum {
    pub fn new(kappa: f64, b: f64, c_coef: f64, mbar: f64) -> Self {
        CuspDatum { kappa, b, c_coef, mbar, g0: None, a0: None }
    }

    pub fn pure(kappa: f64, b: f64) -> Self {
        Self::new(kappa, b, 0.0, 10.0)
    }

    pub fn with_g0(mut self, g0: ScalarFn) -> Self {
        self.g0 = Some(g0);
        self
    }

    pub fn with_a0(mut self, a0: ScalarFn) -> Self {
        self.a0 = Some(a0);
        self
    }

    pub fn g0(&self, x: f64) -> f64 {
        self.g0.as_ref().map_or(0.0, |g| g(x))
    }

    pub fn w0(&self, x: f64) -> f64 {
        let r = x.cbrt();
        self.kappa - self.b * r + self.c_coef * r * r + self.g0(x)
    }

    pub fn w0_prime(&self, x: f64) -> f64 {
        let r = x.cbrt();
        let g = match &self.g0 {
            Some(g) => {
                let h = 1e-7 * (1.0 + x.abs());
                (g(x + h) - g(x - h)) / (2.0 * h)
            }
            None => 0.0,
        };
        if r == 0.0 {
            return f64::NEG_INFINITY;
        }
        -self.b / (3.0 * r * r) + 2.0 * self.c_coef / (3.0 * r) + g
    }

    pub fn w0_second(&self, x: f64) -> f64 {
        let r = x.cbrt();
        let g = match &self.g0 {
            Some(g) => {
                let h = 1e-5 * (1.0 + x.abs());
                (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)
            }
            None => 0.0,
        };
        2.0 * self.b / (9.0 * r.powi(5)) - 2.0 * self.c_coef / (9.0 * r.powi(4)) + g
    }

    pub fn a0(&self, x: f64) -> f64 {
        self.a0.as_ref().map_or(0.0, |a| a(x))
    }

    /// Checks `κ/2 ≤ w₀ ≤ m̄` and `|g₀| ≤ m̄|θ|` on a sampled grid of
    /// half-width `half_width`. Returns the list of violations.
    pub fn validate(&self, half_width: f64, samples: usize) -> Vec<String> {
        let mut bad = Vec::new();
        for i in 0..=samples {
            let x = -half_width + 2.0 * half_width * i as f64 / samples as f64;
            let w = self.w0(x);
            if w < 0.5 * self.kappa || w > self.mbar {
                bad.push(format!("w0({x:e}) = {w} outside [kappa/2, mbar]"));
            }
            if self.g0(x).abs() > self.mbar * x.abs() + 1e-300 {
                bad.push(format!("|g0({x:e})| exceeds mbar |x|"));
            }
        }
        bad
    }
}

/// `η_B(x, t) = x + t w₀(x)`.
pub fn burgers_flow(x: f64, t: f64, datum: &CuspDatum) -> f64 {
    x + t * datum.w0(x)
}

/// The largest and smallest real roots of `Z³ - Z = ζ`, `|ζ| ≤ 1/10`.
pub fn cubic_roots_zpm(zeta: f64) -> Result<(f64, f64)> {
    if zeta.abs() > 0.1 {
        return Err(Error::NoRoot(format!("|zeta| = {} exceeds 1/10", zeta.abs())));
    }
    // trigonometric form for three real roots of Z³ - Z - ζ = 0
    let r = 2.0 / 3f64.sqrt();
    let phi = (1.5 * zeta * 3f64.sqrt()).clamp(-1.0, 1.0).acos() / 3.0;
    let mut zp = r * phi.cos();
    let mut zm = r * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    for z in [&mut zp, &mut zm] {
        for _ in 0..3 {
            let f = *z * *z * *z - *z - zeta;
            *z -= f / (3.0 * *z * *z - 1.0);
        }
    }
    Ok((zp, zm))
}

/// Truncated power series of the two extremal roots about `ζ = 0`.
pub fn z_pm_series(zeta: f64) -> (f64, f64) {
    let z2 = zeta * zeta;
    let z3 = z2 * zeta;
    let z4 = z3 * zeta;
    let z5 = z4 * zeta;
    let even = zeta / 2.0 + z3 / 2.0 + 1.5 * z5;
    let odd = 1.0 - 3.0 * z2 / 8.0 - 105.0 * z4 / 128.0;
    (even + odd, even - odd)
}

/// Context for inverting `θ ↦ η_B⁻¹(θ, t)` on either side of a prescribed
/// shock position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgersInverse {
    pub t: f64,
    pub shock_pos: f64,
    pub x_minus: f64,
    pub x_plus: f64,
}

/// Extremal labels `x_∓(t)` whose Burgers characteristics reach the shock
/// position at time `t`, computed in the rescaled variables
/// `τ = (bt)^{1/2}`, `y = x^{1/3}/τ`, `ζ = (s - κt)/τ³`.
pub fn extremal_labels(t: f64, shock_pos: f64, datum: &CuspDatum) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let b = datum.b;
    let tau = (b * t).sqrt();
    let tau3 = tau * tau * tau;
    let zeta = (shock_pos - datum.kappa * t) / tau3;
    let seeds = match cubic_roots_zpm(zeta) {
        Ok(s) => s,
        Err(_) => (1.0 + zeta / 2.0, -1.0 + zeta / 2.0),
    };
    let cb = datum.c_coef / b;
    let f = |y: f64| {
        let x = tau3 * y * y * y;
        let g = cb * tau * y * y + datum.g0(x) / (b * tau);
        let gy = 2.0 * cb * tau * y
            + match &datum.g0 {
                Some(_) => {
                    let h = 1e-7;
                    (datum.g0(tau3 * (y + h).powi(3)) - datum.g0(tau3 * (y - h).powi(3))) / (2.0 * h * b * tau)
                }
                None => 0.0,
            };
        (y * y * y - y + g - zeta, 3.0 * y * y - 1.0 + gy)
    };
    let solve = |seed: f64, lo: f64, hi: f64| -> Result<f64> {
        let mut lo = lo;
        let mut hi = hi;
        for _ in 0..8 {
            if let Some(r) = newton_bracketed(f, lo, hi, seed, 1e-15, 100) {
                return Ok(r);
            }
            lo -= 0.5 * (hi - lo);
            hi += 0.5 * (hi - lo);
        }
        Err(Error::NoRoot(format!("extremal label bracket failed (zeta = {zeta:e})")))
    };
    let yp = solve(seeds.0, 0.6, 1.6)?;
    let ym = solve(seeds.1, -1.6, -0.6)?;
    Ok((tau3 * ym * ym * ym, tau3 * yp * yp * yp))
}

impl BurgersInverse {
    pub fn new(t: f64, shock_pos: f64, datum: &CuspDatum) -> Result<Self> {
        let (x_minus, x_plus) = extremal_labels(t, shock_pos, datum)?;
        Ok(BurgersInverse { t, shock_pos, x_minus, x_plus })
    }

    /// Label `x` with `η_B(x, t) = θ` on the side of the shock containing θ.
    pub fn label(&self, theta: f64, datum: &CuspDatum) -> Result<f64> {
        let t = self.t;
        if t == 0.0 {
            return Ok(theta);
        }
        if theta == self.shock_pos {
            return Err(Error::AtShock);
        }
        let f = |x: f64| (x + t * datum.w0(x) - theta, 1.0 + t * datum.w0_prime(x).max(-1e300));
        let (lo, hi) = if theta < self.shock_pos {
            let mut lo = theta - t * (datum.kappa + 1.0);
            let mut k = 0;
            while burgers_flow(lo, t, datum) >= theta {
                lo -= t * datum.kappa * (1 << k) as f64;
                k += 1;
                if k > 40 {
                    return Err(Error::NoRoot("left Burgers bracket".into()));
                }
            }
            (lo, self.x_minus)
        } else {
            (self.x_plus, theta)
        };
        let seed = theta - t * datum.kappa;
        newton_bracketed(f, lo, hi, seed, 1e-15 * (1.0 + theta.abs()), 200)
            .or_else(|| bisect(|x| f(x).0, lo, hi, 1e-16, 200))
            .ok_or_else(|| Error::NoRoot(format!("Burgers inversion at theta = {theta:e}")))
    }

    pub fn solution(&self, theta: f64, datum: &CuspDatum) -> Result<f64> {
        Ok(datum.w0(self.label(theta, datum)?))
    }

    /// One-sided traces `(w₀(x₋), w₀(x₊))`.
    pub fn traces(&self, datum: &CuspDatum) -> (f64, f64) {
        (datum.w0(self.x_minus), datum.w0(self.x_plus))
    }
}

/// `w_B(θ, t) = w₀(η_B⁻¹(θ, t))` with the branch fixed by the side of the
/// prescribed shock position.
pub fn burgers_solution(theta: f64, t: f64, shock_pos: f64, datum: &CuspDatum) -> Result<f64> {
    if t == 0.0 {
        return Ok(datum.w0(theta));
    }
    BurgersInverse::new(t, shock_pos, datum)?.solution(theta, datum)
}

/// The real root of `W³ + W = -y`.
pub fn selfsimilar_profile_wbar(y: f64) -> f64 {
    let q = 0.5 * y;
    let d = (q * q + 1.0 / 27.0).sqrt();
    let mut w = (-q + d).cbrt() + (-q - d).cbrt();
    for _ in 0..3 {
        let f = w * w * w + w + y;
        w -= f / (3.0 * w * w + 1.0);
    }
    w
}

/// Derivative of the self-similar profile, `W̄' = -1/(3W̄² + 1)`.
pub fn selfsimilar_profile_wbar_prime(y: f64) -> f64 {
    let w = selfsimilar_profile_wbar(y);
    -1.0 / (3.0 * w * w + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticInverse {
    pub y: f64,
    /// Coefficients of `x^{1/3}`, `x^{2/3}`, `x`.
    pub coeffs: [f64; 3],
}

impl QuarticInverse {
    pub fn series(&self, x: f64) -> f64 {
        let s = x.cbrt();
        self.coeffs[0] * s + self.coeffs[1] * s * s + self.coeffs[2] * x
    }
}

/// Root of `-x + a₃y³ + a₄y⁴ = 0` on the branch through `y(0) = 0`, plus the
/// first three coefficients of its fractional expansion in `x^{1/3}`.
pub fn quartic_fractional_inverse(a3: f64, a4: f64, x: f64) -> Result<QuarticInverse> {
    assert!(a3 > 0.0, "a3 must be positive");
    let c1 = a3.powf(-1.0 / 3.0);
    let c2 = -a4 * a3.powf(-5.0 / 3.0) / 3.0;
    let c3 = a4 * a4 * a3.powi(-3) / 3.0;
    let coeffs = [c1, c2, c3];
    if a4 == 0.0 {
        return Ok(QuarticInverse { y: (x / a3).cbrt(), coeffs });
    }
    let s = x.cbrt();
    let mut y = c1 * s + c2 * s * s + c3 * x;
    for _ in 0..100 {
        let f = -x + a3 * y.powi(3) + a4 * y.powi(4);
        let df = 3.0 * a3 * y * y + 4.0 * a4 * y.powi(3);
        if df == 0.0 {
            break;
        }
        let dy = f / df;
        y -= dy;
        if dy.abs() <= 1e-16 * y.abs() {
            break;
        }
    }
    let other = -a3 / a4;
    if (y - other).abs() <= y.abs() || !y.is_finite() {
        return Err(Error::BranchAmbiguity(y));
    }
    Ok(QuarticInverse { y, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_extremal_roots() {
        let (zp, zm) = cubic_roots_zpm(0.0).unwrap();
        assert!((zp - 1.0).abs() < 1e-15 && (zm + 1.0).abs() < 1e-15);
        for zeta in [-0.1, -0.03, 0.05, 0.1] {
            let (zp, zm) = cubic_roots_zpm(zeta).unwrap();
            for z in [zp, zm] {
                assert!((z * z * z - z - zeta).abs() < 1e-15);
            }
            assert!(zp > 0.9 && zm < -0.9);
        }
        assert!(cubic_roots_zpm(0.2).is_err());
    }

    #[test]
    fn pure_cusp_labels_exact() {
        let d = CuspDatum::pure(4.0, 1.0);
        for &t in &[1e-5, 1e-3, 1e-2] {
            let (xm, xp) = extremal_labels(t, 4.0 * t, &d).unwrap();
            let e = t.powf(1.5);
            assert!((xp - e).abs() <= 1e-12 * e);
            assert!((xm + e).abs() <= 1e-12 * e);
        }
    }

    #[test]
    fn flow_examples() {
        let d = CuspDatum::pure(4.0, 1.0);
        assert_eq!(burgers_flow(0.3, 0.0, &d), 0.3);
        let x = 0.1;
        assert!((burgers_flow(x, 0.01, &d) - (0.1 + 0.01 * (4.0 - 0.1f64.cbrt()))).abs() < 1e-15);
    }

    #[test]
    fn wbar_examples() {
        assert_eq!(selfsimilar_profile_wbar(0.0), 0.0);
        assert!((selfsimilar_profile_wbar(-2.0) - 1.0).abs() < 1e-15);
        let w = selfsimilar_profile_wbar(10.0);
        assert!((w * w * w + w + 10.0).abs() < 1e-12);
    }

    #[test]
    fn quartic_examples() {
        let q = quartic_fractional_inverse(1.0, 0.0, 8e-3).unwrap();
        assert!((q.y - 0.2).abs() < 1e-15);
        let q = quartic_fractional_inverse(8.0, 2.0, 1e-9).unwrap();
        assert!((q.coeffs[0] - 0.5).abs() < 1e-15);
        assert!((q.coeffs[1] + 2.0 / 3.0 * 8f64.powf(-5.0 / 3.0)).abs() < 1e-15);
        assert!((q.coeffs[2] - 4.0 / 3.0 / 512.0).abs() < 1e-15);
    }
}
