//! Outer fixed point for the shock curve, `s⁽ⁱ⁺¹⁾(t) = ∫₀ᵗ F_{s⁽ⁱ⁾}`, and
//! the regular-curve corridor checks.

use serde::{Deserialize, Serialize};

use crate::burgers_preshock::CuspDatum;
use crate::characteristics::WeakCurves;
use crate::error::{Error, Result};
use crate::field_solver::{develop_fields, DevelopParams, DevelopmentHistory, LevelFields};
use crate::numerics::locate;

pub const OUTER_CAP: usize = 30;

/// Sampled shock curve on a time grid with `t_grid[0] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockCurve {
    pub t_grid: Vec<f64>,
    pub s_values: Vec<f64>,
    pub sdot_values: Vec<f64>,
    pub iterate_index: usize,
}

impl ShockCurve {
    /// The straight curve `s(t) = κt`.
    pub fn straight(kappa: f64, t_grid: Vec<f64>) -> Self {
        let s_values = t_grid.iter().map(|t| kappa * t).collect();
        let sdot_values = vec![kappa; t_grid.len()];
        ShockCurve { t_grid, s_values, sdot_values, iterate_index: 0 }
    }

    /// Curve obtained by integrating `sdot` with the trapezoid rule.
    pub fn from_speed(t_grid: Vec<f64>, sdot_values: Vec<f64>, iterate_index: usize) -> Self {
        let mut s_values = vec![0.0; t_grid.len()];
        for j in 1..t_grid.len() {
            s_values[j] = s_values[j - 1] + 0.5 * (t_grid[j] - t_grid[j - 1]) * (sdot_values[j] + sdot_values[j - 1]);
        }
        ShockCurve { t_grid, s_values, sdot_values, iterate_index }
    }

    /// `(s, ṡ)` at `t` by cubic Hermite interpolation in time.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.t_grid.len();
        if t <= self.t_grid[0] {
            return (self.s_values[0] + (t - self.t_grid[0]) * self.sdot_values[0], self.sdot_values[0]);
        }
        if t >= self.t_grid[n - 1] {
            return (self.s_values[n - 1] + (t - self.t_grid[n - 1]) * self.sdot_values[n - 1], self.sdot_values[n - 1]);
        }
        let i = locate(&self.t_grid, t);
        let (t0, t1) = (self.t_grid[i], self.t_grid[i + 1]);
        let h = t1 - t0;
        let u = (t - t0) / h;
        let (s0, s1) = (self.s_values[i], self.s_values[i + 1]);
        let (d0, d1) = (self.sdot_values[i], self.sdot_values[i + 1]);
        let u2 = u * u;
        let u3 = u2 * u;
        let s = (2.0 * u3 - 3.0 * u2 + 1.0) * s0
            + (u3 - 2.0 * u2 + u) * h * d0
            + (-2.0 * u3 + 3.0 * u2) * s1
            + (u3 - u2) * h * d1;
        (s, d0 + u * (d1 - d0))
    }

    pub fn t_end(&self) -> f64 {
        *self.t_grid.last().unwrap()
    }
}

/// Time grid `0, t_min, t_min(1+dt), ...` ending exactly at `t_end`.
pub fn time_grid(t_end: f64, dt_rel: f64, t_min_frac: f64) -> Vec<f64> {
    let mut ts = vec![0.0];
    let mut t = t_min_frac * t_end;
    while t < t_end * (1.0 - 0.3 * dt_rel) {
        ts.push(t);
        t *= 1.0 + dt_rel;
    }
    ts.push(t_end);
    ts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub speed_ok: bool,
    pub corridor_ok: bool,
    pub accel_ok: bool,
    pub max_speed_excess: f64,
    pub max_corridor_excess: f64,
    pub max_accel: f64,
    pub violations: Vec<String>,
}

impl RegularityReport {
    pub fn ok(&self) -> bool {
        self.speed_ok && self.corridor_ok && self.accel_ok
    }
}

/// Evaluates `|ṡ - κ| ≤ m̄⁴t`, `|s - κt| ≤ m̄⁴t²/2` (boundary counted as a
/// violation) and `|s̈| ≤ 6m̄⁴` on the grid.
pub fn regular_curve_check(curve: &ShockCurve, kappa: f64, mbar: f64) -> RegularityReport {
    let m4 = mbar.powi(4);
    let mut r = RegularityReport {
        speed_ok: true,
        corridor_ok: true,
        accel_ok: true,
        max_speed_excess: f64::NEG_INFINITY,
        max_corridor_excess: f64::NEG_INFINITY,
        max_accel: 0.0,
        violations: Vec::new(),
    };
    let ts = &curve.t_grid;
    for (j, &t) in ts.iter().enumerate() {
        let ex = (curve.sdot_values[j] - kappa).abs() - m4 * t;
        r.max_speed_excess = r.max_speed_excess.max(ex);
        if ex > 1e-14 * kappa {
            r.speed_ok = false;
            r.violations.push(format!("|sdot - kappa| exceeds mbar^4 t at t = {t:e}"));
        }
        let cex = (curve.s_values[j] - kappa * t).abs() - 0.5 * m4 * t * t;
        r.max_corridor_excess = r.max_corridor_excess.max(cex);
        if t > 0.0 && cex >= -1e-14 * (kappa * t) {
            r.corridor_ok = false;
            r.violations.push(format!("s outside the open corridor at t = {t:e}"));
        }
    }
    for j in 1..ts.len().saturating_sub(1) {
        let (h0, h1) = (ts[j] - ts[j - 1], ts[j + 1] - ts[j]);
        let acc = 2.0
            * ((curve.s_values[j + 1] - curve.s_values[j]) / h1 - (curve.s_values[j] - curve.s_values[j - 1]) / h0)
            / (h0 + h1);
        r.max_accel = r.max_accel.max(acc.abs());
        if acc.abs() > 6.0 * m4 {
            r.accel_ok = false;
            r.violations.push(format!("|s''| exceeds 6 mbar^4 at t = {:e}", ts[j]));
        }
    }
    r
}

/// Limit of the shock speed as `t → 0⁺`: the background speed `κ`.
pub fn shock_speed_limit_at_zero(datum: &CuspDatum) -> f64 {
    datum.kappa
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub curve: ShockCurve,
    pub history: DevelopmentHistory,
    pub weak: Option<WeakCurves>,
    /// `sup_t(|Δs| + |Δṡ|)` per outer iterate.
    pub outer_increments: Vec<f64>,
    /// `sup_t |Δṡ|` per outer iterate.
    pub sdot_increments: Vec<f64>,
    /// Inner increment sequences, one per outer iterate.
    pub inner_increments: Vec<Vec<f64>>,
    /// `sup_t |ṡ - F_s|` for the returned curve and fields.
    pub fixed_point_residual: f64,
}

impl EvolveOutcome {
    pub fn inner_max(&self) -> usize {
        self.inner_increments.iter().map(|v| v.len()).max().unwrap_or(0)
    }
}

/// Alternates the inner field iteration and the integral update of the
/// shock curve, starting from `s⁽⁰⁾ = κt`.
pub fn evolve_shock(datum: &CuspDatum, params: &DevelopParams, tol_outer: f64) -> Result<EvolveOutcome> {
    let t_grid = time_grid(params.t_end, params.dt_rel, params.t_min_frac);
    let mut curve = ShockCurve::straight(datum.kappa, t_grid.clone());
    let mut warm: Option<Vec<LevelFields>> = None;
    let mut outer_increments = Vec::new();
    let mut sdot_increments = Vec::new();
    let mut inner_increments = Vec::new();
    for i in 0..OUTER_CAP {
        let report = regular_curve_check(&curve, datum.kappa, datum.mbar);
        if !report.ok() {
            return Err(Error::RegularityViolated(report.violations.join("; ")));
        }
        let out = develop_fields(datum, &curve, params, warm.take())?;
        inner_increments.push(out.increments.clone());
        let mut fs: Vec<f64> = out.history.levels.iter().map(|l| l.jump.sdot).collect();
        fs[0] = shock_speed_limit_at_zero(datum);
        let next = ShockCurve::from_speed(t_grid.clone(), fs, i + 1);
        let mut inc: f64 = 0.0;
        let mut dinc: f64 = 0.0;
        for j in 0..t_grid.len() {
            let ds = (next.s_values[j] - curve.s_values[j]).abs();
            let dd = (next.sdot_values[j] - curve.sdot_values[j]).abs();
            inc = inc.max(ds + dd);
            dinc = dinc.max(dd);
        }
        outer_increments.push(inc);
        sdot_increments.push(dinc);
        if inc <= tol_outer {
            // the fields belong to `curve`; `next` differs by at most tol_outer
            return Ok(EvolveOutcome {
                curve,
                history: out.history,
                weak: out.weak,
                outer_increments,
                sdot_increments,
                inner_increments,
                fixed_point_residual: dinc,
            });
        }
        warm = Some(out.history.levels.iter().map(|l| l.fields.clone()).collect());
        curve = next;
    }
    Err(Error::OuterIterationStall(format!(
        "no convergence in {OUTER_CAP} outer iterations (last increment {:e})",
        outer_increments.last().copied().unwrap_or(f64::NAN)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_curve_is_regular() {
        let c = ShockCurve::straight(4.0, time_grid(1e-2, 0.05, 1e-4));
        assert!(regular_curve_check(&c, 4.0, 10.0).ok());
        let (s, d) = c.eval(3.3e-3);
        assert!((s - 4.0 * 3.3e-3).abs() < 1e-15 && d == 4.0);
    }

    #[test]
    fn corridor_boundary_flagged() {
        let ts = time_grid(1e-2, 0.05, 1e-4);
        let m4 = 10f64.powi(4);
        let s: Vec<f64> = ts.iter().map(|t| 4.0 * t + m4 * t * t).collect();
        let sd: Vec<f64> = ts.iter().map(|t| 4.0 + 2.0 * m4 * t).collect();
        let c = ShockCurve { t_grid: ts, s_values: s, sdot_values: sd, iterate_index: 0 };
        let r = regular_curve_check(&c, 4.0, 10.0);
        assert!(!r.corridor_ok);
    }

    #[test]
    fn speed_limit() {
        assert_eq!(shock_speed_limit_at_zero(&CuspDatum::pure(4.0, 1.0)), 4.0);
    }
}
