//! Development of the shock solution past the pre-shock.
//!
//! For a prescribed shock curve the four fields are obtained as the fixed
//! point of the characteristic iteration: iterate `n+1` transports
//!
//! * `w` from the initial data along `λ₃⁽ⁿ⁾`, with source
//!   `-(8/3)a⁽ⁿ⁾w⁽ⁿ⁾` and the entropy forcing `(1/4)c⁽ⁿ⁾ d(k⁽ⁿ⁾∘η)` in
//!   integrated form,
//! * `z` along `λ₁⁽ⁿ⁾` from the shock values `z₋⁽ⁿ⁺¹⁾`, which are solved
//!   from the traces of `w⁽ⁿ⁺¹⁾`,
//! * `k` along `λ₂⁽ⁿ⁺¹⁾` from `k₋⁽ⁿ⁺¹⁾`,
//! * `a` along `λ₂⁽ⁿ⁾` from the initial data, passing through the shock,
//!
//! and `z`, `k` vanish left of the weak curves `s₁`, `s₂` of iterate `n`.
//! Fields live on two geometric grids in `y = θ - s(t)` and each
//! characteristic quadrature is a semi-Lagrangian step between consecutive
//! time levels (Heun feet, trapezoid sources, monotone cubic interpolation).

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::burgers_preshock::{BurgersInverse, CuspDatum};
use crate::characteristics::{build_weak_curves, FieldSource, ShockSide, WeakCurves};
use crate::error::{Error, Result};
use crate::field_solver::grid::{
    shock_side_traces, GridSpec, LevelFields, ShockSideTraces, SideFields, SideInterp, A, K, W, Z,
};
use crate::jump_system::{solve_jump, JumpSolution, ShockTraces};
use crate::numerics::{locate, Pchip};
use crate::riemann_core::{lam1, lam2, lam3, lax_check, AzimuthalPoint};
use crate::shock_evolution::ShockCurve;

pub const INNER_CAP: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DevelopParams {
    pub grid: GridSpec,
    /// Relative time step of the geometric time grid.
    pub dt_rel: f64,
    pub t_end: f64,
    /// First nonzero time level as a fraction of `t_end`.
    pub t_min_frac: f64,
    pub tol_inner: f64,
    pub newton_tol: f64,
    /// Zero `z` and `k` outside their support regions.
    pub hard_zero: bool,
}

impl Default for DevelopParams {
    fn default() -> Self {
        DevelopParams {
            grid: GridSpec::default(),
            dt_rel: 0.03,
            t_end: 1e-2,
            t_min_frac: 1e-4,
            tol_inner: 1e-9,
            newton_tol: 1e-12,
            hard_zero: true,
        }
    }
}

/// One time slice of the solution with its traces at the shock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannState {
    pub t: f64,
    pub s: f64,
    pub sdot: f64,
    pub y_grid_left: Vec<f64>,
    pub y_grid_right: Vec<f64>,
    pub values: LevelFields,
    pub traces: ShockSideTraces,
}

#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub t: f64,
    pub s: f64,
    pub sdot: f64,
    pub fields: LevelFields,
    pub left: SideInterp,
    pub right: SideInterp,
    pub traces: ShockSideTraces,
    /// Jump-system solution for the traces of `w` at this level.
    pub jump: JumpSolution,
}

/// Complete space-time solution for one iterate.
#[derive(Debug, Clone)]
pub struct DevelopmentHistory {
    pub y_left: Arc<Vec<f64>>,
    pub y_right: Arc<Vec<f64>>,
    pub times: Vec<f64>,
    pub levels: Vec<LevelRecord>,
    pub curve: ShockCurve,
    /// `z₋/t^{3/2}` and `k₋/t^{3/2}` against `ln t` (levels `j ≥ 1`).
    z_ratio: Pchip,
    k_ratio: Pchip,
}

fn zero_jump(w: f64) -> JumpSolution {
    let p = AzimuthalPoint::new(w, 0.0, 0.0, 0.0);
    JumpSolution {
        z_minus: 0.0,
        k_minus: 0.0,
        e_minus: 0.0,
        sdot: w,
        residual_e1: 0.0,
        residual_e2: 0.0,
        iterations: 0,
        admissible: lax_check(&p, &p, w),
    }
}

impl DevelopmentHistory {
    pub fn build(
        y_left: Arc<Vec<f64>>,
        y_right: Arc<Vec<f64>>,
        curve: &ShockCurve,
        fields: Vec<LevelFields>,
        newton_tol: f64,
    ) -> Result<Self> {
        let times = curve.t_grid.clone();
        let levels = fields
            .into_par_iter()
            .enumerate()
            .map(|(j, f)| -> Result<LevelRecord> {
                let traces = shock_side_traces(&y_left, &y_right, &f)?;
                let jump = if j == 0 {
                    zero_jump(traces.w_minus)
                } else {
                    solve_jump(ShockTraces::new(traces.w_minus, traces.w_plus), newton_tol)?
                };
                Ok(LevelRecord {
                    t: times[j],
                    s: curve.s_values[j],
                    sdot: curve.sdot_values[j],
                    left: SideInterp::new(y_left.clone(), &f.left),
                    right: SideInterp::new(y_right.clone(), &f.right),
                    fields: f,
                    traces,
                    jump,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let lt: Vec<f64> = times[1..].iter().map(|t| t.ln()).collect();
        let ratio = |get: fn(&JumpSolution) -> f64| -> Vec<f64> {
            levels[1..].iter().map(|l| get(&l.jump) / l.t.powf(1.5)).collect()
        };
        let z_ratio = Pchip::new(&lt, &ratio(|j| j.z_minus));
        let k_ratio = Pchip::new(&lt, &ratio(|j| j.k_minus));
        Ok(DevelopmentHistory { y_left, y_right, times, levels, curve: curve.clone(), z_ratio, k_ratio })
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Level index bracketing `t` and the linear weight of the upper level.
    pub fn bracket(&self, t: f64) -> (usize, f64) {
        let j = locate(&self.times, t);
        let (t0, t1) = (self.times[j], self.times[j + 1]);
        (j, ((t - t0) / (t1 - t0)).clamp(0.0, 1.0))
    }

    fn side_interp(&self, j: usize, side: ShockSide) -> &SideInterp {
        match side {
            ShockSide::Left => &self.levels[j].left,
            ShockSide::Right => &self.levels[j].right,
        }
    }

    /// All four fields at `(θ, t)` on the given side.
    pub fn eval(&self, side: ShockSide, theta: f64, t: f64) -> [f64; 4] {
        let y = theta - self.curve.eval(t).0;
        let (j, f) = self.bracket(t);
        let a = self.side_interp(j, side).eval_all(y);
        let b = self.side_interp(j + 1, side).eval_all(y);
        [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]), a[2] + f * (b[2] - a[2]), a[3] + f * (b[3] - a[3])]
    }

    /// Angular derivative of field `idx` at `(θ, t)` on the given side.
    pub fn deriv(&self, side: ShockSide, idx: usize, theta: f64, t: f64) -> f64 {
        let y = theta - self.curve.eval(t).0;
        let (j, f) = self.bracket(t);
        let a = self.side_interp(j, side).deriv(y, idx);
        let b = self.side_interp(j + 1, side).deriv(y, idx);
        a + f * (b - a)
    }

    /// Shock value `z₋(t)`: monotone cubic in `ln t` of `z₋/t^{3/2}`, held
    /// constant outside the sampled times.
    pub fn z_minus_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t.powf(1.5) * self.z_ratio.eval(t.ln())
    }

    /// Shock value `k₋(t)`, interpolated like [`Self::z_minus_at`].
    pub fn k_minus_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t.powf(1.5) * self.k_ratio.eval(t.ln())
    }

    pub fn state_at_level(&self, j: usize) -> RiemannState {
        let l = &self.levels[j];
        RiemannState {
            t: l.t,
            s: l.s,
            sdot: l.sdot,
            y_grid_left: self.y_left.to_vec(),
            y_grid_right: self.y_right.to_vec(),
            values: l.fields.clone(),
            traces: l.traces,
        }
    }

    /// Level index closest to `t`.
    pub fn nearest_level(&self, t: f64) -> usize {
        let mut best = 0;
        for (j, &tj) in self.times.iter().enumerate() {
            if (tj - t).abs() < (self.times[best] - t).abs() {
                best = j;
            }
        }
        best
    }
}

impl FieldSource for DevelopmentHistory {
    fn t_end(&self) -> f64 {
        DevelopmentHistory::t_end(self)
    }

    fn shock(&self, t: f64) -> (f64, f64) {
        self.curve.eval(t)
    }

    fn state(&self, side: ShockSide, theta: f64, t: f64) -> AzimuthalPoint {
        let v = self.eval(side, theta, t);
        AzimuthalPoint::new(v[W], v[Z], v[K], v[A])
    }

    fn time_nodes(&self) -> &[f64] {
        &self.times
    }
}

/// First iterate: the Burgers solution with the prescribed shock, `z = k = 0`
/// and `a = a₀`.
pub fn initial_iterate(datum: &CuspDatum, curve: &ShockCurve, grid: &GridSpec) -> Result<Vec<LevelFields>> {
    let yl = grid.y_left();
    let yr = grid.y_right();
    curve
        .t_grid
        .par_iter()
        .enumerate()
        .map(|(j, &t)| -> Result<LevelFields> {
            let s = curve.s_values[j];
            let mut left = SideFields::zeros(yl.len());
            let mut right = SideFields::zeros(yr.len());
            if j == 0 {
                for (i, &y) in yl.iter().enumerate() {
                    left.w[i] = datum.w0(y);
                    left.a[i] = datum.a0(y);
                }
                for (i, &y) in yr.iter().enumerate() {
                    right.w[i] = datum.w0(y);
                    right.a[i] = datum.a0(y);
                }
            } else {
                let inv = BurgersInverse::new(t, s, datum)?;
                for (i, &y) in yl.iter().enumerate() {
                    left.w[i] = inv.solution(y + s, datum)?;
                    left.a[i] = datum.a0(y + s);
                }
                for (i, &y) in yr.iter().enumerate() {
                    right.w[i] = inv.solution(y + s, datum)?;
                    right.a[i] = datum.a0(y + s);
                }
            }
            Ok(LevelFields { left, right })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DevelopOutcome {
    pub history: DevelopmentHistory,
    /// Sup-norm increment of each inner sweep.
    pub increments: Vec<f64>,
    /// Weak curves of the final iterate.
    pub weak: Option<WeakCurves>,
}

#[inline]
fn a_source(a: f64, w: f64, z: f64) -> f64 {
    -4.0 / 3.0 * a * a + (w * w + z * z) / 6.0 + w * z
}

/// Linear interpolation of the traces between levels `j` and `j+1`.
fn traces_at(h: &DevelopmentHistory, j: usize, f: f64) -> ShockSideTraces {
    let a = &h.levels[j].traces;
    let b = &h.levels[j + 1].traces;
    let l = |x: f64, y: f64| x + f * (y - x);
    ShockSideTraces {
        w_minus: l(a.w_minus, b.w_minus),
        w_plus: l(a.w_plus, b.w_plus),
        z_minus: l(a.z_minus, b.z_minus),
        z_plus: l(a.z_plus, b.z_plus),
        k_minus: l(a.k_minus, b.k_minus),
        k_plus: l(a.k_plus, b.k_plus),
        a_minus: l(a.a_minus, b.a_minus),
        a_plus: l(a.a_plus, b.a_plus),
        da_minus: l(a.da_minus, b.da_minus),
        da_plus: l(a.da_plus, b.da_plus),
    }
}

fn scaled_interp(v0: f64, t0: f64, v1: f64, t1: f64, tau: f64) -> f64 {
    let r1 = v1 / t1.powf(1.5);
    let r0 = if t0 > 0.0 { v0 / t0.powf(1.5) } else { r1 };
    tau.powf(1.5) * (r0 + (tau - t0) / (t1 - t0) * (r1 - r0))
}

/// Previous level of the new iterate: either the exact initial data or the
/// interpolant of the level just computed.
enum Prev<'a> {
    Initial(&'a CuspDatum),
    Level { left: &'a SideInterp, right: &'a SideInterp, s: f64 },
}

impl Prev<'_> {
    fn eval(&self, side: ShockSide, y: f64) -> [f64; 4] {
        match self {
            Prev::Initial(d) => [d.w0(y), 0.0, 0.0, d.a0(y)],
            Prev::Level { left, right, .. } => match side {
                ShockSide::Left => left.eval_all(y),
                ShockSide::Right => right.eval_all(y),
            },
        }
    }

    fn eval_one(&self, side: ShockSide, y: f64, idx: usize) -> f64 {
        match self {
            Prev::Initial(_) => self.eval(side, y)[idx],
            Prev::Level { left, right, .. } => match side {
                ShockSide::Left => left.eval(y, idx),
                ShockSide::Right => right.eval(y, idx),
            },
        }
    }
}

/// One inner sweep: computes iterate `n+1` level by level from iterate `n`.
fn sweep(
    hist: &DevelopmentHistory,
    datum: &CuspDatum,
    weak: Option<&WeakCurves>,
    params: &DevelopParams,
) -> Result<Vec<LevelFields>> {
    let yl = hist.y_left.clone();
    let yr = hist.y_right.clone();
    let nl = yl.len();
    let nt = hist.times.len();
    let mut out: Vec<LevelFields> = Vec::with_capacity(nt);
    let l0 = &hist.levels[0].fields;
    let mut first = LevelFields { left: SideFields::zeros(nl), right: SideFields::zeros(yr.len()) };
    for (i, &y) in yl.iter().enumerate() {
        first.left.w[i] = datum.w0(y);
        first.left.a[i] = datum.a0(y);
    }
    for (i, &y) in yr.iter().enumerate() {
        first.right.w[i] = datum.w0(y);
        first.right.a[i] = datum.a0(y);
    }
    debug_assert_eq!(l0.left.len(), nl);
    out.push(first);
    let mut prev_jump = zero_jump(datum.kappa);
    let mut prev_interp: Option<(SideInterp, SideInterp)> = None;

    for j in 0..nt - 1 {
        let (t0, t1) = (hist.times[j], hist.times[j + 1]);
        let dt = t1 - t0;
        let n0 = &hist.levels[j];
        let n1 = &hist.levels[j + 1];
        let (sd0, sd1) = (n0.sdot, n1.sdot);
        let prev = match &prev_interp {
            None => Prev::Initial(datum),
            Some((l, r)) => Prev::Level { left: l, right: r, s: n0.s },
        };
        let _ = match &prev {
            Prev::Level { s, .. } => *s,
            Prev::Initial(_) => 0.0,
        };
        let nodes1 = |side: ShockSide| match side {
            ShockSide::Left => &n1.fields.left,
            ShockSide::Right => &n1.fields.right,
        };
        let interp0 = |side: ShockSide| match side {
            ShockSide::Left => &n0.left,
            ShockSide::Right => &n0.right,
        };

        // w along λ₃ of iterate n
        let w_update = |side: ShockSide, i: usize, y: f64| -> f64 {
            let e = nodes1(side);
            let (we, ze, ke, ae) = (e.w[i], e.z[i], e.k[i], e.a[i]);
            let k1 = lam3(we, ze) - sd1;
            let ys = y - dt * k1;
            let (w2, z2) = interp0(side).eval_wz(ys);
            let k2 = lam3(w2, z2) - sd0;
            let yf = y - 0.5 * dt * (k1 + k2);
            let f = interp0(side).eval_all(yf);
            let src = -8.0 / 3.0 * 0.5 * dt * (ae * we + f[A] * f[W]);
            let cbar = 0.25 * (we - ze + f[W] - f[Z]);
            prev.eval_one(side, yf, W) + src + 0.25 * cbar * (ke - f[K])
        };
        let wl: Vec<f64> = (0..nl).into_par_iter().map(|i| w_update(ShockSide::Left, i, yl[i])).collect();
        let wr: Vec<f64> = (0..yr.len()).into_par_iter().map(|i| w_update(ShockSide::Right, i, yr[i])).collect();

        // shock data of iterate n+1 at t1
        let mut tmp = LevelFields { left: SideFields::zeros(nl), right: SideFields::zeros(yr.len()) };
        tmp.left.w.clone_from(&wl);
        tmp.right.w.clone_from(&wr);
        let tr = shock_side_traces(&yl, &yr, &tmp)?;
        let jump = solve_jump(ShockTraces::new(tr.w_minus, tr.w_plus), params.newton_tol)?;
        let s1_here = weak.map(|c| c.s1_at(t1));
        let s2_here = weak.map(|c| c.s2_at(t1));

        // z along λ₁ of iterate n, with Cauchy data on the shock
        let z_update = |i: usize, y: f64| -> f64 {
            if params.hard_zero {
                if let Some(s1) = s1_here {
                    if y + n1.s < s1 {
                        return 0.0;
                    }
                }
            }
            let e = &n1.fields.left;
            let (we, ze, ke, ae) = (e.w[i], e.z[i], e.k[i], e.a[i]);
            let k1 = lam1(we, ze) - sd1;
            let ys = y - dt * k1;
            let (w2, z2) = n0.left.eval_wz(ys);
            let k2 = lam1(w2, z2) - sd0;
            let v = 0.5 * (k1 + k2);
            let yf = y - dt * v;
            if yf >= 0.0 {
                // the path leaves the shock at τ
                let back = (-y / -v).clamp(0.0, dt);
                let tau = t1 - back;
                let frac = (tau - t0) / dt;
                let trc = traces_at(hist, j, frac);
                let zc = scaled_interp(prev_jump.z_minus, t0, jump.z_minus, t1, tau);
                let kc = scaled_interp(n0.jump.k_minus, t0, n1.jump.k_minus, t1, tau);
                let src = -8.0 / 3.0 * 0.5 * back * (ae * ze + trc.a_minus * trc.z_minus);
                let cbar = 0.25 * (we - ze + trc.w_minus - trc.z_minus);
                zc + src - 0.25 * cbar * (ke - kc)
            } else {
                let f = n0.left.eval_all(yf);
                let src = -8.0 / 3.0 * 0.5 * dt * (ae * ze + f[A] * f[Z]);
                let cbar = 0.25 * (we - ze + f[W] - f[Z]);
                prev.eval_one(ShockSide::Left, yf, Z) + src - 0.25 * cbar * (ke - f[K])
            }
        };
        let zl: Vec<f64> = (0..nl).into_par_iter().map(|i| z_update(i, yl[i])).collect();

        // k along λ₂ of iterate n+1
        let k_update = |i: usize, y: f64| -> f64 {
            if params.hard_zero {
                if let Some(s2) = s2_here {
                    if y + n1.s < s2 {
                        return 0.0;
                    }
                }
            }
            let k1 = lam2(wl[i], zl[i]) - sd1;
            let ys = y - dt * k1;
            let p = prev.eval(ShockSide::Left, ys);
            let k2 = lam2(p[W], p[Z]) - sd0;
            let v = 0.5 * (k1 + k2);
            let yf = y - dt * v;
            if yf >= 0.0 {
                let tau = t1 - (-y / -v).clamp(0.0, dt);
                scaled_interp(prev_jump.k_minus, t0, jump.k_minus, t1, tau)
            } else {
                prev.eval_one(ShockSide::Left, yf, K)
            }
        };
        let kl: Vec<f64> = (0..nl).into_par_iter().map(|i| k_update(i, yl[i])).collect();

        // a along λ₂ of iterate n, continuing through the shock
        let a_update = |side: ShockSide, i: usize, y: f64| -> f64 {
            let e = nodes1(side);
            let (we, ze, ae) = (e.w[i], e.z[i], e.a[i]);
            let k1 = lam2(we, ze) - sd1;
            let ys = y - dt * k1;
            let (w2, z2) = interp0(side).eval_wz(ys);
            let k2 = lam2(w2, z2) - sd0;
            let v = 0.5 * (k1 + k2);
            let yf = y - dt * v;
            if side == ShockSide::Left && yf >= 0.0 {
                let back = (-y / -v).clamp(0.0, dt);
                let tau = t1 - back;
                let frac = (tau - t0) / dt;
                let trc = traces_at(hist, j, frac);
                let sd_tau = sd0 + frac * (sd1 - sd0);
                let src_l = 0.5 * back * (a_source(ae, we, ze) + a_source(trc.a_minus, trc.w_minus, trc.z_minus));
                // right-side continuation from (0⁺, τ) down to t0
                let rest = tau - t0;
                let q1 = lam2(trc.w_plus, trc.z_plus) - sd_tau;
                let yq = -rest * q1;
                let (w3, z3) = n0.right.eval_wz(yq);
                let q2 = lam2(w3, z3) - sd0;
                let yfr = -0.5 * rest * (q1 + q2);
                let f = n0.right.eval_all(yfr);
                let src_r = 0.5 * rest * (a_source(trc.a_plus, trc.w_plus, trc.z_plus) + a_source(f[A], f[W], f[Z]));
                prev.eval_one(ShockSide::Right, yfr, A) + src_r + src_l
            } else {
                let f = interp0(side).eval_all(yf);
                let src = 0.5 * dt * (a_source(ae, we, ze) + a_source(f[A], f[W], f[Z]));
                prev.eval_one(side, yf, A) + src
            }
        };
        let al: Vec<f64> = (0..nl).into_par_iter().map(|i| a_update(ShockSide::Left, i, yl[i])).collect();
        let ar: Vec<f64> = (0..yr.len()).into_par_iter().map(|i| a_update(ShockSide::Right, i, yr[i])).collect();

        let level = LevelFields {
            left: SideFields { w: wl, z: zl, k: kl, a: al },
            right: SideFields { w: wr, z: vec![0.0; yr.len()], k: vec![0.0; yr.len()], a: ar },
        };
        let li = SideInterp::new(yl.clone(), &level.left);
        let ri = SideInterp::new(yr.clone(), &level.right);
        prev_interp = Some((li, ri));
        prev_jump = jump;
        out.push(level);
    }
    Ok(out)
}

/// Inner fixed-point iteration for a prescribed shock curve. `warm` replaces
/// the Burgers first iterate when given (used across outer iterations).
pub fn develop_fields(
    datum: &CuspDatum,
    curve: &ShockCurve,
    params: &DevelopParams,
    warm: Option<Vec<LevelFields>>,
) -> Result<DevelopOutcome> {
    let yl = Arc::new(params.grid.y_left());
    let yr = Arc::new(params.grid.y_right());
    let start = match warm {
        Some(w) if w.len() == curve.t_grid.len() => w,
        _ => initial_iterate(datum, curve, &params.grid)?,
    };
    let mut hist = DevelopmentHistory::build(yl.clone(), yr.clone(), curve, start, params.newton_tol)?;
    let mut increments = Vec::new();
    for _ in 0..INNER_CAP {
        let weak = if params.hard_zero { build_weak_curves(&hist).ok() } else { None };
        let next = sweep(&hist, datum, weak.as_ref(), params)?;
        let inc = next
            .iter()
            .zip(hist.levels.iter())
            .map(|(a, b)| a.max_diff(&b.fields))
            .fold(0.0, f64::max);
        increments.push(inc);
        hist = DevelopmentHistory::build(yl.clone(), yr.clone(), curve, next, params.newton_tol)?;
        if inc <= params.tol_inner {
            let weak = build_weak_curves(&hist).ok();
            return Ok(DevelopOutcome { history: hist, increments, weak });
        }
    }
    Err(Error::InnerIterationStall(format!(
        "increment {:e} after {INNER_CAP} sweeps",
        increments.last().copied().unwrap_or(f64::NAN)
    )))
}
