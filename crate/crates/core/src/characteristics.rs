//! Characteristic families of the azimuthal system: forward `λ₃` paths from
//! the initial data, backward `λ₁`/`λ₂` paths from a terminal point,
//! shock-intersection times and the two weak-discontinuity curves.

use serde::{Deserialize, Serialize};

use crate::burgers_preshock::{BurgersInverse, CuspDatum};
use crate::error::{Error, Result};
use crate::numerics::{bisect, locate};
use crate::riemann_core::{lam1, lam2, lam3, AzimuthalPoint};

pub const EVENT_BISECTION_CAP: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Lam1,
    Lam2,
    Lam3,
}

impl Family {
    pub fn from_index(i: u8) -> Option<Family> {
        match i {
            1 => Some(Family::Lam1),
            2 => Some(Family::Lam2),
            3 => Some(Family::Lam3),
            _ => None,
        }
    }

    pub fn speed(self, p: &AzimuthalPoint) -> f64 {
        match self {
            Family::Lam1 => lam1(p.w, p.z),
            Family::Lam2 => lam2(p.w, p.z),
            Family::Lam3 => lam3(p.w, p.z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShockSide {
    Left,
    Right,
}

impl ShockSide {
    pub fn flip(self) -> Self {
        match self {
            ShockSide::Left => ShockSide::Right,
            ShockSide::Right => ShockSide::Left,
        }
    }
}

/// Read-only space-time field snapshot that characteristics are traced
/// through. Evaluation is always one-sided: the side argument selects which
/// of the two states on either side of the shock is used (extended smoothly
/// past the shock if needed), so integrands never straddle the jump.
pub trait FieldSource: Sync {
    fn t_end(&self) -> f64;
    /// Shock position and speed at time `t`.
    fn shock(&self, t: f64) -> (f64, f64);
    fn state(&self, side: ShockSide, theta: f64, t: f64) -> AzimuthalPoint;
    fn speed(&self, family: Family, side: ShockSide, theta: f64, t: f64) -> f64 {
        family.speed(&self.state(side, theta, t))
    }
    /// Increasing time nodes from 0 to `t_end` used as integration steps.
    fn time_nodes(&self) -> &[f64];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTrace {
    pub family: Family,
    /// Terminal point `(θ, t)` for backward traces, `(x, 0)` for forward ones.
    pub anchor: (f64, f64),
    /// `(position, time)` samples in integration order.
    pub samples: Vec<(f64, f64)>,
    pub stop_time: Option<f64>,
    pub sides: Vec<ShockSide>,
}

impl CharTrace {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("trace has samples")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    /// RK4 steps per interval of the field's time nodes.
    pub substeps: usize,
    /// Continue on the other side of the shock after a crossing (backward
    /// traces only); the first crossing time is still reported.
    pub continue_through: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { substeps: 1, continue_through: false }
    }
}

fn side_of(theta: f64, s: f64) -> ShockSide {
    if theta < s {
        ShockSide::Left
    } else {
        ShockSide::Right
    }
}

/// Signed indicator of having reached the shock from `side`.
fn crossed(side: ShockSide, pos: f64, s: f64) -> bool {
    match side {
        ShockSide::Left => pos >= s,
        ShockSide::Right => pos <= s,
    }
}

fn rk4<F: FieldSource + ?Sized>(f: &F, fam: Family, side: ShockSide, p: f64, t: f64, h: f64) -> f64 {
    let k1 = f.speed(fam, side, p, t);
    let k2 = f.speed(fam, side, p + 0.5 * h * k1, t + 0.5 * h);
    let k3 = f.speed(fam, side, p + 0.5 * h * k2, t + 0.5 * h);
    let k4 = f.speed(fam, side, p + h * k3, t + h);
    p + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
}

/// Integration nodes between `a` and `b` (either order), taken from the
/// field's time nodes and subdivided `substeps` times.
fn step_nodes<F: FieldSource + ?Sized>(f: &F, a: f64, b: f64, substeps: usize) -> Vec<f64> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let nodes = f.time_nodes();
    let mut base = vec![lo];
    let start = nodes.partition_point(|&t| t <= lo);
    for &t in &nodes[start..] {
        if t >= hi {
            break;
        }
        base.push(t);
    }
    base.push(hi);
    let mut out = Vec::with_capacity(base.len() * substeps);
    for w in base.windows(2) {
        for k in 0..substeps {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / substeps as f64);
        }
    }
    out.push(hi);
    if a > b {
        out.reverse();
    }
    out
}

/// Locates the crossing inside one RK4 step from `(p0, t0)` towards `t1`.
fn locate_crossing<F: FieldSource + ?Sized>(
    f: &F,
    fam: Family,
    side: ShockSide,
    p0: f64,
    t0: f64,
    t1: f64,
) -> Result<(f64, f64)> {
    let g = |tau: f64| {
        let p = rk4(f, fam, side, p0, t0, tau - t0);
        let s = f.shock(tau).0;
        match side {
            ShockSide::Left => p - s,
            ShockSide::Right => s - p,
        }
    };
    let tol = 1e-12 * t0.abs().max(t1.abs());
    let tau = bisect(g, t0, t1, tol, EVENT_BISECTION_CAP).ok_or(Error::StepSizeUnderflow(t0))?;
    Ok((rk4(f, fam, side, p0, t0, tau - t0), tau))
}

/// Forward `λ₃` characteristic from label `x` at `t = 0`, stopped at the
/// first shock crossing or at `t_end`.
pub fn trace_eta<F: FieldSource + ?Sized>(x: f64, fields: &F, t_end: f64, opts: TraceOptions) -> Result<CharTrace> {
    let side = if x <= 0.0 { ShockSide::Left } else { ShockSide::Right };
    let nodes = step_nodes(fields, 0.0, t_end, opts.substeps);
    let mut tr = CharTrace {
        family: Family::Lam3,
        anchor: (x, 0.0),
        samples: vec![(x, 0.0)],
        stop_time: None,
        sides: vec![side],
    };
    let mut p = x;
    for w in nodes.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let pn = rk4(fields, Family::Lam3, side, p, t0, t1 - t0);
        if !pn.is_finite() {
            return Err(Error::StepSizeUnderflow(t0));
        }
        if t0 > 0.0 && crossed(side, pn, fields.shock(t1).0) {
            let (pc, tc) = locate_crossing(fields, Family::Lam3, side, p, t0, t1)?;
            tr.samples.push((pc, tc));
            tr.sides.push(side);
            tr.stop_time = Some(tc);
            return Ok(tr);
        }
        p = pn;
        tr.samples.push((p, t1));
        tr.sides.push(side);
    }
    Ok(tr)
}

/// Backward characteristic of `family` from the terminal point `(θ, t)`
/// down to `t = 0`, stopping at the first shock crossing unless
/// `opts.continue_through` is set.
pub fn trace_backward<F: FieldSource + ?Sized>(
    family: Family,
    theta: f64,
    t: f64,
    fields: &F,
    opts: TraceOptions,
) -> Result<CharTrace> {
    let mut side = side_of(theta, fields.shock(t).0);
    let nodes = step_nodes(fields, t, 0.0, opts.substeps);
    let mut tr = CharTrace {
        family,
        anchor: (theta, t),
        samples: vec![(theta, t)],
        stop_time: None,
        sides: vec![side],
    };
    let mut p = theta;
    let mut k = 0;
    let mut t0 = t;
    while k + 1 < nodes.len() {
        let t1 = nodes[k + 1];
        let pn = rk4(fields, family, side, p, t0, t1 - t0);
        if !pn.is_finite() {
            return Err(Error::StepSizeUnderflow(t0));
        }
        if t1 > 0.0 && crossed(side, pn, fields.shock(t1).0) {
            let (pc, tc) = locate_crossing(fields, family, side, p, t0, t1)?;
            tr.samples.push((pc, tc));
            tr.sides.push(side);
            if tr.stop_time.is_none() {
                tr.stop_time = Some(tc);
            }
            if !opts.continue_through {
                return Ok(tr);
            }
            side = side.flip();
            p = pc;
            t0 = tc;
            // the crossing point is recorded once per side
            tr.samples.push((pc, tc));
            tr.sides.push(side);
            continue;
        }
        p = pn;
        t0 = t1;
        k += 1;
        tr.samples.push((p, t1));
        tr.sides.push(side);
    }
    Ok(tr)
}

/// The (largest) time at which the backward characteristic through `(θ, t)`
/// meets the shock, or `None` when it reaches `t = 0` without crossing.
pub fn stopping_time<F: FieldSource + ?Sized>(family: Family, theta: f64, t: f64, fields: &F) -> Result<Option<f64>> {
    Ok(trace_backward(family, theta, t, fields, TraceOptions::default())?.stop_time)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakCurves {
    pub t: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
}

impl WeakCurves {
    fn interp(&self, v: &[f64], t: f64) -> f64 {
        if t <= self.t[0] {
            return v[0];
        }
        let n = self.t.len();
        if t >= self.t[n - 1] {
            return v[n - 1];
        }
        let i = locate(&self.t, t);
        let f = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        v[i] + f * (v[i + 1] - v[i])
    }

    pub fn s1_at(&self, t: f64) -> f64 {
        self.interp(&self.s1, t)
    }

    pub fn s2_at(&self, t: f64) -> f64 {
        self.interp(&self.s2, t)
    }
}

/// Terminal angle at `t_end` of the backward characteristic of `family` that
/// reaches the pre-shock point `θ = 0` at `t = 0`, by bisection.
pub fn weak_curve_root<F: FieldSource + ?Sized>(family: Family, fields: &F) -> Result<f64> {
    weak_curve_point(family, fields.t_end(), fields, TraceOptions::default())
}

/// Angle at time `t` of the weak curve of `family`: the boundary between
/// backward characteristics that reach `t = 0` and those that meet the shock.
pub fn weak_curve_point<F: FieldSource + ?Sized>(family: Family, t: f64, fields: &F, opts: TraceOptions) -> Result<f64> {
    let (s_t, _) = fields.shock(t);
    let kappa = fields.shock(0.0).1;
    let target = |theta: f64| -> f64 {
        match trace_backward(family, theta, t, fields, opts) {
            Ok(tr) => match tr.stop_time {
                Some(tau) => tau.max(1e-300),
                None => tr.last().0,
            },
            Err(_) => f64::NAN,
        }
    };
    let lo = s_t - kappa * t;
    let hi = s_t - 1e-12 * t;
    bisect(target, lo, hi, 1e-15 * t, EVENT_BISECTION_CAP + 20)
        .ok_or_else(|| Error::RootNotBracketed(format!("{family:?} weak curve on [{lo}, {hi}]")))
}

/// The curves `s₁` (λ₁) and `s₂` (λ₂) emanating from the pre-shock,
/// sampled on the field's time nodes.
pub fn build_weak_curves<F: FieldSource + ?Sized>(fields: &F) -> Result<WeakCurves> {
    let t_end = fields.t_end();
    let mut curves = Vec::new();
    for fam in [Family::Lam1, Family::Lam2] {
        let root = weak_curve_root(fam, fields)?;
        let tr = trace_backward(fam, root, t_end, fields, TraceOptions::default())?;
        let mut pts: Vec<(f64, f64)> = tr.samples.iter().map(|&(p, t)| (t, p)).collect();
        pts.reverse();
        curves.push(pts);
    }
    let t: Vec<f64> = curves[1].iter().map(|p| p.0).collect();
    let s1: Vec<f64> = curves[0].iter().map(|p| p.1).collect();
    let s2: Vec<f64> = curves[1].iter().map(|p| p.1).collect();
    if s1.len() != s2.len() {
        return Err(Error::RootNotBracketed("weak curves sampled on different grids".into()));
    }
    let mut wc = WeakCurves { t, s1, s2 };
    // the curves start from the pre-shock point exactly
    wc.s1[0] = 0.0;
    wc.s2[0] = 0.0;
    Ok(wc)
}

/// Spatially constant state `w = κ`, `z = k = a = 0` with the straight shock
/// `s(t) = κt`; used for closed-form checks.
#[derive(Debug, Clone)]
pub struct ConstantField {
    pub kappa: f64,
    pub t_end: f64,
    nodes: Vec<f64>,
}

impl ConstantField {
    pub fn new(kappa: f64, t_end: f64, steps: usize) -> Self {
        let nodes = (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect();
        ConstantField { kappa, t_end, nodes }
    }
}

impl FieldSource for ConstantField {
    fn t_end(&self) -> f64 {
        self.t_end
    }
    fn shock(&self, t: f64) -> (f64, f64) {
        (self.kappa * t, self.kappa)
    }
    fn state(&self, _: ShockSide, _: f64, _: f64) -> AzimuthalPoint {
        AzimuthalPoint::new(self.kappa, 0.0, 0.0, 0.0)
    }
    fn time_nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Burgers solution with the prescribed straight shock `s(t) = κt`
/// (`z = k = a = 0`).
#[derive(Debug, Clone)]
pub struct BurgersField {
    pub datum: CuspDatum,
    pub t_end: f64,
    nodes: Vec<f64>,
}

impl BurgersField {
    pub fn new(datum: CuspDatum, t_end: f64, steps: usize) -> Self {
        let nodes = (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect();
        BurgersField { datum, t_end, nodes }
    }
}

impl FieldSource for BurgersField {
    fn t_end(&self) -> f64 {
        self.t_end
    }
    fn shock(&self, t: f64) -> (f64, f64) {
        (self.datum.kappa * t, self.datum.kappa)
    }
    fn state(&self, side: ShockSide, theta: f64, t: f64) -> AzimuthalPoint {
        let s = self.datum.kappa * t;
        let w = if t <= 0.0 {
            self.datum.w0(theta)
        } else {
            let inv = BurgersInverse::new(t, s, &self.datum).expect("pure-cusp labels");
            // evaluate on the requested side; past the shock use the trace
            let th = match side {
                ShockSide::Left if theta >= s => None,
                ShockSide::Right if theta <= s => None,
                _ => Some(theta),
            };
            match th {
                Some(th) => inv.solution(th, &self.datum).expect("Burgers inversion"),
                None => match side {
                    ShockSide::Left => self.datum.w0(inv.x_minus),
                    ShockSide::Right => self.datum.w0(inv.x_plus),
                },
            }
        };
        AzimuthalPoint::new(w, 0.0, 0.0, 0.0)
    }
    fn time_nodes(&self) -> &[f64] {
        &self.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_paths() {
        let f = ConstantField::new(4.0, 0.01, 50);
        let tr = trace_eta(-0.001, &f, 0.01, TraceOptions::default()).unwrap();
        assert!((tr.last().0 - (-0.001 + 0.04)).abs() < 1e-14);
        assert!(tr.stop_time.is_none());
        // φ crossing at (3θ - 2κt)/κ
        let (theta, t) = (0.035, 0.01);
        let st = stopping_time(Family::Lam2, theta, t, &f).unwrap().unwrap();
        assert!((st - (3.0 * theta - 2.0 * 4.0 * t) / 4.0).abs() < 1e-13);
        let st = stopping_time(Family::Lam1, theta, t, &f).unwrap().unwrap();
        assert!((st - (3.0 * theta - 4.0 * t) / 8.0).abs() < 1e-13);
        assert!(stopping_time(Family::Lam1, 0.01, t, &f).unwrap().is_none());
    }

    #[test]
    fn constant_field_weak_curves() {
        let f = ConstantField::new(4.0, 0.01, 40);
        let wc = build_weak_curves(&f).unwrap();
        for (i, &t) in wc.t.iter().enumerate() {
            assert!((wc.s1[i] - 4.0 * t / 3.0).abs() < 1e-13);
            assert!((wc.s2[i] - 8.0 * t / 3.0).abs() < 1e-13);
        }
    }
}
