//! Smooth formation of the pre-shock for the reduced `(w, a)` system
//! (`z = k = 0`) in Lagrangian variables.
//!
//! Two label families are advanced together: `η` moves with speed `w` and
//! carries `w∘η`, `φ` moves with speed `2w/3` and carries `a∘φ`. Each family
//! reads the other's field by monotone interpolation. The blowup time is the
//! first zero of `min_x ∂ₓη`, located by bisection on the final step size.

use serde::{Deserialize, Serialize};

use crate::burgers_preshock::{selfsimilar_profile_wbar, selfsimilar_profile_wbar_prime};
use crate::error::{Error, Result};
use crate::numerics::{bisect, Pchip};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormationMode {
    /// `a ≡ 0`: pure Burgers transport of `w`.
    Burgers,
    /// Coupled `(w, a)` system.
    Full,
}

/// Formation data `w₀(x) = κ₀ + ε^{1/2} W̄(ε^{-3/2} x)` with `a₀` constant;
/// `min w₀' = -1/ε` at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormationParams {
    pub mode: FormationMode,
    pub kappa0: f64,
    pub eps: f64,
    pub a0: f64,
    pub half_width: f64,
    pub dx: f64,
    /// Time step as a fraction of `ε`.
    pub dt_frac: f64,
    /// `min ∂ₓη` at which stepping stops and refinement begins.
    pub threshold: f64,
}

impl Default for FormationParams {
    fn default() -> Self {
        FormationParams {
            mode: FormationMode::Full,
            kappa0: 4.0,
            eps: 0.01,
            a0: 0.005,
            half_width: 0.05,
            dx: 2e-5,
            dt_frac: 2e-3,
            threshold: 1e-3,
        }
    }
}

impl FormationParams {
    pub fn w0(&self, x: f64) -> f64 {
        self.kappa0 + self.eps.sqrt() * selfsimilar_profile_wbar(x / self.eps.powf(1.5))
    }

    pub fn w0_prime(&self, x: f64) -> f64 {
        selfsimilar_profile_wbar_prime(x / self.eps.powf(1.5)) / self.eps
    }

    pub fn a0(&self, _x: f64) -> f64 {
        match self.mode {
            FormationMode::Burgers => 0.0,
            FormationMode::Full => self.a0,
        }
    }

    pub fn labels(&self) -> Vec<f64> {
        let n = (self.half_width / self.dx).round() as i64;
        (-n..=n).map(|i| i as f64 * self.dx).collect()
    }
}

/// Both label families at one time, with the running integral `∫ a∘η dt`
/// used by the integrating-factor cross-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelState {
    pub t: f64,
    pub x: Vec<f64>,
    pub eta: Vec<f64>,
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
    pub a: Vec<f64>,
    pub a_integral: Vec<f64>,
}

impl LabelState {
    pub fn initial(p: &FormationParams) -> Self {
        let x = p.labels();
        let w = x.iter().map(|&x| p.w0(x)).collect();
        let a = x.iter().map(|&x| p.a0(x)).collect();
        LabelState {
            t: 0.0,
            eta: x.clone(),
            phi: x.clone(),
            w,
            a,
            a_integral: vec![0.0; x.len()],
            x,
        }
    }

    /// `∂ₓη` by sixth-order central differences (second order at the ends).
    pub fn eta_x(&self) -> Vec<f64> {
        let n = self.x.len();
        let h = self.x[1] - self.x[0];
        let e = &self.eta;
        (0..n)
            .map(|i| {
                if i >= 3 && i + 3 < n {
                    (e[i + 3] - 9.0 * e[i + 2] + 45.0 * e[i + 1] - 45.0 * e[i - 1] + 9.0 * e[i - 2] - e[i - 3])
                        / (60.0 * h)
                } else if i == 0 {
                    (-3.0 * e[0] + 4.0 * e[1] - e[2]) / (2.0 * h)
                } else if i + 1 == n {
                    (3.0 * e[n - 1] - 4.0 * e[n - 2] + e[n - 3]) / (2.0 * h)
                } else {
                    (e[i + 1] - e[i - 1]) / (2.0 * h)
                }
            })
            .collect()
    }

    /// Minimum of `∂ₓη` refined by a parabola through the smallest sample,
    /// with the corresponding label.
    pub fn min_eta_x(&self) -> (f64, f64) {
        let d = self.eta_x();
        let n = d.len();
        let mut i = 0;
        for k in 1..n {
            if d[k] < d[i] {
                i = k;
            }
        }
        if i == 0 || i + 1 == n {
            return (d[i], self.x[i]);
        }
        let (l, c, r) = (d[i - 1], d[i], d[i + 1]);
        let den = l - 2.0 * c + r;
        if den <= 0.0 {
            return (c, self.x[i]);
        }
        let off = 0.5 * (l - r) / den;
        let h = self.x[1] - self.x[0];
        (c - 0.25 * (l - r) * off, self.x[i] + off * h)
    }
}

fn monotone(v: &[f64]) -> bool {
    v.windows(2).all(|p| p[1] > p[0])
}

#[inline]
fn a_rhs(a: f64, w: f64) -> f64 {
    -4.0 / 3.0 * a * a + w * w / 6.0
}

/// One Heun step of both label families.
pub fn formation_step(state: &LabelState, dt: f64, mode: FormationMode) -> Result<LabelState> {
    let n = state.x.len();
    let full = mode == FormationMode::Full;
    // stage 1
    let (a_at_eta, w_at_phi) = if full {
        let ai = Pchip::new(&state.phi, &state.a);
        let wi = Pchip::new(&state.eta, &state.w);
        (
            state.eta.iter().map(|&e| ai.eval(e)).collect::<Vec<_>>(),
            state.phi.iter().map(|&p| wi.eval(p)).collect::<Vec<_>>(),
        )
    } else {
        (vec![0.0; n], state.w.clone())
    };
    let mut eta1 = vec![0.0; n];
    let mut w1 = vec![0.0; n];
    let mut phi1 = vec![0.0; n];
    let mut a1 = vec![0.0; n];
    for i in 0..n {
        eta1[i] = state.eta[i] + dt * state.w[i];
        w1[i] = state.w[i] - dt * 8.0 / 3.0 * a_at_eta[i] * state.w[i];
        if full {
            phi1[i] = state.phi[i] + dt * 2.0 / 3.0 * w_at_phi[i];
            a1[i] = state.a[i] + dt * a_rhs(state.a[i], w_at_phi[i]);
        }
    }
    // stage 2
    let (a_at_eta1, w_at_phi1) = if full {
        if !monotone(&eta1) || !monotone(&phi1) {
            return Err(Error::CrossingLabels(state.t + dt));
        }
        let ai = Pchip::new(&phi1, &a1);
        let wi = Pchip::new(&eta1, &w1);
        (
            eta1.iter().map(|&e| ai.eval(e)).collect::<Vec<_>>(),
            phi1.iter().map(|&p| wi.eval(p)).collect::<Vec<_>>(),
        )
    } else {
        (vec![0.0; n], w1.clone())
    };
    let mut out = state.clone();
    out.t = state.t + dt;
    for i in 0..n {
        out.eta[i] = state.eta[i] + 0.5 * dt * (state.w[i] + w1[i]);
        out.w[i] = state.w[i] - 0.5 * dt * 8.0 / 3.0 * (a_at_eta[i] * state.w[i] + a_at_eta1[i] * w1[i]);
        out.a_integral[i] = state.a_integral[i] + 0.5 * dt * (a_at_eta[i] + a_at_eta1[i]);
        if full {
            out.phi[i] = state.phi[i] + 0.5 * dt * (w_at_phi[i] + w_at_phi1[i]) * 2.0 / 3.0;
            out.a[i] = state.a[i] + 0.5 * dt * (a_rhs(state.a[i], w_at_phi[i]) + a_rhs(a1[i], w_at_phi1[i]));
        }
    }
    if !monotone(&out.eta) {
        return Err(Error::CrossingLabels(out.t));
    }
    Ok(out)
}

/// Least-squares fit of `κ* + a₁s + a₂s² + a₃s³`, `s = (θ-ξ*)^{1/3}`, and the
/// log-log cusp exponent of `|w - κ*|` against `|θ - ξ*|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub kappa_star: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub cusp_exponent: f64,
    pub n_samples: usize,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormationResult {
    pub mode: FormationMode,
    pub t_star: f64,
    pub xi_star: f64,
    pub x_star: f64,
    /// `min ∂ₓη` at `T*`.
    pub min_eta_x: f64,
    /// Angular positions and values of `(w, a)` on the label grid at `T*`.
    pub theta: Vec<f64>,
    pub w: Vec<f64>,
    pub a: Vec<f64>,
    pub series_fit: SeriesFit,
    /// `max |w∘η - w₀ exp(-(8/3)∫a∘η)| / |w₀|` over labels.
    pub integrating_factor_error: f64,
    pub steps: usize,
}

fn solve_normal_equations(rows: &[[f64; 4]], rhs: &[f64]) -> Option<[f64; 4]> {
    let mut m = nalgebra::Matrix4::<f64>::zeros();
    let mut v = nalgebra::Vector4::<f64>::zeros();
    for (r, &y) in rows.iter().zip(rhs) {
        for i in 0..4 {
            v[i] += r[i] * y;
            for j in 0..4 {
                m[(i, j)] += r[i] * r[j];
            }
        }
    }
    let sol = m.lu().solve(&v)?;
    Some([sol[0], sol[1], sol[2], sol[3]])
}

/// Fits the fractional expansion of `w(·, T*)` near `ξ*` over
/// `|θ - ξ*| ∈ window`.
pub fn fit_fractional_series(theta: &[f64], w: &[f64], xi_star: f64, window: (f64, f64)) -> Result<SeriesFit> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut dist = Vec::new();
    for (&th, &wv) in theta.iter().zip(w) {
        let d = th - xi_star;
        if d.abs() >= window.0 && d.abs() <= window.1 {
            let s = d.cbrt();
            rows.push([1.0, s, s * s, s * s * s]);
            rhs.push(wv);
            dist.push((d.abs(), wv));
        }
    }
    if rows.len() < 8 {
        return Err(Error::InsufficientSamples(format!("{} labels in the cusp window", rows.len())));
    }
    let c = solve_normal_equations(&rows, &rhs)
        .ok_or_else(|| Error::InsufficientSamples("singular cusp fit".into()))?;
    // cusp exponent from |w - κ*| against |θ - ξ*|
    let xs: Vec<f64> = dist.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = dist.iter().map(|p| (p.1 - c[0]).abs().max(f64::MIN_POSITIVE)).collect();
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(SeriesFit {
        kappa_star: c[0],
        a1: c[1],
        a2: c[2],
        a3: c[3],
        cusp_exponent: sxy / sxx,
        n_samples: rows.len(),
        window,
    })
}

/// Locates `T*` from a state whose `min ∂ₓη` is still positive but below the
/// threshold (or about to change sign): bisection on the step size.
pub fn detect_blowup(state: &LabelState, dt_max: f64, mode: FormationMode) -> Result<LabelState> {
    let g = |tau: f64| -> f64 {
        match formation_step(state, tau, mode) {
            Ok(s) => s.min_eta_x().0,
            Err(_) => -1.0,
        }
    };
    let (m0, _) = state.min_eta_x();
    if m0 <= 0.0 {
        return Err(Error::NoBlowupInWindow(state.t));
    }
    let mut hi = dt_max;
    let mut grow = 0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 20 {
            return Err(Error::NoBlowupInWindow(state.t + hi));
        }
    }
    let tau = bisect(g, 0.0, hi, 1e-16 * (state.t + hi), 200).ok_or_else(|| Error::NoBlowupInWindow(state.t))?;
    formation_step(state, tau, mode)
}

/// Runs the formation solver to the pre-shock and fits the cusp.
pub fn run_formation(p: &FormationParams) -> Result<FormationResult> {
    let dt = p.dt_frac * p.eps;
    let t_window = 3.0 * p.eps;
    let mut state = LabelState::initial(p);
    let mut steps = 0;
    loop {
        let next = formation_step(&state, dt, p.mode);
        match next {
            Ok(s) if s.min_eta_x().0 > p.threshold => {
                state = s;
                steps += 1;
            }
            _ => break,
        }
        if state.t > t_window {
            return Err(Error::NoBlowupInWindow(state.t));
        }
    }
    let fin = detect_blowup(&state, dt, p.mode)?;
    let (min_ex, x_star) = fin.min_eta_x();
    let xi_star = Pchip::new(&fin.x, &fin.eta).eval(x_star);
    // θ(x) need not stay monotone at T*: keep the labels in sorted order
    let mut pairs: Vec<(f64, f64)> = fin.eta.iter().copied().zip(fin.w.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let th: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let wv: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let series_fit = fit_fractional_series(&th, &wv, xi_star, (1e-7, 1e-4))?;
    let mut if_err: f64 = 0.0;
    for i in 0..fin.x.len() {
        let w0 = p.w0(fin.x[i]);
        let pred = w0 * (-8.0 / 3.0 * fin.a_integral[i]).exp();
        if_err = if_err.max((fin.w[i] - pred).abs() / w0.abs());
    }
    let a_at_eta = match p.mode {
        FormationMode::Full => {
            let ai = Pchip::new(&fin.phi, &fin.a);
            fin.eta.iter().map(|&e| ai.eval(e)).collect()
        }
        FormationMode::Burgers => vec![0.0; fin.x.len()],
    };
    Ok(FormationResult {
        mode: p.mode,
        t_star: fin.t,
        xi_star,
        x_star,
        min_eta_x: min_ex,
        theta: fin.eta.clone(),
        w: fin.w.clone(),
        a: a_at_eta,
        series_fit,
        integrating_factor_error: if_err,
        steps: steps + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_state_a_grows_linearly() {
        let p = FormationParams { half_width: 1e-3, dx: 1e-4, a0: 0.0, ..Default::default() };
        let mut s = LabelState::initial(&p);
        s.w.iter_mut().for_each(|w| *w = 4.0);
        let dt = 1e-6;
        for _ in 0..100 {
            s = formation_step(&s, dt, FormationMode::Full).unwrap();
        }
        let expect = 16.0 * 1e-4 / 6.0;
        assert!((s.a[5] - expect).abs() < 1e-3 * expect);
    }

    #[test]
    fn frozen_transport_is_exact() {
        let p = FormationParams { mode: FormationMode::Burgers, half_width: 1e-3, dx: 1e-4, ..Default::default() };
        let mut s = LabelState::initial(&p);
        for _ in 0..10 {
            s = formation_step(&s, 1e-4, FormationMode::Burgers).unwrap();
        }
        for i in 0..s.x.len() {
            let exact = s.x[i] + s.t * p.w0(s.x[i]);
            assert!((s.eta[i] - exact).abs() < 1e-15);
            assert_eq!(s.w[i], p.w0(s.x[i]));
        }
    }
}
