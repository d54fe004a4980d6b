//! Shock-adapted two-sided grids in `y = θ - s(t)`, per-side field storage,
//! interpolation and one-sided traces at the shock.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermite, hermite_deriv, lagrange_deriv, lagrange_eval, pchip_slopes};

pub const W: usize = 0;
pub const Z: usize = 1;
pub const K: usize = 2;
pub const A: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_left: usize,
    pub n_right: usize,
    pub ratio: f64,
    pub dy_min: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_left: 340, n_right: 340, ratio: 1.045, dy_min: 1e-9 }
    }
}

impl GridSpec {
    /// Distances from the shock: `dy_min`, then growing by `ratio`.
    pub fn offsets(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut pos = self.dy_min;
        let mut step = self.dy_min;
        for _ in 0..n {
            out.push(pos);
            step *= self.ratio;
            pos += step;
        }
        out
    }

    /// Left nodes in ascending order (farthest first, nearest the shock last).
    pub fn y_left(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.offsets(self.n_left).into_iter().map(|d| -d).collect();
        v.reverse();
        v
    }

    pub fn y_right(&self) -> Vec<f64> {
        self.offsets(self.n_right)
    }

    pub fn half_width(&self) -> f64 {
        *self.offsets(self.n_left.max(self.n_right)).last().unwrap_or(&0.0)
    }
}

/// Nodal values of `(w, z, k, a)` on one side of the shock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideFields {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub k: Vec<f64>,
    pub a: Vec<f64>,
}

impl SideFields {
    pub fn zeros(n: usize) -> Self {
        SideFields { w: vec![0.0; n], z: vec![0.0; n], k: vec![0.0; n], a: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn field(&self, idx: usize) -> &[f64] {
        match idx {
            W => &self.w,
            Z => &self.z,
            K => &self.k,
            _ => &self.a,
        }
    }

    pub fn max_diff(&self, other: &SideFields) -> f64 {
        let mut m: f64 = 0.0;
        for f in 0..4 {
            for (x, y) in self.field(f).iter().zip(other.field(f)) {
                m = m.max((x - y).abs());
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFields {
    pub left: SideFields,
    pub right: SideFields,
}

impl LevelFields {
    pub fn max_diff(&self, other: &LevelFields) -> f64 {
        self.left.max_diff(&other.left).max(self.right.max_diff(&other.right))
    }
}

/// Monotone cubic interpolation of all four fields on one side, sharing the
/// node search. Values are held constant beyond the end nodes.
#[derive(Debug, Clone)]
pub struct SideInterp {
    xs: Arc<Vec<f64>>,
    ys: [Vec<f64>; 4],
    ds: [Vec<f64>; 4],
}

enum Loc {
    Below,
    Above,
    In(usize),
}

impl SideInterp {
    pub fn new(xs: Arc<Vec<f64>>, f: &SideFields) -> Self {
        let ys = [f.w.clone(), f.z.clone(), f.k.clone(), f.a.clone()];
        let ds = [
            pchip_slopes(&xs, &ys[0]),
            pchip_slopes(&xs, &ys[1]),
            pchip_slopes(&xs, &ys[2]),
            pchip_slopes(&xs, &ys[3]),
        ];
        SideInterp { xs, ys, ds }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self, idx: usize) -> &[f64] {
        &self.ys[idx]
    }

    #[inline]
    fn loc(&self, y: f64) -> Loc {
        let n = self.xs.len();
        if y <= self.xs[0] {
            Loc::Below
        } else if y >= self.xs[n - 1] {
            Loc::Above
        } else {
            Loc::In(self.xs.partition_point(|&v| v <= y).saturating_sub(1).min(n - 2))
        }
    }

    #[inline]
    pub fn eval(&self, y: f64, idx: usize) -> f64 {
        match self.loc(y) {
            Loc::Below => self.ys[idx][0],
            Loc::Above => *self.ys[idx].last().unwrap(),
            Loc::In(i) => hermite(&self.xs, &self.ys[idx], &self.ds[idx], i, y),
        }
    }

    #[inline]
    pub fn eval_all(&self, y: f64) -> [f64; 4] {
        match self.loc(y) {
            Loc::Below => [self.ys[0][0], self.ys[1][0], self.ys[2][0], self.ys[3][0]],
            Loc::Above => {
                let n = self.xs.len() - 1;
                [self.ys[0][n], self.ys[1][n], self.ys[2][n], self.ys[3][n]]
            }
            Loc::In(i) => [
                hermite(&self.xs, &self.ys[0], &self.ds[0], i, y),
                hermite(&self.xs, &self.ys[1], &self.ds[1], i, y),
                hermite(&self.xs, &self.ys[2], &self.ds[2], i, y),
                hermite(&self.xs, &self.ys[3], &self.ds[3], i, y),
            ],
        }
    }

    /// `(w, z)` only.
    #[inline]
    pub fn eval_wz(&self, y: f64) -> (f64, f64) {
        match self.loc(y) {
            Loc::Below => (self.ys[0][0], self.ys[1][0]),
            Loc::Above => (*self.ys[0].last().unwrap(), *self.ys[1].last().unwrap()),
            Loc::In(i) => (
                hermite(&self.xs, &self.ys[0], &self.ds[0], i, y),
                hermite(&self.xs, &self.ys[1], &self.ds[1], i, y),
            ),
        }
    }

    pub fn deriv(&self, y: f64, idx: usize) -> f64 {
        match self.loc(y) {
            Loc::In(i) => hermite_deriv(&self.xs, &self.ys[idx], &self.ds[idx], i, y),
            _ => 0.0,
        }
    }
}

/// One-sided limits at the shock. `da_*` are the angular derivatives of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShockSideTraces {
    pub w_minus: f64,
    pub w_plus: f64,
    pub z_minus: f64,
    pub z_plus: f64,
    pub k_minus: f64,
    pub k_plus: f64,
    pub a_minus: f64,
    pub a_plus: f64,
    pub da_minus: f64,
    pub da_plus: f64,
}

impl ShockSideTraces {
    pub fn jump_w(&self) -> f64 {
        self.w_minus - self.w_plus
    }

    pub fn mean_w(&self) -> f64 {
        0.5 * (self.w_minus + self.w_plus)
    }

    pub fn jump_da(&self) -> f64 {
        self.da_minus - self.da_plus
    }
}

/// Cubic one-sided extrapolation of the four fields (and the derivative of
/// `a`) to `y = 0∓` from the four nodes nearest the shock on each side.
pub fn shock_side_traces(y_left: &[f64], y_right: &[f64], f: &LevelFields) -> Result<ShockSideTraces> {
    let nl = y_left.len();
    let nr = y_right.len();
    if nl < 4 || nr < 4 || f.left.len() != nl || f.right.len() != nr {
        return Err(Error::TooFewNodes(nl.min(nr)));
    }
    let xl = &y_left[nl - 4..];
    let xr = &y_right[..4];
    let l = |v: &[f64]| lagrange_eval(xl, &v[nl - 4..], 0.0);
    let r = |v: &[f64]| lagrange_eval(xr, &v[..4], 0.0);
    Ok(ShockSideTraces {
        w_minus: l(&f.left.w),
        w_plus: r(&f.right.w),
        z_minus: l(&f.left.z),
        z_plus: r(&f.right.z),
        k_minus: l(&f.left.k),
        k_plus: r(&f.right.k),
        a_minus: l(&f.left.a),
        a_plus: r(&f.right.a),
        da_minus: lagrange_deriv(xl, &f.left.a[nl - 4..], 0.0),
        da_plus: lagrange_deriv(xr, &f.right.a[..4], 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_field_traces() {
        let g = GridSpec { n_left: 40, n_right: 40, ratio: 1.1, dy_min: 1e-6 };
        let (yl, yr) = (g.y_left(), g.y_right());
        let mut f = LevelFields { left: SideFields::zeros(40), right: SideFields::zeros(40) };
        for (i, &y) in yl.iter().enumerate() {
            f.left.w[i] = 4.0 + y;
            f.left.a[i] = 2.0 * y;
        }
        for (i, &y) in yr.iter().enumerate() {
            f.right.w[i] = 4.0 + y;
            f.right.a[i] = 3.0 * y;
        }
        let tr = shock_side_traces(&yl, &yr, &f).unwrap();
        assert!((tr.w_minus - 4.0).abs() < 1e-12 && (tr.w_plus - 4.0).abs() < 1e-12);
        assert!((tr.da_minus - 2.0).abs() < 1e-6 && (tr.da_plus - 3.0).abs() < 1e-6);
        assert!(shock_side_traces(&yl[..3], &yr, &f).is_err());
    }
}
