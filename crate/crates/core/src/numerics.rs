//! Small numerical kernels shared by the solvers: monotone cubic
//! interpolation, one-sided polynomial extrapolation, bracketed roots,
//! geometric grids and a classical RK4 step.

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant on sorted nodes.
/// Outside the node range the end values are held constant.
#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: &[f64], ys: &[f64]) -> Self {
        assert_eq!(xs.len(), ys.len());
        Pchip { xs: xs.to_vec(), ys: ys.to_vec(), ds: pchip_slopes(xs, ys) }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 0 {
            return 0.0;
        }
        if n == 1 || x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = locate(&self.xs, x);
        self.eval_in(i, x)
    }

    fn eval_in(&self, i: usize, x: f64) -> f64 {
        hermite(&self.xs, &self.ys, &self.ds, i, x)
    }

    /// Derivative of the interpolant (zero outside the node range).
    pub fn deriv(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n < 2 || x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = locate(&self.xs, x).min(n - 2);
        hermite_deriv(&self.xs, &self.ys, &self.ds, i, x)
    }
}

/// Fritsch–Carlson node slopes for monotone cubic Hermite interpolation.
pub fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut ds = vec![0.0; n];
    if n == 2 {
        let d = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        ds[0] = d;
        ds[1] = d;
    } else if n > 2 {
        let h: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
        let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        for i in 1..n - 1 {
            if del[i - 1] * del[i] <= 0.0 {
                ds[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                ds[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        ds[0] = end_slope(h[0], h[1], del[0], del[1]);
        ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }
    ds
}

/// Cubic Hermite evaluation on interval `i` of `xs`.
#[inline]
pub fn hermite(xs: &[f64], ys: &[f64], ds: &[f64], i: usize, x: f64) -> f64 {
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * ys[i] + h10 * h * ds[i] + h01 * ys[i + 1] + h11 * h * ds[i + 1]
}

/// Derivative of the cubic Hermite piece on interval `i`.
#[inline]
pub fn hermite_deriv(xs: &[f64], ys: &[f64], ds: &[f64], i: usize, x: f64) -> f64 {
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let d00 = 6.0 * t2 - 6.0 * t;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = -6.0 * t2 + 6.0 * t;
    let d11 = 3.0 * t2 - 2.0 * t;
    (d00 * ys[i] + d01 * ys[i + 1]) / h + d10 * ds[i] + d11 * ds[i + 1]
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d * del0 <= 0.0 {
        0.0
    } else if del0 * del1 <= 0.0 && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// Index `i` with `xs[i] <= x < xs[i+1]`, clamped to `[0, n-2]`.
pub fn locate(xs: &[f64], x: f64) -> usize {
    let n = xs.len();
    if n < 2 {
        return 0;
    }
    let p = xs.partition_point(|&v| v <= x);
    p.saturating_sub(1).min(n - 2)
}

/// Value at `x0` of the Lagrange polynomial through `(xs, ys)`.
pub fn lagrange_eval(xs: &[f64], ys: &[f64], x0: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..xs.len() {
        let mut l = 1.0;
        for j in 0..xs.len() {
            if i != j {
                l *= (x0 - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += l * ys[i];
    }
    acc
}

/// Derivative at `x0` of the Lagrange polynomial through `(xs, ys)`.
pub fn lagrange_deriv(xs: &[f64], ys: &[f64], x0: f64) -> f64 {
    let n = xs.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut denom = 1.0;
        for j in 0..n {
            if j != i {
                denom *= xs[i] - xs[j];
            }
        }
        let mut num = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..n {
                if j != i && j != k {
                    p *= x0 - xs[j];
                }
            }
            num += p;
        }
        acc += ys[i] * num / denom;
    }
    acc
}

/// Bisection on a sign change of `f` over `[a, b]`. Returns `None` when the
/// endpoints do not bracket a root.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Safeguarded Newton on `[a, b]`: Newton steps that leave the bracket or
/// fail to shrink it fast enough fall back to bisection.
pub fn newton_bracketed<F>(mut f: F, mut a: f64, mut b: f64, x0: f64, ftol: f64, max_iter: usize) -> Option<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let sa = fa.signum();
    let mut x = if x0 > a.min(b) && x0 < a.max(b) { x0 } else { 0.5 * (a + b) };
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() <= ftol {
            return Some(x);
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let mut xn = x - fx / dfx;
        let lo = a.min(b);
        let hi = a.max(b);
        if !xn.is_finite() || xn <= lo || xn >= hi {
            xn = 0.5 * (a + b);
        }
        if (xn - x).abs() <= 1e-16 * (1.0 + x.abs()) {
            return Some(xn);
        }
        x = xn;
    }
    Some(x)
}

/// Geometric ladder `d0 * (1 + r + ... + r^i)` for `i = 0..` until `len` is
/// exceeded; the last node is clipped to `len`.
pub fn geometric_offsets(d0: f64, ratio: f64, len: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut step = d0;
    let mut pos = d0;
    while pos < len {
        out.push(pos);
        step *= ratio;
        pos += step;
    }
    out.push(len);
    out
}

/// One classical Runge–Kutta step for a scalar ODE `y' = f(t, y)`.
pub fn rk4_scalar<F: FnMut(f64, f64) -> f64>(mut f: F, t: f64, y: f64, h: f64) -> f64 {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    let k4 = f(t + h, y + h * k3);
    y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
}

/// Natural cubic spline (zero second derivative at both ends), `C²` on
/// sorted nodes. Outside the node range the end values are held constant.
#[derive(Debug, Clone)]
pub struct NaturalSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

impl NaturalSpline {
    pub fn new(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for interior second derivatives (Thomas algorithm)
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut sub = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[j] = 2.0 * (h0 + h1);
                sub[j] = h0;
                rhs[j] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for j in 1..k {
                let h = xs[j + 1] - xs[j];
                let f = sub[j] / diag[j - 1];
                diag[j] -= f * h;
                rhs[j] -= f * rhs[j - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for j in (0..k - 1).rev() {
                let h = xs[j + 2] - xs[j + 1];
                m[j + 1] = (rhs[j] - h * m[j + 2]) / diag[j];
            }
        }
        NaturalSpline { xs: xs.to_vec(), ys: ys.to_vec(), m }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
