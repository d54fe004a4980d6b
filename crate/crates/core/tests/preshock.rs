//! Burgers inversion, the reduced cubic and the state conversions, each
//! against an oracle computed here by brute force.

use approx::assert_relative_eq;
use azishock::analysis_io::fit::{estimate_holder, fit_power_law, geometric_ladder, Side};
use azishock::burgers_preshock::{
    burgers_flow, burgers_solution, cubic_roots_zpm, extremal_labels, quartic_fractional_inverse,
    selfsimilar_profile_wbar, z_pm_series, BurgersInverse, CuspDatum,
};
use azishock::riemann_core::{
    entropy_jump_closed_form, entropy_series, from_physical, lax_check, specific_vorticity, to_physical, wave_speeds,
    AzimuthalPoint,
};

/// Bisection to machine precision on a sign change of `f` in `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All sign changes of `f` on a uniform grid of `n` cells, refined by bisection.
fn sign_scan_roots(f: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    let mut roots = Vec::new();
    for i in 0..n {
        let (a, b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
        if f(a) == 0.0 {
            roots.push(a);
        } else if f(a) * f(b) < 0.0 {
            roots.push(bisect(f, a, b));
        }
    }
    roots
}

#[test]
fn flow_map_examples() {
    let d = CuspDatum::pure(4.0, 1.0);
    assert_eq!(burgers_flow(0.37, 0.0, &d), 0.37);
    let t = 1e-3f64;
    let x = t.powf(1.5);
    assert!((burgers_flow(x, t, &d) - 4.0 * t).abs() < 1e-18);
    assert_relative_eq!(burgers_flow(0.1, 0.01, &d), 0.1 + 0.01 * (4.0 - 0.1f64.cbrt()), max_relative = 1e-15);
    // odd cube root for negative labels
    assert_relative_eq!(burgers_flow(-0.1, 0.01, &d), -0.1 + 0.01 * (4.0 + 0.1f64.cbrt()), max_relative = 1e-15);
}

#[test]
fn extremal_labels_match_a_sign_scan() {
    let d = CuspDatum::new(4.0, 1.0, 0.05, 10.0);
    let t = 1e-3;
    let s = 4.0 * t;
    let scale = (d.b * t).powf(1.5);
    let roots = sign_scan_roots(|x| burgers_flow(x, t, &d) - s, -10.0 * scale, 10.0 * scale, 200_000);
    assert_eq!(roots.len(), 3, "cubic should have three labels: {roots:?}");
    let (xm, xp) = extremal_labels(t, s, &d).unwrap();
    assert!((xm - roots[0]).abs() < 1e-10, "{xm} vs {}", roots[0]);
    assert!((xp - roots[2]).abs() < 1e-10, "{xp} vs {}", roots[2]);
}

#[test]
fn extremal_labels_of_the_pure_cusp_are_exact() {
    let d = CuspDatum::pure(4.0, 1.3);
    for t in [1e-6, 1e-4, 1e-2] {
        let (xm, xp) = extremal_labels(t, 4.0 * t, &d).unwrap();
        let x = (1.3 * t).powf(1.5);
        assert_relative_eq!(xp, x, max_relative = 1e-13);
        assert_relative_eq!(xm, -x, max_relative = 1e-13);
    }
}

#[test]
fn general_labels_stay_within_t_squared_of_the_cusp_labels() {
    let d = CuspDatum::new(4.0, 1.0, 0.05, 10.0).with_g0(std::sync::Arc::new(|x: f64| -0.2 * x * x));
    let mut ratios = Vec::new();
    for i in 0..12 {
        let t = 1e-6 * 2f64.powi(i);
        let (xm, xp) = extremal_labels(t, 4.0 * t, &d).unwrap();
        let x = t.powf(1.5);
        ratios.push((xp - x).abs().max((xm + x).abs()) / (t * t));
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max < 10f64.powi(4) / 2.0, "{ratios:?}");
    // bounded: no growth as t decreases
    assert!(ratios[0] <= 2.0 * ratios[11] + 1.0, "{ratios:?}");
}

#[test]
fn inverse_solution_is_consistent_with_the_flow_map() {
    let d = CuspDatum::new(4.0, 1.0, 0.05, 10.0);
    let t = 2e-3;
    let s = 4.0 * t + 1e-6;
    let inv = BurgersInverse::new(t, s, &d).unwrap();
    for theta in [s - 1e-2, s - 1e-5, s + 1e-5, s + 1e-2] {
        let x = inv.label(theta, &d).unwrap();
        assert!((burgers_flow(x, t, &d) - theta).abs() < 1e-14);
        if theta < s {
            assert!(x <= inv.x_minus);
        } else {
            assert!(x >= inv.x_plus);
        }
        assert_eq!(inv.solution(theta, &d).unwrap(), d.w0(x));
    }
    assert!(inv.label(s, &d).is_err());
}

#[test]
fn pure_cusp_jump_is_exact_and_general_jump_is_close() {
    let pure = CuspDatum::pure(4.0, 1.0);
    let general = CuspDatum::new(4.0, 1.0, 0.05, 10.0);
    for t in [1e-5, 1e-4, 1e-3, 1e-2] {
        let (l, r) = BurgersInverse::new(t, 4.0 * t, &pure).unwrap().traces(&pure);
        assert_relative_eq!(l - r, 2.0 * t.sqrt(), max_relative = 1e-12);
        let (l, r) = BurgersInverse::new(t, 4.0 * t, &general).unwrap().traces(&general);
        assert!(((l - r) - 2.0 * t.sqrt()).abs() <= t);
    }
    assert_eq!(burgers_solution(0.3, 0.0, 0.0, &pure).unwrap(), pure.w0(0.3));
}

#[test]
fn extremal_cubic_roots_and_their_series() {
    assert_eq!(cubic_roots_zpm(0.0).unwrap(), (1.0, -1.0));
    let root = |zeta: f64, lo: f64, hi: f64| bisect(|z| z * z * z - z - zeta, lo, hi);
    let (zp, zm) = cubic_roots_zpm(0.1).unwrap();
    assert!((zp - root(0.1, 0.6, 1.6)).abs() < 1e-14);
    assert!((zm - root(0.1, -1.6, -0.6)).abs() < 1e-14);
    assert!((z_pm_series(0.1).0 - zp).abs() < 1e-5);
    // Z₊ + Z₋ - ζ - ζ³ = 3ζ⁵ + O(ζ⁷)
    for zeta in [-0.1, -0.05, 0.02, 0.08] {
        let (zp, zm) = cubic_roots_zpm(zeta).unwrap();
        let r = zp + zm - zeta - zeta * zeta * zeta;
        assert!((r - 3.0 * zeta.powi(5)).abs() < 20.0 * zeta.abs().powi(7), "{zeta}: {r}");
    }
    assert!(cubic_roots_zpm(0.11).is_err());
}

#[test]
fn selfsimilar_profile_against_newton() {
    assert_eq!(selfsimilar_profile_wbar(0.0), 0.0);
    assert!((selfsimilar_profile_wbar(-2.0) - 1.0).abs() < 1e-15);
    let mut w = -2.0f64;
    for _ in 0..60 {
        w -= (w * w * w + w + 10.0) / (3.0 * w * w + 1.0);
    }
    assert!((selfsimilar_profile_wbar(10.0) - w).abs() < 1e-12);
}

#[test]
fn quartic_inverse_and_its_coefficients() {
    let q = quartic_fractional_inverse(1.0, 1.0, 1e-6).unwrap();
    assert!((-1e-6 + q.y.powi(3) + q.y.powi(4)).abs() < 1e-20);
    assert_relative_eq!(q.coeffs[0], 1.0, max_relative = 1e-15);
    assert_relative_eq!(q.coeffs[1], -1.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(q.coeffs[2], 1.0 / 3.0, max_relative = 1e-15);
    assert!((q.y - q.series(1e-6)).abs() < 1e-7);
}

#[test]
fn state_conversions() {
    let p = AzimuthalPoint::new(4.0, 0.3, 0.0, 0.0);
    let s = wave_speeds(&p);
    assert_relative_eq!(s.lam1, 49.0 / 30.0, max_relative = 1e-15);
    assert_relative_eq!(s.lam2, 43.0 / 15.0, max_relative = 1e-15);
    assert_relative_eq!(s.lam3, 4.1, max_relative = 1e-15);
    // equal spacing 2c/3, up to rounding in the three separate formulas
    for (w, z) in [(4.0, 0.3), (7.25, -1.5), (1e-3, -2.0)] {
        let s = wave_speeds(&AzimuthalPoint::new(w, z, 0.0, 0.0));
        let ulp = 8.0 * f64::EPSILON * (w.abs() + z.abs());
        assert!((s.lam2 - s.lam1 - (w - z) / 3.0).abs() <= ulp);
        assert!((s.lam3 - s.lam2 - (w - z) / 3.0).abs() <= ulp);
    }

    let q = AzimuthalPoint::new(4.1, 0.0, 0.01, 0.2);
    let phys = to_physical(&q, 2.0).unwrap();
    assert_relative_eq!(phys.rho, 4.0 / 16.0 * 4.1f64.powi(2) * (-0.01f64).exp(), max_relative = 1e-14);
    assert_relative_eq!(phys.p, phys.rho * phys.rho * 0.01f64.exp() / 2.0, max_relative = 1e-14);
    let back = from_physical(&phys, 2.0);
    for (a, b) in [(back.w, q.w), (back.z, q.z), (back.k, q.k), (back.a, q.a)] {
        assert!((a - b).abs() < 1e-14);
    }
    assert!(to_physical(&AzimuthalPoint::new(1.0, 1.0, 0.0, 0.0), 1.0).is_err());
}

#[test]
fn entropy_jump_closed_form_and_series() {
    assert_eq!(entropy_jump_closed_form(1.0).unwrap(), 0.0);
    // compression (Q = ρ₊/ρ₋ < 1) produces entropy
    assert!(entropy_jump_closed_form(0.9).unwrap() > 0.0);
    let right = to_physical(&AzimuthalPoint::new(4.0, 0.0, 0.0, 0.0), 1.0).unwrap();
    let (mut dps, mut rels) = (Vec::new(), Vec::new());
    for i in 0..13 {
        let rel_p = 1e-4 * 10f64.powf(i as f64 / 4.0);
        let dp = rel_p * right.p;
        // p₋/p₊ = (3X - 1)/(3 - X) inverted for the density ratio X = ρ₋/ρ₊
        let ratio = 1.0 + rel_p;
        let x = (3.0 * ratio + 1.0) / (ratio + 3.0);
        let exact = entropy_jump_closed_form(1.0 / x).unwrap().ln_1p();
        dps.push(rel_p);
        rels.push(((entropy_series(dp, &right) - exact) / exact).abs());
    }
    let fit = fit_power_law(&dps, &rels).unwrap();
    assert!((0.9..=1.1).contains(&fit.exponent), "exponent {}", fit.exponent);
}

#[test]
fn lax_and_vorticity_examples() {
    let l = AzimuthalPoint::new(4.2, 0.0, 0.0, 0.0);
    let r = AzimuthalPoint::new(3.8, 0.0, 0.0, 0.0);
    assert!(lax_check(&l, &r, 4.0).lax_ok());
    assert!(!lax_check(&r, &r, 3.8).lax_ok());
    let p = AzimuthalPoint::new(4.0, 0.0, 0.0, 0.0);
    assert_relative_eq!(specific_vorticity(&p, 0.0).unwrap().varpi, 4.0, max_relative = 1e-15);
    assert_eq!(specific_vorticity(&p, 4.0).unwrap().varpi, 0.0);
}

#[test]
fn power_law_and_holder_fits_recover_monomials() {
    let ts = geometric_ladder(1e-4, 1e-2, 20);
    for p in [0.5, 1.5, 4.0 / 3.0] {
        let vals: Vec<f64> = ts.iter().map(|t| 3.0 * t.powf(p)).collect();
        let fit = fit_power_law(&ts, &vals).unwrap();
        assert!((fit.exponent - p).abs() <= 1e-10 && (fit.prefactor - 3.0).abs() <= 1e-9);
    }
    // the Hölder estimate does not depend on the scale of the ladder
    let f = |x: f64| 2.0 + x.abs().sqrt();
    let est = |scale: f64| {
        let hs = geometric_ladder(1e-6 * scale, 1e-3 * scale, 12);
        let samples: Vec<(f64, f64)> = hs.iter().map(|&h| (h, f(h))).collect();
        estimate_holder(f(0.0), Side::Right, &samples).unwrap().exponent
    };
    assert!((est(1.0) - 0.5).abs() <= 1e-10 && (est(1.0) - est(37.0)).abs() <= 1e-10);
    assert!(fit_power_law(&ts[..5], &ts[..5]).is_err());
}
