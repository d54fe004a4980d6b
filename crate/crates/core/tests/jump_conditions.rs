//! Jump solver against an oracle built from the γ = 2 Hugoniot curve,
//! parameterized by the density ratio across the shock.

use approx::assert_relative_eq;
use azishock::jump_system::{
    asymptotic_seed, residuals_e1_e2, shock_speed_approx, shock_speed_momentum, solve_jump, ShockTraces,
    DEFAULT_TOL,
};
use azishock::riemann_core::{entropy_series, lax_check, to_physical, AzimuthalPoint};

/// Left state `(w₋, z₋, e^{k₋} - 1, ṡ)` for density ratio `X = ρ₋/ρ₊` behind
/// a shock into the right state `(vr, 0, 0)`, at `r = 1`.
fn hugoniot_state(vr: f64, x: f64) -> (f64, f64, f64, f64) {
    // right state: b = c = vr/2, ρ = c²/4, p = ρc²/8 (so p = ρ²e^k/2, k = 0)
    let c = 0.5 * vr;
    let rho_r = c * c / 4.0;
    let p_r = rho_r * rho_r / 2.0;
    let rho_l = x * rho_r;
    // Hugoniot for γ = 2: p₋/p₊ = (3X - 1)/(3 - X)
    let p_l = p_r * (3.0 * x - 1.0) / (3.0 - x);
    let m = ((p_l - p_r) / (1.0 / rho_r - 1.0 / rho_l)).sqrt();
    let shock = 0.5 * vr + m / rho_r;
    let u_l = shock - m / rho_l;
    let sigma_l = (8.0 * p_l / rho_l).sqrt();
    let e = 2.0 * p_l / (rho_l * rho_l) - 1.0;
    // the shock angle moves at 3/4 of the rescaled speed
    (u_l + sigma_l, u_l - sigma_l, e, shock / 0.75)
}

fn oracle(vl: f64, vr: f64) -> (f64, f64, f64) {
    let (mut lo, mut hi) = (1.0 + 1e-15, 3.0 - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hugoniot_state(vr, mid).0 > vl {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (_, z, e, s) = hugoniot_state(vr, 0.5 * (lo + hi));
    (z, e, s)
}

#[test]
fn newton_root_matches_hugoniot_oracle() {
    for &(mean, jump) in &[(3.0, 1e-3), (4.0, 0.05), (4.0, 0.2), (5.0, 0.3), (3.5, 0.17)] {
        let tr = ShockTraces::from_jump_mean(jump, mean);
        let s = solve_jump(tr, DEFAULT_TOL).unwrap();
        let (z, e, sdot) = oracle(tr.vl, tr.vr);
        assert!((s.z_minus - z).abs() < 1e-10, "z at ({mean}, {jump}): {} vs {z}", s.z_minus);
        assert!((s.e_minus - e).abs() < 1e-10, "e at ({mean}, {jump}): {} vs {e}", s.e_minus);
        assert!((s.sdot - sdot).abs() < 1e-9, "sdot at ({mean}, {jump}): {} vs {sdot}", s.sdot);
    }
}

#[test]
fn jump_solve_example_is_admissible() {
    let s = solve_jump(ShockTraces::new(4.1, 3.9), DEFAULT_TOL).unwrap();
    assert!(s.residual_e1.abs() < 1e-12 && s.residual_e2.abs() < 1e-12);
    assert!(s.z_minus < 0.0 && s.k_minus > 0.0);
    let (z, e, _) = oracle(4.1, 3.9);
    assert!((s.z_minus - z).abs() < 1e-12 && (s.e_minus - e).abs() < 1e-12);
    let left = AzimuthalPoint::new(4.1, s.z_minus, s.k_minus, 0.0);
    let right = AzimuthalPoint::new(3.9, 0.0, 0.0, 0.0);
    assert!(lax_check(&left, &right, s.sdot).lax_ok());
}

#[test]
fn the_two_speed_formulas_agree_at_the_root() {
    for jump in [0.01, 0.1, 0.3] {
        let tr = ShockTraces::from_jump_mean(jump, 4.0);
        let s = solve_jump(tr, DEFAULT_TOL).unwrap();
        let alt = shock_speed_momentum(tr.vl, tr.vr, s.z_minus, s.e_minus).unwrap();
        assert!((alt - s.sdot).abs() <= 1e-10, "{alt} vs {}", s.sdot);
    }
}

#[test]
fn newton_root_is_close_to_the_seed() {
    // the seed is accurate to fifth order in the jump
    let mut ratios = Vec::new();
    for jump in [0.025, 0.05, 0.1, 0.2] {
        let s = solve_jump(ShockTraces::from_jump_mean(jump, 4.0), DEFAULT_TOL).unwrap();
        let (z0, e0) = asymptotic_seed(jump, 4.0).unwrap();
        ratios.push(((s.z_minus - z0).abs().max((s.e_minus - e0).abs())) / jump.powi(5));
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max < 1.0, "seed error over jump^5: {ratios:?}");
}

#[test]
fn speed_approximation_matches_its_entropy_free_closed_form() {
    // the approximation expands the entropy-free speed formula with the
    // leading z₋ = -(9/16)[w]³/⟨w⟩² inserted
    for (mean, jump) in [(4.0f64, 0.0125f64), (4.0, 0.025), (3.0, 0.02)] {
        let vl = mean + 0.5 * jump;
        let vr = mean - 0.5 * jump;
        let d = 9.0 * jump * jump * jump / (16.0 * mean * mean);
        let closed = 2.0 / 3.0 * ((vl + d).powi(2) * (vl - d) - vr.powi(3)) / ((vl + d).powi(2) - vr * vr);
        let err = (closed - shock_speed_approx(jump, mean)).abs();
        assert!(err < 0.1 * jump.powi(3), "({mean}, {jump}): {err}");
    }
}

#[test]
fn converged_speed_has_the_hugoniot_quadratic_correction() {
    // with the entropy jump included, ṡ = ⟨w⟩ + (3/8)[w]²/⟨w⟩ + O([w]³);
    // the oracle supplies the speed independently of the solver
    for mean in [3.0, 4.0, 5.0] {
        let mut errs = Vec::new();
        for jump in [0.04f64, 0.02, 0.01] {
            let tr = ShockTraces::from_jump_mean(jump, mean);
            let (_, _, sdot) = oracle(tr.vl, tr.vr);
            let s = solve_jump(tr, DEFAULT_TOL).unwrap();
            assert!((s.sdot - sdot).abs() < 1e-10);
            errs.push((sdot - mean - 0.375 * jump * jump / mean).abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 2.7, "observed order {order} from {errs:?}");
        }
    }
}

#[test]
fn entropy_jump_series_matches_the_solved_entropy() {
    // k₋ = (γ+1)[p]³/(12γ²p₊³) + O([p]⁴) relative to the right state
    let mut rels = Vec::new();
    for jump in [0.1, 0.05, 0.025] {
        let s = solve_jump(ShockTraces::from_jump_mean(jump, 4.0), DEFAULT_TOL).unwrap();
        let tr = ShockTraces::from_jump_mean(jump, 4.0);
        let right = to_physical(&AzimuthalPoint::new(tr.vr, 0.0, 0.0, 0.0), 1.0).unwrap();
        let left = to_physical(&AzimuthalPoint::new(tr.vl, s.z_minus, s.k_minus, 0.0), 1.0).unwrap();
        let approx = entropy_series(left.p - right.p, &right);
        rels.push(((approx - s.k_minus) / s.k_minus).abs());
    }
    // relative error O([p]): halving the jump roughly halves it
    assert!(rels[0] < 0.2);
    assert!(rels[1] < 0.6 * rels[0] && rels[2] < 0.6 * rels[1], "{rels:?}");
}

#[test]
fn residuals_vanish_only_at_the_root() {
    let (e1, e2) = residuals_e1_e2(4.1, 3.9, 0.0, 0.0);
    assert!(e1.abs() > 1e-6 || e2.abs() > 1e-6);
    let s = solve_jump(ShockTraces::new(4.1, 3.9), DEFAULT_TOL).unwrap();
    let (e1, e2) = residuals_e1_e2(4.1, 3.9, s.z_minus, s.e_minus);
    assert_relative_eq!(e1, s.residual_e1, epsilon = 1e-15);
    assert_relative_eq!(e2, s.residual_e2, epsilon = 1e-15);
}
