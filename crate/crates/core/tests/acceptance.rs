//! Acceptance battery: runs the ten criteria at their stated tolerances and
//! prints one PASS/FAIL line per criterion.
//!
//! One criterion cannot be met as stated: the fifth-order series of the
//! extremal roots of `Z³ - Z = ζ` has truncation error `(3003/1024)|ζ|⁶ + …`,
//! which exceeds the required `2|ζ|⁶` for every small `ζ`. That line is
//! reported as FAIL; the harness then checks, with an independent root and
//! an independently derived coefficient, that the failure is exactly this
//! coefficient and that the remaining part of the criterion holds.

use std::process::ExitCode;

use azishock::analysis_io::config::RunConfig;
use azishock::analysis_io::fit::fit_power_law;
use azishock::analysis_io::verify::{run_battery, zpm_truncation_constant};
use azishock::burgers_preshock::{quartic_fractional_inverse, z_pm_series};

/// Criteria whose stated bound is below the mathematically sharp value.
const UNATTAINABLE: [u8; 1] = [9];

/// Largest root of `Z³ - Z = ζ` by bisection on `[0.5, 1.5]`.
fn largest_root(zeta: f64) -> f64 {
    let (mut lo, mut hi) = (0.5f64, 1.5f64);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m * m * m - m - zeta > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    0.5 * (lo + hi)
}

/// Coefficient of `ζ⁶` in the root through `Z(0) = 1`, by solving the
/// series recurrence order by order with exact rational arithmetic on
/// integer numerators over powers of two.
fn sixth_order_coefficient() -> f64 {
    // Z = 1 + Σ aₖ ζᵏ;  Z³ - Z - ζ = 0 gives 2 a₁ = 1 and, for k ≥ 2,
    // 2 aₖ = -[ζᵏ](3 S² + S³) with S = Σ_{j<k} aⱼ ζʲ.
    let mut a = vec![0.0f64; 7];
    a[1] = 0.5;
    for k in 2..=6 {
        let mut s2 = 0.0;
        for i in 1..k {
            s2 += a[i] * a[k - i];
        }
        let mut s3 = 0.0;
        for i in 1..k {
            for j in 1..k - i {
                s3 += a[i] * a[j] * a[k - i - j];
            }
        }
        a[k] = -(3.0 * s2 + s3) / 2.0;
    }
    a[6]
}

/// Analysis of the unattainable series bound: the measured constant equals
/// the sharp coefficient, and the quartic-inverse part of the criterion holds.
fn check_series_analysis() -> Result<String, String> {
    let c6 = sixth_order_coefficient();
    if (c6 + 3003.0 / 1024.0).abs() > 1e-12 {
        return Err(format!("sixth-order coefficient {c6} differs from -3003/1024"));
    }
    // near ζ = 0 the error over ζ⁶ tends to |c₆|
    for zeta in [0.02f64, -0.02] {
        let err = (largest_root(zeta) - z_pm_series(zeta).0) / zeta.powi(6);
        if (err - c6).abs() > 0.05 * c6.abs() + 8.0 * zeta.abs() {
            return Err(format!("error/zeta^6 = {err} at zeta = {zeta}, expected about {c6}"));
        }
    }
    let constant = zpm_truncation_constant(0.1).map_err(|e| e.to_string())?;
    if !(constant > 2.0 && constant < c6.abs() + 1.0) {
        return Err(format!("measured constant {constant} not explained by the sixth-order term"));
    }
    let xs: Vec<f64> = (0..=24).map(|i| 1e-9 * 10f64.powf(i as f64 / 4.0)).collect();
    let errs: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let q = quartic_fractional_inverse(2.0, 1.5, x).expect("quartic inverse");
            (q.y - q.series(x)).abs()
        })
        .collect();
    let fit = fit_power_law(&xs, &errs).map_err(|e| e.to_string())?;
    if fit.exponent < 4.0 / 3.0 - 0.1 {
        return Err(format!("quartic truncation exponent {}", fit.exponent));
    }
    Ok(format!(
        "stated bound 2|zeta|^6 is below the sharp coefficient {:.4}; quartic part holds (exponent {:.4})",
        c6.abs(),
        fit.exponent
    ))
}

fn main() -> ExitCode {
    let results = run_battery(&RunConfig::default());
    let mut ok = true;
    for r in &results {
        println!("{r}");
        if r.passed {
            continue;
        }
        if UNATTAINABLE.contains(&r.id) {
            match check_series_analysis() {
                Ok(msg) => println!("             criterion {} is unattainable as stated: {msg}", r.id),
                Err(msg) => {
                    println!("             criterion {} analysis does not hold: {msg}", r.id);
                    ok = false;
                }
            }
        } else {
            ok = false;
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
