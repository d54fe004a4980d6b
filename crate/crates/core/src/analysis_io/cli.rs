//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a run fails or an acceptance criterion
//! fails, 2 on a usage or configuration error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis_io::config::{RunConfig, RunMode};
use crate::analysis_io::emit::{curve_rows, fmt_sci, snapshot_rows, write_curves_csv, write_snapshot_csv};
use crate::analysis_io::summary::Summary;
use crate::analysis_io::verify::run_battery;
use crate::characteristics::{trace_backward, Family, ShockSide, TraceOptions};
use crate::error::{Error, Result};
use crate::field_solver::{run_formation, FormationMode, FormationResult};
use crate::jump_system::{solve_jump, ShockTraces};
use crate::shock_evolution::{evolve_shock, EvolveOutcome};

#[derive(Debug, Parser)]
#[command(name = "azishock", version, about = "Shock formation and development in azimuthal symmetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Run configuration (`key = value` per line).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve smooth data to the pre-shock and fit the cusp.
    Formation {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Drop the radial velocity (`a ≡ 0`), reducing to Burgers.
        #[arg(long)]
        burgers: bool,
    },
    /// Develop the shock past the pre-shock and write curves, snapshots and
    /// a summary.
    Develop {
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Solve the jump conditions for given shock traces of `w`.
    JumpSolve {
        #[arg(long, allow_hyphen_values = true)]
        vl: f64,
        #[arg(long, allow_hyphen_values = true)]
        vr: f64,
        #[arg(long, default_value_t = crate::jump_system::DEFAULT_TOL)]
        tol: f64,
    },
    /// Trace a characteristic backward through a developed solution.
    Trace {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Characteristic family: 1, 2 or 3.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        family: u8,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        t: f64,
    },
    /// Run the acceptance battery.
    Verify {
        #[command(flatten)]
        cfg: ConfigArg,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn load_config(arg: &ConfigArg) -> Result<RunConfig> {
    match &arg.config {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

fn ensure_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p)?;
    Ok(())
}

fn dispatch(cmd: Command) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Formation { cfg, burgers } => {
            let cfg = load_config(&cfg)?;
            let mode = if burgers { FormationMode::Burgers } else { FormationMode::Full };
            let res = formation(&cfg, mode)?;
            println!("{}", Summary::new(RunMode::Formation.as_str()).with_formation(&res).to_json_line());
            Ok(0)
        }
        Command::Develop { cfg } => {
            let cfg = load_config(&cfg)?;
            let formation_result = match cfg.mode {
                RunMode::Formation => {
                    let res = formation(&cfg, FormationMode::Full)?;
                    println!("{}", Summary::new(RunMode::Formation.as_str()).with_formation(&res).to_json_line());
                    return Ok(0);
                }
                RunMode::Both => Some(formation(&cfg, FormationMode::Full)?),
                RunMode::Develop => None,
            };
            let out = develop(&cfg)?;
            let mut summary = Summary::new(cfg.mode.as_str()).with_development(&out, &cfg.datum())?;
            if let Some(f) = &formation_result {
                summary = summary.with_formation(f);
            }
            fs::write(cfg.output_dir.join("summary.json"), serde_json::to_string_pretty(&summary).expect("serializes"))
                .map_err(Error::from)?;
            println!("{}", summary.to_json_line());
            Ok(0)
        }
        Command::JumpSolve { vl, vr, tol } => {
            if !(tol > 0.0) {
                return Err(Failure::Usage("--tol must be > 0".into()));
            }
            let s = solve_jump(ShockTraces::new(vl, vr), tol)?;
            let line = json!({
                "vl": vl,
                "vr": vr,
                "z_minus": s.z_minus,
                "k_minus": s.k_minus,
                "e_minus": s.e_minus,
                "sdot": s.sdot,
                "residual_e1": s.residual_e1,
                "residual_e2": s.residual_e2,
                "iterations": s.iterations,
                "lax_ok": s.admissible.lax_ok(),
            });
            println!("{line}");
            Ok(0)
        }
        Command::Trace { cfg, family, theta, t } => {
            let cfg = load_config(&cfg)?;
            let family = Family::from_index(family).expect("range checked by the parser");
            if !(t > 0.0 && t <= cfg.t_end) {
                return Err(Failure::Usage(format!("--t must lie in (0, {}]", cfg.t_end)));
            }
            let out = evolve_shock(&cfg.datum(), &cfg.develop_params(), cfg.tol_outer)?;
            let opts = TraceOptions { substeps: 4, continue_through: true };
            let tr = trace_backward(family, theta, t, &out.history, opts)?;
            ensure_dir(&cfg.output_dir)?;
            let path = cfg.output_dir.join("trace.csv");
            let mut w = csv::Writer::from_path(&path).map_err(Error::from)?;
            w.write_record(["t", "theta", "side"]).map_err(Error::from)?;
            for (&(p, tt), side) in tr.samples.iter().zip(&tr.sides) {
                let side = match side {
                    ShockSide::Left => "left",
                    ShockSide::Right => "right",
                };
                w.write_record([fmt_sci(tt), fmt_sci(p), side.to_owned()]).map_err(Error::from)?;
            }
            w.flush().map_err(Error::from)?;
            let line = json!({
                "family": family_index(family),
                "theta": theta,
                "t": t,
                "shock_crossing_time": tr.stop_time,
                "samples": tr.samples.len(),
                "csv": path.display().to_string(),
            });
            println!("{line}");
            Ok(0)
        }
        Command::Verify { cfg } => {
            let cfg = load_config(&cfg)?;
            let results = run_battery(&cfg);
            for r in &results {
                println!("{r}");
            }
            let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            println!("{}", json!({ "mode": "verify", "passed": results.len() - failed.len(), "failed": failed }));
            Ok(if failed.is_empty() { 0 } else { 1 })
        }
    }
}

fn family_index(f: Family) -> u8 {
    match f {
        Family::Lam1 => 1,
        Family::Lam2 => 2,
        Family::Lam3 => 3,
    }
}

/// Formation run: writes `formation.csv` (profile at `T*`) and
/// `formation.json` (full result) to the output directory.
fn formation(cfg: &RunConfig, mode: FormationMode) -> Result<FormationResult> {
    let params = crate::field_solver::FormationParams { mode, ..cfg.formation_params() };
    let res = run_formation(&params)?;
    ensure_dir(&cfg.output_dir)?;
    let mut w = csv::Writer::from_path(cfg.output_dir.join("formation.csv"))?;
    w.write_record(["theta", "w", "a"])?;
    for i in 0..res.theta.len() {
        w.write_record([fmt_sci(res.theta[i]), fmt_sci(res.w[i]), fmt_sci(res.a[i])])?;
    }
    w.flush()?;
    fs::write(cfg.output_dir.join("formation.json"), serde_json::to_string_pretty(&res).expect("serializes"))?;
    Ok(res)
}

/// Times at which snapshots are written, as fractions of `t_end`.
const SNAPSHOT_FRACTIONS: [f64; 4] = [1e-3, 1e-2, 1e-1, 1.0];

/// Development run: writes `curves.csv` and `snapshots/level_NNNN.csv`.
fn develop(cfg: &RunConfig) -> Result<EvolveOutcome> {
    let out = evolve_shock(&cfg.datum(), &cfg.develop_params(), cfg.tol_outer)?;
    ensure_dir(&cfg.output_dir)?;
    let hist = &out.history;
    write_curves_csv(&cfg.output_dir.join("curves.csv"), &curve_rows(hist, out.weak.as_ref()))?;
    let snap_dir = cfg.output_dir.join("snapshots");
    ensure_dir(&snap_dir)?;
    let mut levels: Vec<usize> = SNAPSHOT_FRACTIONS.iter().map(|f| hist.nearest_level(f * cfg.t_end)).collect();
    levels.dedup();
    for j in levels {
        let rows = snapshot_rows(hist, j, out.weak.as_ref())?;
        write_snapshot_csv(&snap_dir.join(format!("level_{j:04}.csv")), &rows)?;
    }
    Ok(out)
}
