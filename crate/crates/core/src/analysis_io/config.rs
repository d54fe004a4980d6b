//! Run configuration read from a `key = value` text file.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Grid settings use dotted keys (`grid.n_left = 256`). Unknown keys,
//! malformed lines and invalid values are reported with their line number.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::burgers_preshock::CuspDatum;
use crate::error::{Error, Result};
use crate::field_solver::{DevelopParams, FormationParams, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Formation,
    Develop,
    Both,
}

impl RunMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RunMode::Formation => "formation",
            RunMode::Develop => "develop",
            RunMode::Both => "both",
        }
    }
}

impl FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "formation" => Ok(RunMode::Formation),
            "develop" => Ok(RunMode::Develop),
            "both" => Ok(RunMode::Both),
            other => Err(format!("unknown mode '{other}' (expected formation, develop or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kappa: f64,
    pub b: f64,
    pub c_coef: f64,
    pub mbar: f64,
    pub grid: GridSpec,
    /// Relative step of the geometric time grid.
    pub dt: f64,
    pub t_end: f64,
    pub tol_inner: f64,
    pub tol_outer: f64,
    pub newton_tol: f64,
    pub output_dir: PathBuf,
    pub mode: RunMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DevelopParams::default();
        RunConfig {
            kappa: 4.0,
            b: 1.0,
            c_coef: 0.0,
            mbar: 10.0,
            grid: d.grid,
            dt: d.dt_rel,
            t_end: d.t_end,
            tol_inner: d.tol_inner,
            tol_outer: 1e-8,
            newton_tol: d.newton_tol,
            output_dir: PathBuf::from("out"),
            mode: RunMode::Develop,
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse::<T>().map_err(|_| Error::Config { line, msg: format!("invalid value '{raw}' for '{key}'") })
}

impl RunConfig {
    /// Parses configuration text; keys not present keep their defaults.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Config { line, msg: format!("expected 'key = value', found '{content}'") });
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(Error::Config { line, msg: format!("missing value for '{key}'") });
            }
            match key {
                "kappa" => cfg.kappa = parse_value(line, key, value)?,
                "b" => cfg.b = parse_value(line, key, value)?,
                "c_coef" => cfg.c_coef = parse_value(line, key, value)?,
                "mbar" => cfg.mbar = parse_value(line, key, value)?,
                "grid.n_left" => cfg.grid.n_left = parse_value(line, key, value)?,
                "grid.n_right" => cfg.grid.n_right = parse_value(line, key, value)?,
                "grid.ratio" => cfg.grid.ratio = parse_value(line, key, value)?,
                "grid.dy_min" => cfg.grid.dy_min = parse_value(line, key, value)?,
                "dt" => cfg.dt = parse_value(line, key, value)?,
                "t_end" => cfg.t_end = parse_value(line, key, value)?,
                "tol_inner" => cfg.tol_inner = parse_value(line, key, value)?,
                "tol_outer" => cfg.tol_outer = parse_value(line, key, value)?,
                "newton_tol" => cfg.newton_tol = parse_value(line, key, value)?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "mode" => cfg.mode = value.parse().map_err(|msg| Error::Config { line, msg })?,
                other => return Err(Error::Config { line, msg: format!("unknown key '{other}'") }),
            }
            cfg.check_line(line, key)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config { line: 0, msg: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    /// Validates the value just assigned to `key`.
    fn check_line(&self, line: usize, key: &str) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config { line, msg: format!("'{key}' {msg}") });
        match key {
            "tol_inner" if !(self.tol_inner > 0.0) => bad("must be > 0"),
            "tol_outer" if !(self.tol_outer > 0.0) => bad("must be > 0"),
            "newton_tol" if !(self.newton_tol > 0.0) => bad("must be > 0"),
            "t_end" if !(self.t_end > 0.0) => bad("must be > 0"),
            "dt" if !(self.dt > 0.0) => bad("must be > 0"),
            "grid.n_left" if self.grid.n_left < 32 => bad("must be at least 32"),
            "grid.n_right" if self.grid.n_right < 32 => bad("must be at least 32"),
            "grid.ratio" if !(self.grid.ratio > 1.0) => bad("must be > 1"),
            "grid.dy_min" if !(self.grid.dy_min > 0.0) => bad("must be > 0"),
            "b" if !(self.b > 0.0) => bad("must be > 0"),
            "kappa" if !(self.kappa > 0.0) => bad("must be > 0"),
            _ => Ok(()),
        }
    }

    pub fn datum(&self) -> CuspDatum {
        CuspDatum::new(self.kappa, self.b, self.c_coef, self.mbar)
    }

    pub fn develop_params(&self) -> DevelopParams {
        DevelopParams {
            grid: self.grid,
            dt_rel: self.dt,
            t_end: self.t_end,
            tol_inner: self.tol_inner,
            newton_tol: self.newton_tol,
            ..DevelopParams::default()
        }
    }

    /// Formation data centred on the configured background speed.
    pub fn formation_params(&self) -> FormationParams {
        FormationParams { kappa0: self.kappa, ..FormationParams::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let text = "# comment\nkappa = 4.5\n\ngrid.n_left = 256  # trailing\nmode = both\noutput_dir = runs/a\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.kappa, 4.5);
        assert_eq!(c.grid.n_left, 256);
        assert_eq!(c.mode, RunMode::Both);
        assert_eq!(c.output_dir, PathBuf::from("runs/a"));
        assert_eq!(c.b, 1.0);
    }

    #[test]
    fn reports_line_numbers() {
        let err = RunConfig::parse("b = 1\nkappa 4\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        let err = RunConfig::parse("\n\ntol_inner = 0\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }));
        let err = RunConfig::parse("grid.n_right = 16\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
        let err = RunConfig::parse("colour = red\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
    }
}
