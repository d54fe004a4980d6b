//! CSV emitters for the shock-curve history and per-level snapshots.
//!
//! Every number is written in scientific notation with 17 significant
//! digits, which reads back bit-for-bit. Rows are ordered by time, then by
//! angle.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::characteristics::WeakCurves;
use crate::error::{Error, Result};
use crate::field_solver::grid::A;
use crate::field_solver::{DevelopmentHistory, SideInterp};
use crate::riemann_core::{lax_check, specific_vorticity, to_physical, AzimuthalPoint};

pub const CURVES_HEADER: [&str; 11] =
    ["t", "s", "sdot", "s1", "s2", "jump_w", "mean_w", "z_minus", "k_minus", "entropy_jump", "lax_ok"];

pub const SNAPSHOT_HEADER: [&str; 13] =
    ["theta", "y", "w", "z", "k", "a", "u_theta", "u_r", "rho", "p", "S", "varpi", "region"];

/// Full-precision scientific formatting.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub t: f64,
    pub s: f64,
    pub sdot: f64,
    pub s1: f64,
    pub s2: f64,
    pub jump_w: f64,
    pub mean_w: f64,
    pub z_minus: f64,
    pub k_minus: f64,
    pub entropy_jump: f64,
    pub lax_ok: bool,
}

impl CurveRow {
    fn record(&self) -> Vec<String> {
        let mut r: Vec<String> = [
            self.t,
            self.s,
            self.sdot,
            self.s1,
            self.s2,
            self.jump_w,
            self.mean_w,
            self.z_minus,
            self.k_minus,
            self.entropy_jump,
        ]
        .iter()
        .map(|v| fmt_sci(*v))
        .collect();
        r.push(u8::from(self.lax_ok).to_string());
        r
    }
}

/// One row per time level. The weak curves are `NaN` when unavailable and
/// pinned to the pre-shock point at `t = 0`.
pub fn curve_rows(hist: &DevelopmentHistory, weak: Option<&WeakCurves>) -> Vec<CurveRow> {
    hist.levels
        .iter()
        .map(|l| {
            let tr = &l.traces;
            let left = AzimuthalPoint::new(tr.w_minus, l.jump.z_minus, l.jump.k_minus, tr.a_minus);
            let right = AzimuthalPoint::new(tr.w_plus, tr.z_plus, tr.k_plus, tr.a_plus);
            let lax_ok = l.t == 0.0 || lax_check(&left, &right, l.sdot).lax_ok();
            CurveRow {
                t: l.t,
                s: l.s,
                sdot: l.sdot,
                s1: weak.map_or(f64::NAN, |c| c.s1_at(l.t)),
                s2: weak.map_or(f64::NAN, |c| c.s2_at(l.t)),
                jump_w: tr.jump_w(),
                mean_w: tr.mean_w(),
                z_minus: l.jump.z_minus,
                k_minus: l.jump.k_minus,
                entropy_jump: l.jump.k_minus - tr.k_plus,
                lax_ok,
            }
        })
        .collect()
}

pub fn write_curves_csv(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CURVES_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(s: &str, row: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Io(format!("row {row}: cannot parse '{s}'")))
}

pub fn read_curves_csv(path: &Path) -> Result<Vec<CurveRow>> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != CURVES_HEADER {
        return Err(Error::Io(format!("unexpected curves header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let v: Vec<f64> = (0..10).map(|j| parse_f64(&rec[j], i)).collect::<Result<_>>()?;
        out.push(CurveRow {
            t: v[0],
            s: v[1],
            sdot: v[2],
            s1: v[3],
            s2: v[4],
            jump_w: v[5],
            mean_w: v[6],
            z_minus: v[7],
            k_minus: v[8],
            entropy_jump: v[9],
            lax_ok: &rec[10] == "1",
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Left of the weak rarefaction `s₁`: `z = k = 0`.
    LeftOfS1,
    /// Between `s₁` and the weak contact `s₂`: `k = 0`.
    S1ToS2,
    /// Between `s₂` and the shock.
    S2ToShock,
    /// Right of the shock.
    RightOfShock,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::LeftOfS1 => "left_of_s1",
            Region::S1ToS2 => "s1_to_s2",
            Region::S2ToShock => "s2_to_shock",
            Region::RightOfShock => "right_of_shock",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub theta: f64,
    pub y: f64,
    pub w: f64,
    pub z: f64,
    pub k: f64,
    pub a: f64,
    pub u_theta: f64,
    pub u_r: f64,
    pub rho: f64,
    pub p: f64,
    pub entropy: f64,
    pub varpi: f64,
    pub region: Region,
}

fn side_rows(
    ys: &[f64],
    interp: &SideInterp,
    s: f64,
    region: impl Fn(f64) -> Region,
    out: &mut Vec<SnapshotRow>,
) -> Result<()> {
    for (i, &y) in ys.iter().enumerate() {
        let pt = AzimuthalPoint::new(interp.values(0)[i], interp.values(1)[i], interp.values(2)[i], interp.values(3)[i]);
        let phys = to_physical(&pt, 1.0)?;
        let varpi = specific_vorticity(&pt, interp.deriv(y, A))?.varpi;
        let theta = s + y;
        out.push(SnapshotRow {
            theta,
            y,
            w: pt.w,
            z: pt.z,
            k: pt.k,
            a: pt.a,
            u_theta: phys.u_theta,
            u_r: phys.u_r,
            rho: phys.rho,
            p: phys.p,
            entropy: phys.entropy,
            varpi,
            region: region(theta),
        });
    }
    Ok(())
}

/// Nodal values of level `j` on both sides with the physical fields at
/// `r = 1`, ordered by angle.
pub fn snapshot_rows(hist: &DevelopmentHistory, j: usize, weak: Option<&WeakCurves>) -> Result<Vec<SnapshotRow>> {
    let l = &hist.levels[j];
    let (s1, s2) = weak.map_or((f64::NEG_INFINITY, f64::NEG_INFINITY), |c| (c.s1_at(l.t), c.s2_at(l.t)));
    let mut out = Vec::with_capacity(hist.y_left.len() + hist.y_right.len());
    let left_region = |theta: f64| {
        if theta < s1 {
            Region::LeftOfS1
        } else if theta < s2 {
            Region::S1ToS2
        } else {
            Region::S2ToShock
        }
    };
    side_rows(&hist.y_left, &l.left, l.s, left_region, &mut out)?;
    side_rows(&hist.y_right, &l.right, l.s, |_| Region::RightOfShock, &mut out)?;
    Ok(out)
}

pub fn write_snapshot_csv(path: &Path, rows: &[SnapshotRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SNAPSHOT_HEADER)?;
    for r in rows {
        let mut rec: Vec<String> =
            [r.theta, r.y, r.w, r.z, r.k, r.a, r.u_theta, r.u_r, r.rho, r.p, r.entropy, r.varpi]
                .iter()
                .map(|v| fmt_sci(*v))
                .collect();
        rec.push(r.region.as_str().to_owned());
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23, f64::MIN_POSITIVE, 4.000000000000001] {
            let s = fmt_sci(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }
}
