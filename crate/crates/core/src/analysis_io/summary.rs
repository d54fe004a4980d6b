//! Jump time series extracted from a development history and the JSON run
//! summary.

use serde::{Deserialize, Serialize};

use crate::analysis_io::audit::{admissibility_audit, holder_exponents, LadderSpec, Pointwise, AUDIT_SUBSTEPS};
use crate::burgers_preshock::CuspDatum;
use crate::field_solver::{DevelopmentHistory, FormationResult};
use crate::jump_system::{jump_scaling_report, JumpScalingReport};
use crate::error::Result;
use crate::shock_evolution::EvolveOutcome;

/// Jumps across the shock (left minus right) at the levels in a time window.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JumpSeries {
    pub t: Vec<f64>,
    pub jump_w: Vec<f64>,
    pub mean_w: Vec<f64>,
    pub jump_z: Vec<f64>,
    pub jump_k: Vec<f64>,
    pub jump_dtheta_a: Vec<f64>,
    pub z_minus: Vec<f64>,
    pub k_minus: Vec<f64>,
}

pub fn jump_series(hist: &DevelopmentHistory, t_lo: f64, t_hi: f64) -> JumpSeries {
    let mut s = JumpSeries::default();
    for l in hist.levels.iter().filter(|l| l.t > 0.0 && l.t >= t_lo && l.t <= t_hi) {
        let tr = &l.traces;
        s.t.push(l.t);
        s.jump_w.push(tr.jump_w());
        s.mean_w.push(tr.mean_w());
        s.jump_z.push(l.jump.z_minus - tr.z_plus);
        s.jump_k.push(l.jump.k_minus - tr.k_plus);
        s.jump_dtheta_a.push(tr.jump_da());
        s.z_minus.push(l.jump.z_minus);
        s.k_minus.push(l.jump.k_minus);
    }
    s
}

/// Lower end of the fit window for the jump laws: slightly more than one
/// decade below `t_end`, so the window always spans a full decade.
pub fn jump_window_start(t_end: f64) -> f64 {
    t_end / 10.5
}

/// Power-law fits of the four jumps over the last decade of the run.
pub fn jump_fits(hist: &DevelopmentHistory) -> Result<JumpScalingReport> {
    let t_end = hist.t_end();
    let s = jump_series(hist, jump_window_start(t_end), t_end);
    jump_scaling_report(&s.t, &s.jump_w, &s.jump_z, &s.jump_k, &s.jump_dtheta_a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub jump_w: Option<f64>,
    pub jump_z: Option<f64>,
    pub jump_k: Option<f64>,
    pub jump_dtheta_a: Option<f64>,
    pub holder_s1_z: Option<f64>,
    pub holder_s2_k: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilitySummary {
    pub lax_all: bool,
    pub entropy_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationSummary {
    pub inner_max: usize,
    pub outer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: String,
    #[serde(rename = "T_star", default, skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Exponents>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilitySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<IterationSummary>,
}

impl Summary {
    pub fn new(mode: &str) -> Self {
        Summary { mode: mode.to_owned(), t_star: None, xi_star: None, exponents: None, admissibility: None, iterations: None }
    }

    pub fn with_formation(mut self, f: &FormationResult) -> Self {
        self.t_star = Some(f.t_star);
        self.xi_star = Some(f.xi_star);
        self
    }

    /// Jump exponents over the last decade, Hölder exponents at `t_end`,
    /// admissibility over all levels and the iteration counts.
    pub fn with_development(mut self, out: &EvolveOutcome, datum: &CuspDatum) -> Result<Self> {
        let hist = &out.history;
        let fits = jump_fits(hist).ok();
        let pw = Pointwise::new(hist, datum, AUDIT_SUBSTEPS);
        let holder = holder_exponents(&pw, hist.t_end(), &LadderSpec::default()).ok();
        self.exponents = Some(Exponents {
            jump_w: fits.map(|f| f.jump_w.exponent),
            jump_z: fits.map(|f| f.jump_z.exponent),
            jump_k: fits.map(|f| f.jump_k.exponent),
            jump_dtheta_a: fits.map(|f| f.jump_dtheta_a.exponent),
            holder_s1_z: holder.as_ref().map(|h| h.z_at_s1.exponent),
            holder_s2_k: holder.as_ref().map(|h| h.k_at_s2.exponent),
        });
        let adm = admissibility_audit(hist)?;
        self.admissibility = Some(AdmissibilitySummary { lax_all: adm.lax_all, entropy_positive: adm.entropy_positive });
        self.iterations = Some(IterationSummary { inner_max: out.inner_max(), outer: out.outer_increments.len() });
        Ok(self)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}
