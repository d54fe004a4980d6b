//! PDE solver in two modes: smooth formation of the pre-shock in Lagrangian
//! variables, and development of the fitted shock solution on a
//! shock-adapted grid.

pub mod develop;
pub mod formation;
pub mod grid;

pub use develop::{
    develop_fields, initial_iterate, DevelopOutcome, DevelopParams, DevelopmentHistory, LevelRecord, RiemannState,
};
pub use formation::{
    detect_blowup, formation_step, run_formation, FormationMode, FormationParams, FormationResult, LabelState,
};
pub use grid::{shock_side_traces, GridSpec, LevelFields, ShockSideTraces, SideFields, SideInterp};
