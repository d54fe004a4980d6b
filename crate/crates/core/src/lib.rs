//! Shock formation and shock development for the two-dimensional
//! compressible Euler equations under azimuthal symmetry.
//!
//! The solution is described by the Riemann variables `(w, z)`, the entropy
//! `k` and the radial-velocity coefficient `a`. The crate evolves smooth
//! data to the first (cusp) singularity, continues the solution past it as a
//! fitted shock with two weak-discontinuity curves, and provides the
//! diagnostics used to check the jump and cusp laws.

pub mod analysis_io;
pub mod burgers_preshock;
pub mod characteristics;
pub mod error;
pub mod field_solver;
pub mod jump_system;
pub mod numerics;
pub mod riemann_core;
pub mod shock_evolution;

pub use error::{Error, Result};
