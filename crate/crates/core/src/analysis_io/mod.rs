//! Verification analytics, configuration, file emitters and the CLI.

pub mod audit;
pub mod cli;
pub mod config;
pub mod emit;
pub mod fit;
pub mod summary;
pub mod verify;
