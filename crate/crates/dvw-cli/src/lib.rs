//! Command-line front end for the diffusive viscous wave solver.

pub mod commands;
pub mod config;

pub use commands::{CliError, Outcome};
pub use config::{ConfigError, RunConfig};
