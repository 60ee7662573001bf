//! Batch verification front end: each command evaluates a set of defects at
//! sample points and compares them with tolerances.

pub mod args;
mod commands;
pub mod config;
pub mod report;

pub use args::Args;
pub use commands::run;
pub use config::{Command, ConfigError, RunConfig};
pub use report::Report;
