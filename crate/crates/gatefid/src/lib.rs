//! Experiment runner for `gatefid-core`.
//!
//! A run reads one JSON config, builds the ideal gate and its noisy
//! implementation, and writes `report.json` plus an optional CSV. Reports
//! are byte-identical for a given config and seed, whatever the thread
//! count.

pub mod config;
pub mod error;
pub mod executor;
pub mod report;
pub mod runner;

pub use config::{Config, Mode};
pub use error::CliError;
pub use executor::RayonExecutor;
pub use runner::{run_file, run_text, Outcome, Overrides};
