//! Experiment drivers behind the `kleinvortex` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
