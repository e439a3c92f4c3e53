//! Declarative experiment runner for the preinvex Ostrowski bounds: TOML
//! configs, cached certifications, CSV/JSON reports and the built-in
//! `paper` suite of acceptance checks.

pub mod config;
pub mod report;
pub mod runner;
pub mod suite;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub use config::{ExperimentConfig, FunctionSpec, OutputFormat, OutputSpec};
pub use report::{emit_report, CaseCertification, Provenance, Row, RunReport, Summary, CSV_HEADER};
pub use runner::run_experiment;
