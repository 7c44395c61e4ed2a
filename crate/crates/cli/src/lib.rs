//! Scenario runner for `fracslice-core`: configuration, the scenario
//! registry and residual reports.

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{Format, RunConfig, Setup};
pub use report::{Record, ScenarioReport};
pub use scenarios::{run_scenario, Scenario, REGISTRY};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fracslice_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Usage(m) => m.clone(),
            other => other.to_string(),
        }
    }
}
