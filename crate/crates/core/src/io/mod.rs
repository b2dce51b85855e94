//! Run configuration, CSV/JSON artifacts and the commands behind the binary.
//! The only part of the crate that touches the file system.

mod artifacts;
mod commands;
mod config;
mod curve_csv;

pub use artifacts::{read_snapshots, write_artifacts, EventLog, Measures, Minima, Summary, EVENTS_SCHEMA};
pub use commands::{
    cmd_certify, cmd_rescale, cmd_run, cmd_scenario_emit, cmd_scenario_list, cmd_sweep, parse_set, RunOutcome,
    SweepReport, SweepRun,
};
pub use config::{load_config, parse_config, RunConfig, ScenarioSource, OUT_DIR_ENV};
pub use curve_csv::{load_curve, read_curve_csv, save_curve, write_curve_csv};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::flow::FlowError;
use crate::forcing::ForcingError;
use crate::geometry::GeometryError;
use crate::monitors::MonitorError;
use crate::scenarios::ScenarioError;
use crate::singularity::SingularityError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", .path.display())]
    File { path: PathBuf, source: std::io::Error },
    #[error("{}: {message}", .path.display())]
    Format { path: PathBuf, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Forcing(#[from] ForcingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, message: impl ToString) -> Self {
        IoError::Format { path: path.to_path_buf(), message: message.to_string() }
    }
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    std::fs::write(path, bytes).map_err(|e| IoError::file(path, e))
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| IoError::format(path, e))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    serde_json::from_str(&text).map_err(|e| IoError::format(path, e))
}

pub(crate) fn create_dir(path: &Path) -> Result<(), IoError> {
    std::fs::create_dir_all(path).map_err(|e| IoError::file(path, e))
}
