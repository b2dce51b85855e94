//! Time stepping of `∂X/∂t = (h − κ)ν` for closed and open polygons.

mod config;
mod engine;
mod state;

pub use config::{MonitorToggles, RecordConfig, Scheme, StepConfig, StopRule};
pub use engine::{evolve_open, run, stable_dt, step, StepError};
pub use state::{Event, EventKind, FlowState, Sample, Snapshot, StopReason, Trajectory};

use thiserror::Error;

use crate::forcing::ForcingError;
use crate::geometry::{Crossing, GeometryError};

/// Reasons a run cannot start. Everything after the start is an event.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid step configuration: {0}")]
    Config(String),
    #[error("initial curve is not simple: edges {} and {} cross", .0.edges.0, .0.edges.1)]
    NotSimple(Crossing),
    #[error("open curves need h ≥ 0, got {0}")]
    NegativeOpenForcing(f64),
    #[error(transparent)]
    Forcing(#[from] ForcingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
