use serde::{Deserialize, Serialize};

use crate::forcing::{ForcingError, ForcingSpec};
use crate::geometry::{frame, Crossing, Curve, CurveFrame, Polyline, Vec2};

/// The evolving curve with its cached frame and global term.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub curve: Curve,
    pub t: f64,
    pub h: f64,
    pub frame: CurveFrame,
    pub steps: usize,
}

impl FlowState {
    pub fn new(curve: Curve, spec: &ForcingSpec, t: f64) -> Result<Self, ForcingError> {
        let frame = frame(&curve)?;
        let h = spec.h_from_frame(&frame, t)?;
        Ok(FlowState { curve, t, h, frame, steps: 0 })
    }

    pub fn vertices(&self) -> &[Vec2] {
        self.curve.vertices()
    }
}

/// One row of the monitor time series. Unavailable values are NaN.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub step: usize,
    pub t: f64,
    pub length: f64,
    pub area: f64,
    pub h: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub kappa_abs_max: f64,
    pub energy: f64,
    pub min_ds: f64,
    pub theta_min: f64,
    pub theta_sup: f64,
    pub theta_defect: f64,
    /// `min d/ψ` on closed curves, `min d/l` on open ones.
    pub ratio_min: f64,
    pub deficit: f64,
    pub conserved_interp: f64,
    pub gage_residual: f64,
    pub bonnesen_gap: f64,
    /// False for the cheap samples taken every step near a blow-up.
    pub full: bool,
}

/// A recorded curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub vertices: Vec<Vec2>,
    pub kappa: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    SelfIntersection { crossing: Crossing },
    BlowUp { kappa_abs_max: f64, ds_ref: f64, collapsed: bool },
    Converged { deviation: f64 },
    ConvexityOnset,
    ConvexityLost { kappa_min: f64 },
    NegativeForcing { h: f64 },
    ForcingOutOfWindow { message: String },
    TruncationWarning { drift: f64 },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::SelfIntersection { .. } => "self_intersection",
            EventKind::BlowUp { .. } => "blow_up",
            EventKind::Converged { .. } => "converged",
            EventKind::ConvexityOnset => "convexity_onset",
            EventKind::ConvexityLost { .. } => "convexity_lost",
            EventKind::NegativeForcing { .. } => "negative_forcing",
            EventKind::ForcingOutOfWindow { .. } => "forcing_out_of_window",
            EventKind::TruncationWarning { .. } => "truncation_warning",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub step: usize,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TMax,
    Converged,
    SelfIntersection,
    BlowUp,
    ForcingOutOfWindow,
    StepLimit,
}

/// Everything recorded during a run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub closed: bool,
    pub forcing: ForcingSpec,
    pub n: usize,
    pub ds_ref: f64,
    pub samples: Vec<Sample>,
    pub snapshots: Vec<Snapshot>,
    pub events: Vec<Event>,
    pub stop: StopReason,
    pub final_state: FlowState,
}

impl Trajectory {
    pub fn first_event(&self, name: &str) -> Option<&Event> {
        self.events.iter().find(|e| e.kind.name() == name)
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.first_event(name).is_some()
    }

    /// Samples that carry every monitor column.
    pub fn full_samples(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.full)
    }
}
