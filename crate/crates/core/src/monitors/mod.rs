//! Certificate functionals evaluated on a single curve or a recorded run.

mod convergence;
mod isoperimetric;
mod ratios;
mod report;
mod theta;

pub use convergence::{convergence_report, ConvergenceReport, ConvergenceRow, DecayFit};
pub use isoperimetric::{
    arc_quadrature, bonnesen_gap, conserved_interpolant, gage_residual, isoperimetric_deficit, polygon_deficit,
};
pub use ratios::{chord_arc_matrix, chord_arc_min, chord_psi_matrix, chord_psi_min, psi, PairRatioReport, RatioKind};
pub use report::{certify, CertificateReport};
pub use theta::{theta_extremes, ThetaExtremes};

pub(crate) use theta::theta_extremes_of;

use thiserror::Error;

use crate::geometry::{Crossing, GeometryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonitorError {
    #[error("ψ undefined for l = {l} on a curve of length {total}")]
    PsiDomain { l: f64, total: f64 },
    #[error("curve is not simple: edges {} and {} cross at ({}, {})", .0.edges.0, .0.edges.1, .0.point.x, .0.point.y)]
    NotSimple(Crossing),
    #[error("curve is not convex (turning angle {min_turning})")]
    NotConvex { min_turning: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
