//! Polygonal curves and the geometric quantities computed on them.

mod curve;
mod frame;
mod measure;
mod radii;
mod resample;
mod simple;
mod vec2;

pub use curve::{ClosedCurve, Curve, OpenCurve, OpenMeta, Polyline, ANGLE_TOL, GAP_TOL};
pub use frame::{angle_of, frame, length, tangent_angle, CurveFrame};
pub use measure::{enclosed_area, turning_angle, TurningTable};
pub use radii::{is_convex, max_inscribed_circle, min_enclosing_circle, radii, Circle, CONVEX_TOL};
pub use resample::{
    approx_length, equal_chord_points, resample_points, resample_uniform, Path, PolylinePath, Resample,
};
pub use simple::{is_simple, Crossing, Simplicity};
pub use vec2::Vec2;

pub(crate) use curve::signed_area;
pub(crate) use frame::frame_of;
pub(crate) use radii::min_turning;
pub(crate) use simple::simplicity_of;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { got: usize, min: usize },
    #[error("vertex {index} is not finite")]
    NonFinite { index: usize },
    #[error("edge {index} is degenerate (length below tolerance)")]
    DegenerateEdge { index: usize },
    #[error("curve encloses zero area")]
    ZeroArea,
    #[error("negative orientation (signed area {signed_area})")]
    Orientation { signed_area: f64 },
    #[error("total curvature {alpha} outside the admissible range")]
    AlphaOutOfRange { alpha: f64 },
    #[error("axis must be a nonzero finite vector")]
    BadAxis,
    #[error("end {end}: tangent makes angle {got} with the axis, expected {expected}")]
    EndAngle { end: usize, expected: f64, got: f64 },
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("curve is not convex (turning angle {min_turning})")]
    NotConvex { min_turning: f64 },
    #[error("equal-chord resampling did not converge")]
    ResampleFailed,
}
