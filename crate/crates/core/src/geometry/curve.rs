use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{GeometryError, Vec2};

/// Relative gap (against the bounding-box diameter) below which two
/// consecutive vertices count as coincident.
pub const GAP_TOL: f64 = 1e-12;

/// Tolerance on the end-tangent angles of an [`OpenCurve`].
pub const ANGLE_TOL: f64 = 1e-6;

/// Anything that is an ordered list of vertices, closed or not.
pub trait Polyline {
    fn vertices(&self) -> &[Vec2];
    fn is_closed(&self) -> bool;

    fn len(&self) -> usize {
        self.vertices().len()
    }

    fn is_empty(&self) -> bool {
        self.vertices().is_empty()
    }

    fn edge_count(&self) -> usize {
        if self.is_closed() {
            self.len()
        } else {
            self.len() - 1
        }
    }
}

pub(crate) fn bbox_diameter(v: &[Vec2]) -> f64 {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in v {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    (x1 - x0).hypot(y1 - y0)
}

pub(crate) fn signed_area(v: &[Vec2]) -> f64 {
    let o = v[0];
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = v[i] - o;
        let b = v[(i + 1) % n] - o;
        acc += a.cross(b);
    }
    0.5 * acc
}

fn check_vertices(v: &[Vec2], closed: bool, min: usize) -> Result<(), GeometryError> {
    if v.len() < min {
        return Err(GeometryError::TooFewVertices { got: v.len(), min });
    }
    if let Some(i) = v.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite { index: i });
    }
    let tol = GAP_TOL * bbox_diameter(v);
    let n = v.len();
    let edges = if closed { n } else { n - 1 };
    for i in 0..edges {
        if v[i].dist(v[(i + 1) % n]) <= tol {
            return Err(GeometryError::DegenerateEdge { index: i });
        }
    }
    Ok(())
}

/// A closed polygonal curve, positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    vertices: Vec<Vec2>,
}

impl ClosedCurve {
    pub const MIN_VERTICES: usize = 16;

    /// Validates the vertex list and reverses it if it runs clockwise.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        check_vertices(&vertices, true, Self::MIN_VERTICES)?;
        let a = signed_area(&vertices);
        if a == 0.0 || !a.is_finite() {
            return Err(GeometryError::ZeroArea);
        }
        if a < 0.0 {
            vertices.reverse();
        }
        Ok(ClosedCurve { vertices })
    }

    /// Places `n` equally spaced points on the polygon through `corners`.
    pub fn from_polygon(corners: &[Vec2], n: usize) -> Result<Self, GeometryError> {
        if corners.len() < 3 {
            return Err(GeometryError::TooFewVertices { got: corners.len(), min: 3 });
        }
        let pts = super::resample::resample_points(corners, true, n)?;
        ClosedCurve::new(pts)
    }

    /// Used by the flow engine, which keeps orientation by continuity.
    pub(crate) fn from_raw(vertices: Vec<Vec2>) -> Self {
        ClosedCurve { vertices }
    }

    pub fn into_vertices(self) -> Vec<Vec2> {
        self.vertices
    }

    pub fn scaled(&self, k: f64) -> Result<Self, GeometryError> {
        ClosedCurve::new(self.vertices.iter().map(|&p| p * k).collect())
    }

    pub fn translated(&self, d: Vec2) -> Result<Self, GeometryError> {
        ClosedCurve::new(self.vertices.iter().map(|&p| p + d).collect())
    }
}

impl Polyline for ClosedCurve {
    fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }
    fn is_closed(&self) -> bool {
        true
    }
}

/// Angle between two vectors, in `[0, π]`.
fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// Sidecar metadata of an open curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenMeta {
    pub alpha: f64,
    pub axis: Vec2,
}

/// A truncated open curve with fixed asymptotic directions.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenCurve {
    vertices: Vec<Vec2>,
    axis: Vec2,
    alpha: f64,
    end_dirs: [Vec2; 2],
    asymptotic: bool,
}

impl OpenCurve {
    pub const MIN_VERTICES: usize = 32;

    /// An open curve whose end edges already point along the asymptotic
    /// directions fixed by `axis` and `alpha`.
    pub fn new(vertices: Vec<Vec2>, axis: Vec2, alpha: f64) -> Result<Self, GeometryError> {
        check_vertices(&vertices, false, Self::MIN_VERTICES)?;
        if !(alpha.abs() < PI) {
            return Err(GeometryError::AlphaOutOfRange { alpha });
        }
        let axis = unit_axis(axis)?;
        let n = vertices.len();
        let t0 = (vertices[1] - vertices[0]).normalized();
        let t1 = (vertices[n - 1] - vertices[n - 2]).normalized();
        let want = [(PI - alpha) / 2.0, (PI + alpha) / 2.0];
        let got = [angle_between(t0, axis), angle_between(t1, axis)];
        for k in 0..2 {
            if (got[k] - want[k]).abs() > ANGLE_TOL {
                return Err(GeometryError::EndAngle { end: k, expected: want[k], got: got[k] });
            }
        }
        Ok(OpenCurve { vertices, axis, alpha, end_dirs: [t0, t1], asymptotic: true })
    }

    /// A truncation whose end edges are pinned as they are. No check of the
    /// asymptotic angles, and `alpha` may sit on the boundary ±π.
    pub fn truncated(vertices: Vec<Vec2>, axis: Vec2, alpha: f64) -> Result<Self, GeometryError> {
        check_vertices(&vertices, false, Self::MIN_VERTICES)?;
        if !(alpha.abs() <= PI) {
            return Err(GeometryError::AlphaOutOfRange { alpha });
        }
        let axis = unit_axis(axis)?;
        let n = vertices.len();
        let t0 = (vertices[1] - vertices[0]).normalized();
        let t1 = (vertices[n - 1] - vertices[n - 2]).normalized();
        Ok(OpenCurve { vertices, axis, alpha, end_dirs: [t0, t1], asymptotic: false })
    }

    /// Rebuilds from a sidecar: strict if the end angles match, truncated otherwise.
    pub fn from_meta(vertices: Vec<Vec2>, meta: OpenMeta) -> Result<Self, GeometryError> {
        match OpenCurve::new(vertices.clone(), meta.axis, meta.alpha) {
            Ok(c) => Ok(c),
            Err(GeometryError::EndAngle { .. }) | Err(GeometryError::AlphaOutOfRange { .. }) => {
                OpenCurve::truncated(vertices, meta.axis, meta.alpha)
            }
            Err(e) => Err(e),
        }
    }

    pub(crate) fn with_vertices(&self, vertices: Vec<Vec2>) -> Self {
        OpenCurve { vertices, ..self.clone() }
    }

    pub fn axis(&self) -> Vec2 {
        self.axis
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Pinned directions of the first and last edge.
    pub fn end_dirs(&self) -> [Vec2; 2] {
        self.end_dirs
    }

    /// True when the end edges sit at the asymptotic angles.
    pub fn is_asymptotic(&self) -> bool {
        self.asymptotic
    }

    /// Whether α lies in the open window (−π, π) the theory covers.
    pub fn in_alpha_window(&self) -> bool {
        self.alpha.abs() < PI
    }

    pub fn meta(&self) -> OpenMeta {
        OpenMeta { alpha: self.alpha, axis: self.axis }
    }

    pub fn into_vertices(self) -> Vec<Vec2> {
        self.vertices
    }
}

fn unit_axis(axis: Vec2) -> Result<Vec2, GeometryError> {
    let n = axis.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(GeometryError::BadAxis);
    }
    Ok(axis / n)
}

impl Polyline for OpenCurve {
    fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }
    fn is_closed(&self) -> bool {
        false
    }
}

/// Either kind of curve.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    Closed(ClosedCurve),
    Open(OpenCurve),
}

impl Curve {
    pub fn as_closed(&self) -> Option<&ClosedCurve> {
        match self {
            Curve::Closed(c) => Some(c),
            Curve::Open(_) => None,
        }
    }

    pub fn as_open(&self) -> Option<&OpenCurve> {
        match self {
            Curve::Open(c) => Some(c),
            Curve::Closed(_) => None,
        }
    }
}

impl Polyline for Curve {
    fn vertices(&self) -> &[Vec2] {
        match self {
            Curve::Closed(c) => c.vertices(),
            Curve::Open(c) => c.vertices(),
        }
    }
    fn is_closed(&self) -> bool {
        matches!(self, Curve::Closed(_))
    }
}

impl From<ClosedCurve> for Curve {
    fn from(c: ClosedCurve) -> Self {
        Curve::Closed(c)
    }
}

impl From<OpenCurve> for Curve {
    fn from(c: OpenCurve) -> Self {
        Curve::Open(c)
    }
}
