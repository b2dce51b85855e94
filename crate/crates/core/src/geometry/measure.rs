use super::curve::{signed_area, Polyline};
use super::frame::turn;
use super::{ClosedCurve, GeometryError};

/// Shoelace area of a positively oriented closed curve.
pub fn enclosed_area(curve: &ClosedCurve) -> Result<f64, GeometryError> {
    let a = signed_area(curve.vertices());
    if a <= 0.0 {
        return Err(GeometryError::Orientation { signed_area: a });
    }
    Ok(a)
}

/// Cumulative turning used to evaluate the local total curvature θ(i, j).
///
/// Each vertex contributes half its exterior angle to either side, so on a
/// closed curve `θ(i, j) + θ(j, i)` is the total turning for every `i ≠ j`.
#[derive(Clone, Debug)]
pub struct TurningTable {
    closed: bool,
    q: Vec<f64>,
    total: f64,
}

impl TurningTable {
    pub fn new<C: Polyline + ?Sized>(curve: &C) -> Self {
        let v = curve.vertices();
        let n = v.len();
        let closed = curve.is_closed();
        let mut phi = vec![0.0; n];
        for i in 0..n {
            if closed {
                let a = v[i] - v[(i + n - 1) % n];
                let b = v[(i + 1) % n] - v[i];
                phi[i] = turn(a, b);
            } else if i > 0 && i + 1 < n {
                phi[i] = turn(v[i] - v[i - 1], v[i + 1] - v[i]);
            }
        }
        Self::from_turning(&phi, closed)
    }

    pub fn from_turning(phi: &[f64], closed: bool) -> Self {
        let mut q = Vec::with_capacity(phi.len());
        let mut acc = 0.0;
        for &p in phi {
            q.push(acc + 0.5 * p);
            acc += p;
        }
        TurningTable { closed, q, total: acc }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Total turning of the whole curve.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// θ(i, j), integrating forward from `i` to `j`. Zero on the diagonal.
    /// For open curves and `j < i` the integral runs backwards and is negated.
    #[inline]
    pub fn theta(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else if i < j || !self.closed {
            self.q[j] - self.q[i]
        } else {
            self.total - (self.q[i] - self.q[j])
        }
    }
}

/// Local total curvature θ(i, j) between vertices `i` and `j`.
pub fn turning_angle<C: Polyline + ?Sized>(curve: &C, i: usize, j: usize) -> Result<f64, GeometryError> {
    let n = curve.len();
    for k in [i, j] {
        if k >= n {
            return Err(GeometryError::IndexOutOfRange { index: k, len: n });
        }
    }
    Ok(TurningTable::new(curve).theta(i, j))
}
