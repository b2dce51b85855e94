use std::f64::consts::PI;

use super::curve::{bbox_diameter, Polyline, GAP_TOL};
use super::{GeometryError, Vec2};

/// Per-vertex differential data of a polygonal curve.
///
/// Curvature is the turning angle at a vertex divided by the dual length
/// (half the two adjacent edges), so `Σ kappa_i * dual_i` is the total
/// turning exactly. Tangents are centred chords; `nu` is the outward normal
/// `(τ₂, −τ₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFrame {
    pub closed: bool,
    /// Arclength at each vertex, starting from 0 at vertex 0.
    pub s: Vec<f64>,
    /// Edge lengths; edge `i` joins vertex `i` to vertex `i + 1`.
    pub ds: Vec<f64>,
    /// Vertex-centred length elements.
    pub dual: Vec<f64>,
    /// Half the centred chord `|X_{i+1} − X_{i−1}| / 2`.
    pub half_chord: Vec<f64>,
    pub tau: Vec<Vec2>,
    pub nu: Vec<Vec2>,
    /// Signed exterior angle at each vertex, in `(−π, π)`.
    pub turning: Vec<f64>,
    pub kappa: Vec<f64>,
    /// `∂L/∂X_i · ν_i` scaled like the normal velocity, so that a motion with
    /// normal speed `v_i` changes the length at rate `Σ v_i * length_weight_i`.
    /// Zero at the ends of an open curve.
    pub length_weight: Vec<f64>,
    pub length: f64,
}

impl CurveFrame {
    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    /// Sum of the turning angles.
    pub fn total_turning(&self) -> f64 {
        self.turning.iter().sum()
    }

    pub fn kappa_min(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn kappa_abs_max(&self) -> f64 {
        self.kappa.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    pub fn min_ds(&self) -> f64 {
        self.ds.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ κ_i² Δs_i` with the vertex-centred length element.
    pub fn energy(&self) -> f64 {
        self.kappa.iter().zip(&self.dual).map(|(k, m)| k * k * m).sum()
    }

    /// `(Σ w_i, Σ κ_i w_i)` over the length weights; the polygonal stand-ins
    /// for `2π` and `∫κ²` in `dL/dt = hΣw − Σκw`.
    pub fn length_sums(&self) -> (f64, f64) {
        self.length_weight.iter().zip(&self.kappa).fold((0.0, 0.0), |(a, b), (w, k)| (a + w, b + k * w))
    }

    /// Tangent angle in `[0, 2π)` at vertex `i`.
    pub fn tangent_angle(&self, i: usize) -> f64 {
        angle_of(self.tau[i])
    }
}

/// Angle of a unit vector measured from `e₁`, in `[0, 2π)`.
pub fn angle_of(t: Vec2) -> f64 {
    let mut a = t.y.atan2(t.x);
    if a < 0.0 {
        a += 2.0 * PI;
    }
    if a >= 2.0 * PI || a == 0.0 {
        a = 0.0;
    }
    a
}

/// Turning angle from direction `a` to direction `b`.
#[inline]
pub(crate) fn turn(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

pub(crate) fn frame_of(v: &[Vec2], closed: bool) -> Result<CurveFrame, GeometryError> {
    let n = v.len();
    let tol = GAP_TOL * bbox_diameter(v);
    let ne = if closed { n } else { n - 1 };
    let mut ds = Vec::with_capacity(ne);
    let mut edges = Vec::with_capacity(ne);
    for i in 0..ne {
        let e = v[(i + 1) % n] - v[i];
        let l = e.norm();
        if !(l > tol) {
            return Err(GeometryError::DegenerateEdge { index: i });
        }
        ds.push(l);
        edges.push(e);
    }
    let mut s = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        s.push(acc);
        if i < ne {
            acc += ds[i];
        }
    }
    let length: f64 = ds.iter().sum();

    let mut dual = vec![0.0; n];
    let mut half_chord = vec![0.0; n];
    let mut tau = vec![Vec2::ZERO; n];
    let mut turning = vec![0.0; n];
    let mut kappa = vec![0.0; n];
    let mut length_weight = vec![0.0; n];
    for i in 0..n {
        let (prev, next) = if closed {
            (Some((i + n - 1) % n), Some(i))
        } else {
            (i.checked_sub(1), if i + 1 < n { Some(i) } else { None })
        };
        match (prev, next) {
            (Some(p), Some(q)) => {
                let chord = edges[p] + edges[q];
                dual[i] = 0.5 * (ds[p] + ds[q]);
                half_chord[i] = 0.5 * chord.norm();
                tau[i] = chord / (2.0 * half_chord[i]);
                turning[i] = turn(edges[p], edges[q]);
                kappa[i] = turning[i] / dual[i];
                let pull = edges[p] / ds[p] - edges[q] / ds[q];
                length_weight[i] = dual[i] / half_chord[i] * tau[i].outward().dot(pull);
            }
            (None, Some(q)) => {
                dual[i] = 0.5 * ds[q];
                half_chord[i] = dual[i];
                tau[i] = edges[q] / ds[q];
            }
            (Some(p), None) => {
                dual[i] = 0.5 * ds[p];
                half_chord[i] = dual[i];
                tau[i] = edges[p] / ds[p];
            }
            (None, None) => unreachable!(),
        }
    }
    let nu = tau.iter().map(|t| t.outward()).collect();
    Ok(CurveFrame { closed, s, ds, dual, half_chord, tau, nu, turning, kappa, length_weight, length })
}

/// Arclength, tangents, outward normals and curvature at every vertex.
pub fn frame<C: Polyline + ?Sized>(curve: &C) -> Result<CurveFrame, GeometryError> {
    frame_of(curve.vertices(), curve.is_closed())
}

/// Sum of edge lengths.
pub fn length<C: Polyline + ?Sized>(curve: &C) -> f64 {
    let v = curve.vertices();
    let n = v.len();
    let ne = curve.edge_count();
    (0..ne).map(|i| v[i].dist(v[(i + 1) % n])).sum()
}

/// Tangent angle at vertex `i`, in `[0, 2π)`.
pub fn tangent_angle<C: Polyline + ?Sized>(curve: &C, i: usize) -> Result<f64, GeometryError> {
    let v = curve.vertices();
    let n = v.len();
    if i >= n {
        return Err(GeometryError::IndexOutOfRange { index: i, len: n });
    }
    let (a, b) = if curve.is_closed() {
        (v[(i + n - 1) % n], v[(i + 1) % n])
    } else {
        (v[i.saturating_sub(1)], v[(i + 1).min(n - 1)])
    };
    let c = b - a;
    if !(c.norm() > 0.0) {
        return Err(GeometryError::DegenerateEdge { index: i });
    }
    Ok(angle_of(c.normalized()))
}
