use std::f64::consts::PI;

use super::MonitorError;
use crate::geometry::{enclosed_area, length, min_turning, radii, ClosedCurve, Polyline, Vec2, CONVEX_TOL};

/// `(1−γ) A + γ L² / 4π`.
pub fn conserved_interpolant(gamma: f64, area: f64, len: f64) -> f64 {
    (1.0 - gamma) * area + gamma * len * len / (4.0 * PI)
}

/// `L²/4π − A`.
pub fn isoperimetric_deficit(len: f64, area: f64) -> f64 {
    len * len / (4.0 * PI) - area
}

/// `L²/(4N tan(π/N)) − A`: the deficit against the regular N-gon of the same
/// perimeter, which is the optimum among N-gons. Zero on regular polygons.
pub fn polygon_deficit(len: f64, area: f64, n: usize) -> f64 {
    let nf = n as f64;
    len * len / (4.0 * nf * (PI / nf).tan()) - area
}

fn require_convex(curve: &ClosedCurve) -> Result<(), MonitorError> {
    let m = min_turning(curve.vertices());
    if m < CONVEX_TOL {
        return Err(MonitorError::NotConvex { min_turning: m });
    }
    Ok(())
}

/// Length, area and `∫κ² ds` of the curve through the vertices obtained by
/// replacing each edge with a circular arc. The arc curvature is the mean of
/// the circumcircle curvatures at the two end vertices, so a regular polygon
/// is read as its circumscribed circle.
pub fn arc_quadrature(v: &[Vec2]) -> (f64, f64, f64) {
    let n = v.len();
    let menger: Vec<f64> = (0..n)
        .map(|i| {
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            let u = b - a;
            let w = c - b;
            let sin = u.cross(w) / (u.norm() * w.norm());
            2.0 * sin / c.dist(a)
        })
        .collect();
    let base_area = {
        let o = v[0];
        0.5 * (0..n).map(|i| (v[i] - o).cross(v[(i + 1) % n] - o)).sum::<f64>()
    };
    let (mut len, mut seg, mut energy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let e = v[i].dist(v[(i + 1) % n]);
        let k = 0.5 * (menger[i] + menger[(i + 1) % n]);
        let x = (0.5 * k * e).clamp(-1.0, 1.0);
        let (ell, cap) = if x.abs() < 1e-6 {
            // Series in x = k e / 2 around the straight edge.
            (e * (1.0 + x * x / 6.0), e * e * x / 6.0)
        } else {
            let half = x.asin();
            (2.0 * half / k, (2.0 * half - (2.0 * half).sin()) / (2.0 * k * k))
        };
        len += ell;
        seg += cap;
        energy += k * k * ell;
    }
    (len, base_area + seg, energy)
}

/// `∫κ² ds − π L / A` on a convex curve, evaluated with [`arc_quadrature`].
pub fn gage_residual(curve: &ClosedCurve) -> Result<f64, MonitorError> {
    require_convex(curve)?;
    let (l, a, e) = arc_quadrature(curve.vertices());
    Ok(e - PI * l / a)
}

/// `L²/A − 4π − π² (r_circ − r_in)² / A` on a convex polygon.
pub fn bonnesen_gap(curve: &ClosedCurve) -> Result<f64, MonitorError> {
    let (r_in, r_circ) = radii(curve)?;
    let l = length(curve);
    let a = enclosed_area(curve)?;
    Ok(l * l / a - 4.0 * PI - PI * PI * (r_circ - r_in).powi(2) / a)
}
