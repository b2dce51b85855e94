use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    bonnesen_gap, chord_arc_min, chord_psi_min, conserved_interpolant, gage_residual, isoperimetric_deficit,
    theta_extremes, MonitorError, PairRatioReport,
};
use crate::geometry::{enclosed_area, is_convex, is_simple, length, radii, Curve, Simplicity};

/// Every certificate the curve supports, evaluated from the vertices alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub closed: bool,
    pub vertices: usize,
    pub length: f64,
    pub ratio: PairRatioReport,
    pub theta_min: f64,
    pub theta_sup: f64,
    pub theta_identity_defect: Option<f64>,
    /// θ_min below −π.
    pub violates_theta_condition: bool,
    pub area: Option<f64>,
    pub deficit: Option<f64>,
    pub gamma: f64,
    pub conserved_interp: Option<f64>,
    pub convex: Option<bool>,
    pub gage_residual: Option<f64>,
    pub bonnesen_gap: Option<f64>,
    pub r_in: Option<f64>,
    pub r_circ: Option<f64>,
}

/// Builds a [`CertificateReport`]. `gamma` weights the conserved interpolant.
///
/// Non-simple curves are rejected before anything else is computed. Convexity
/// certificates are `None` on non-convex or open curves.
pub fn certify(curve: &Curve, gamma: f64) -> Result<CertificateReport, MonitorError> {
    if let Simplicity::Crossing(c) = is_simple(curve) {
        return Err(MonitorError::NotSimple(c));
    }
    let th = theta_extremes(curve);
    let len = length(curve);
    let mut r = CertificateReport {
        closed: false,
        vertices: crate::geometry::Polyline::len(curve),
        length: len,
        ratio: PairRatioReport {
            kind: super::RatioKind::DOverL,
            min_value: 1.0,
            argmin: (0, 0),
            truncated: true,
            matrix: None,
        },
        theta_min: th.theta_min,
        theta_sup: th.theta_sup,
        theta_identity_defect: th.identity_defect,
        violates_theta_condition: th.theta_min < -PI,
        area: None,
        deficit: None,
        gamma,
        conserved_interp: None,
        convex: None,
        gage_residual: None,
        bonnesen_gap: None,
        r_in: None,
        r_circ: None,
    };
    match curve {
        Curve::Open(c) => r.ratio = chord_arc_min(c),
        Curve::Closed(c) => {
            let a = enclosed_area(c)?;
            r.closed = true;
            r.ratio = chord_psi_min(c);
            r.area = Some(a);
            r.deficit = Some(isoperimetric_deficit(len, a));
            r.conserved_interp = Some(conserved_interpolant(gamma, a, len));
            let convex = is_convex(c);
            r.convex = Some(convex);
            if convex {
                let (ri, rc) = radii(c)?;
                r.r_in = Some(ri);
                r.r_circ = Some(rc);
                r.gage_residual = Some(gage_residual(c)?);
                r.bonnesen_gap = Some(bonnesen_gap(c)?);
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ClosedCurve, Vec2};

    #[test]
    fn circle_report() {
        let c = ClosedCurve::new((0..256).map(|i| Vec2::from_angle(2.0 * PI * i as f64 / 256.0)).collect()).unwrap();
        let r = certify(&c.into(), 0.0).unwrap();
        assert!((r.ratio.min_value - 1.0).abs() < 1e-6);
        assert_eq!(r.theta_min, 0.0);
        assert!(!r.violates_theta_condition);
        assert!(r.gage_residual.unwrap().abs() < 1e-4);
        assert!(r.theta_identity_defect.unwrap() <= 1e-12);
    }

    #[test]
    fn figure_eight_rejected() {
        let v: Vec<Vec2> = (0..200)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 200.0;
                Vec2::new(t.sin(), (2.0 * t).sin() * 0.5)
            })
            .collect();
        // Zero signed area, so build through the raw constructor.
        let c = ClosedCurve::from_raw(v);
        match certify(&c.into(), 0.0) {
            Err(MonitorError::NotSimple(x)) => assert!(x.edges.0 < x.edges.1),
            other => panic!("{other:?}"),
        }
    }
}
