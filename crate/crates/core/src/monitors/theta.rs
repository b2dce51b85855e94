use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{Polyline, TurningTable};

/// Extremes of the local total curvature θ over vertex pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaExtremes {
    pub theta_min: f64,
    pub theta_sup: f64,
    pub argmin: (usize, usize),
    pub argsup: (usize, usize),
    /// `|θ_sup − (2π − θ_min)|`, closed curves only.
    pub identity_defect: Option<f64>,
}

/// Brute-force θ extremes.
///
/// Closed curves scan all ordered pairs. The diagonal contributes 0 to the
/// minimum and its one-sided limit (the total turning) to the supremum.
/// Open curves scan pairs `i ≤ j` with θ(i, i) = 0.
pub fn theta_extremes<C: Polyline + ?Sized>(curve: &C) -> ThetaExtremes {
    theta_extremes_of(&TurningTable::new(curve), curve.is_closed())
}

pub(crate) fn theta_extremes_of(t: &TurningTable, closed: bool) -> ThetaExtremes {
    let n = t.len();
    let (mut lo, mut hi) = (0.0, if closed { t.total() } else { 0.0 });
    let (mut argmin, mut argsup) = ((0, 0), (0, 0));
    for i in 0..n {
        let start = if closed { 0 } else { i + 1 };
        for j in start..n {
            if i == j {
                continue;
            }
            let th = t.theta(i, j);
            if th < lo {
                lo = th;
                argmin = (i, j);
            }
            if th > hi {
                hi = th;
                argsup = (i, j);
            }
        }
    }
    let identity_defect = closed.then(|| (hi - (2.0 * PI - lo)).abs());
    ThetaExtremes { theta_min: lo, theta_sup: hi, argmin, argsup, identity_defect }
}
