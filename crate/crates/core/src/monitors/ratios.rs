use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::MonitorError;
use crate::geometry::{frame, ClosedCurve, OpenCurve, Polyline};

/// `ψ(l, L) = (L/π) sin(π l / L)`, with `l` folded to `min(l, L − l)`.
pub fn psi(l: f64, total: f64) -> Result<f64, MonitorError> {
    if !(total > 0.0) || !(0.0..=total).contains(&l) {
        return Err(MonitorError::PsiDomain { l, total });
    }
    Ok(psi_folded(l.min(total - l), total))
}

#[inline]
fn psi_folded(l: f64, total: f64) -> f64 {
    total / PI * (PI * l / total).sin()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    DOverL,
    DOverPsi,
}

/// Minimum of a pair ratio over all vertex pairs, with its first argmin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRatioReport {
    pub kind: RatioKind,
    pub min_value: f64,
    /// `(p, q)` with `p ≤ q`; `(0, 0)` when the diagonal value 1 is the minimum.
    pub argmin: (usize, usize),
    /// Set for open curves: the infimum over the untruncated curve may be smaller.
    pub truncated: bool,
    /// Row-major `N × N` ratio matrix, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<f64>>,
}

fn scan<F: Fn(usize, usize) -> f64>(n: usize, ratio: F, keep: bool) -> (f64, (usize, usize), Option<Vec<f64>>) {
    let mut best = 1.0;
    let mut arg = (0, 0);
    let mut m = if keep { Some(vec![1.0; n * n]) } else { None };
    for p in 0..n {
        for q in p + 1..n {
            let r = ratio(p, q);
            if let Some(m) = m.as_mut() {
                m[p * n + q] = r;
                m[q * n + p] = r;
            }
            if r < best {
                best = r;
                arg = (p, q);
            }
        }
    }
    (best, arg, m)
}

fn psi_scan(curve: &ClosedCurve, keep: bool) -> PairRatioReport {
    let v = curve.vertices();
    let f = frame(curve).expect("valid closed curve has a frame");
    let total = f.length;
    let s = &f.s;
    let (min_value, argmin, matrix) = scan(
        v.len(),
        |p, q| {
            let l = s[q] - s[p];
            v[p].dist(v[q]) / psi_folded(l.min(total - l), total)
        },
        keep,
    );
    PairRatioReport { kind: RatioKind::DOverPsi, min_value, argmin, truncated: false, matrix }
}

/// `min d/ψ` over vertex pairs of a closed curve (diagonal ≡ 1).
pub fn chord_psi_min(curve: &ClosedCurve) -> PairRatioReport {
    psi_scan(curve, false)
}

/// As [`chord_psi_min`], also returning the full ratio matrix.
pub fn chord_psi_matrix(curve: &ClosedCurve) -> PairRatioReport {
    psi_scan(curve, true)
}

fn arc_scan(curve: &OpenCurve, keep: bool) -> PairRatioReport {
    let v = curve.vertices();
    let f = frame(curve).expect("valid open curve has a frame");
    let s = &f.s;
    let (min_value, argmin, matrix) = scan(v.len(), |p, q| v[p].dist(v[q]) / (s[q] - s[p]), keep);
    PairRatioReport { kind: RatioKind::DOverL, min_value, argmin, truncated: true, matrix }
}

/// `min d/l` over vertex pairs of an open curve (diagonal ≡ 1).
pub fn chord_arc_min(curve: &OpenCurve) -> PairRatioReport {
    arc_scan(curve, false)
}

pub fn chord_arc_matrix(curve: &OpenCurve) -> PairRatioReport {
    arc_scan(curve, true)
}
