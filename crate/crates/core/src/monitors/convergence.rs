use serde::{Deserialize, Serialize};

use super::polygon_deficit;
use crate::flow::Trajectory;

/// Least-squares fit of `log y ≈ intercept − rate · t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub intercept: f64,
    pub t0: f64,
    pub t1: f64,
    pub points: usize,
}

impl DecayFit {
    pub fn fit(ts: &[f64], ys: &[f64]) -> Option<DecayFit> {
        let pts: Vec<(f64, f64)> =
            ts.iter().zip(ys).filter(|(_, y)| **y > 0.0 && y.is_finite()).map(|(t, y)| (*t, y.ln())).collect();
        if pts.len() < 3 {
            return None;
        }
        let m = pts.len() as f64;
        let tm = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
        if !(sxx > 0.0) {
            return None;
        }
        let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
        let slope = sxy / sxx;
        Some(DecayFit {
            rate: -slope,
            intercept: ym - slope * tm,
            t0: pts[0].0,
            t1: pts[pts.len() - 1].0,
            points: pts.len(),
        })
    }
}

/// One row of the convergence diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t: f64,
    /// `max |κ − 1/R̂|`.
    pub kappa_dev: f64,
    /// `|h − 1/R̂|`.
    pub h_dev: f64,
    /// `κ_max/κ_min − 1`, NaN before convexity.
    pub pinching: f64,
    /// Deficit against the regular polygon of the same perimeter.
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub r_hat: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Start of the convex phase, if one was recorded.
    pub convex_from: Option<f64>,
    pub deficit_fit: Option<DecayFit>,
    /// `rate · R̂² / 2` of the deficit fit.
    pub implied_beta: Option<f64>,
    pub kappa_fit: Option<DecayFit>,
}

/// Convergence diagnostics of a closed-curve run.
///
/// The decay fits use the last 60% (in time) of the convex phase and skip
/// values that have reached the round-off floor.
pub fn convergence_report(traj: &Trajectory) -> ConvergenceReport {
    let full: Vec<_> = traj.full_samples().collect();
    let last = full.last().expect("a trajectory always holds its initial sample");
    let r_hat = last.length / (2.0 * std::f64::consts::PI);
    let inv = 1.0 / r_hat;
    let rows: Vec<ConvergenceRow> = full
        .iter()
        .map(|s| ConvergenceRow {
            t: s.t,
            kappa_dev: (s.kappa_max - inv).abs().max((s.kappa_min - inv).abs()),
            h_dev: (s.h - inv).abs(),
            pinching: if s.kappa_min > 0.0 { s.kappa_max / s.kappa_min - 1.0 } else { f64::NAN },
            deficit: polygon_deficit(s.length, s.area, traj.n),
        })
        .collect();
    if !traj.closed {
        return ConvergenceReport {
            r_hat,
            rows,
            convex_from: None,
            deficit_fit: None,
            implied_beta: None,
            kappa_fit: None,
        };
    }
    // Convex phase: the suffix on which κ_min stays positive.
    let start = full.iter().rposition(|s| !(s.kappa_min > 0.0)).map_or(0, |i| i + 1);
    let convex_from = (start < full.len()).then(|| full[start].t);
    let (mut deficit_fit, mut kappa_fit) = (None, None);
    if let Some(t0) = convex_from {
        let t_end = last.t;
        let cut = t0 + 0.4 * (t_end - t0);
        let floor = 1e-11 * last.area.abs();
        let window: Vec<&ConvergenceRow> = rows[start..].iter().filter(|r| r.t >= cut).collect();
        let ts: Vec<f64> = window.iter().filter(|r| r.deficit > floor).map(|r| r.t).collect();
        let ds: Vec<f64> = window.iter().filter(|r| r.deficit > floor).map(|r| r.deficit).collect();
        deficit_fit = DecayFit::fit(&ts, &ds);
        let ts: Vec<f64> = window.iter().filter(|r| r.kappa_dev > 1e-9 * inv).map(|r| r.t).collect();
        let ks: Vec<f64> = window.iter().filter(|r| r.kappa_dev > 1e-9 * inv).map(|r| r.kappa_dev).collect();
        kappa_fit = DecayFit::fit(&ts, &ks);
    }
    let implied_beta = deficit_fit.as_ref().map(|f| f.rate * r_hat * r_hat / 2.0);
    ConvergenceReport { r_hat, rows, convex_from, deficit_fit, implied_beta, kappa_fit }
}
