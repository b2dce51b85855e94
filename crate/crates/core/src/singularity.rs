//! Blow-up time estimation, type-I/type-II classification and parabolic
//! rescaling of recorded runs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{Snapshot, StopReason, Trajectory};
use crate::geometry::{OpenCurve, Polyline, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularityError {
    #[error("run did not end in a blow-up")]
    NoBlowup,
    #[error("max|κ| is not increasing over the tail")]
    NonMonotoneTail,
    #[error("too few tail samples ({0})")]
    TooFewSamples(usize),
    #[error("fitted blow-up time {t_hat} does not lie beyond the last sample {t_last}")]
    BadFit { t_hat: f64, t_last: f64 },
    #[error("k = {k} leaves no recorded state before T̂ − 1/k")]
    WindowEmpty { k: u32 },
    #[error("curve is not a graph over the axis-normal direction")]
    NotGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Classification {
    TypeI { c0: f64 },
    TypeII,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub t: f64,
    pub kappa_max: f64,
    /// `max|κ| · √(T̂ − t)`.
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub t_hat: f64,
    pub samples: Vec<TailSample>,
    pub classification: Classification,
    /// Slope of `log(max|κ|√(T̂−t))` against `−log(T̂−t)` over the tail.
    pub tail_slope: f64,
}

/// Least-squares line `y ≈ c0 + c1 x`.
fn line_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - xm).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let c1 = sxy / sxx;
    Some((ym - c1 * xm, c1))
}

/// `(t, max|κ|)` over the tail: the samples after the last time `max|κ|`
/// was below a quarter of its final value.
fn tail(traj: &Trajectory) -> Vec<(f64, f64)> {
    let k_last = traj.samples.last().map_or(0.0, |s| s.kappa_abs_max);
    let start = traj.samples.iter().rposition(|s| s.kappa_abs_max < k_last / 4.0).map_or(0, |i| i + 1);
    traj.samples[start..].iter().map(|s| (s.t, s.kappa_abs_max)).collect()
}

/// Fits `1/max|κ|² ≈ a (T̂ − t)` over the tail of a blown-up run.
pub fn estimate_t(traj: &Trajectory) -> Result<f64, SingularityError> {
    if traj.stop != StopReason::BlowUp {
        return Err(SingularityError::NoBlowup);
    }
    let tl = tail(traj);
    if tl.len() < 3 {
        return Err(SingularityError::TooFewSamples(tl.len()));
    }
    if tl.windows(2).any(|w| w[1].1 < w[0].1 * (1.0 - 1e-9)) {
        return Err(SingularityError::NonMonotoneTail);
    }
    let x: Vec<f64> = tl.iter().map(|p| p.0).collect();
    let y: Vec<f64> = tl.iter().map(|p| 1.0 / (p.1 * p.1)).collect();
    let (c0, c1) = line_fit(&x, &y).ok_or(SingularityError::TooFewSamples(tl.len()))?;
    let t_last = x[x.len() - 1];
    let t_hat = -c0 / c1;
    if !(c1 < 0.0) || !(t_hat > t_last) {
        return Err(SingularityError::BadFit { t_hat, t_last });
    }
    Ok(t_hat)
}

/// Type-I if `max|κ|√(T̂−t)` stays bounded over the tail (log-log slope at
/// most 0.05), type-II if it exceeds three times its median while growing.
pub fn classify(samples: &[TailSample], t_hat: f64) -> (Classification, f64) {
    if samples.len() < 10 {
        return (Classification::Inconclusive, f64::NAN);
    }
    let x: Vec<f64> = samples.iter().map(|s| -(t_hat - s.t).ln()).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.scaled.ln()).collect();
    let slope = line_fit(&x, &y).map_or(f64::NAN, |f| f.1);
    let max = samples.iter().fold(0.0f64, |m, s| m.max(s.scaled));
    let mut sorted: Vec<f64> = samples.iter().map(|s| s.scaled).collect();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let class = if slope <= 0.05 {
        Classification::TypeI { c0: max }
    } else if max > 3.0 * median && slope > 0.0 {
        Classification::TypeII
    } else {
        Classification::Inconclusive
    };
    (class, slope)
}

/// [`estimate_t`] followed by [`classify`] over the tail.
pub fn blowup_record(traj: &Trajectory) -> Result<BlowupRecord, SingularityError> {
    let t_hat = estimate_t(traj)?;
    let samples: Vec<TailSample> =
        tail(traj).into_iter().map(|(t, k)| TailSample { t, kappa_max: k, scaled: k * (t_hat - t).sqrt() }).collect();
    let (classification, tail_slope) = classify(&samples, t_hat);
    Ok(BlowupRecord { t_hat, samples, classification, tail_slope })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledSnapshot {
    pub tau: f64,
    pub vertices: Vec<Vec2>,
    pub kappa: Vec<f64>,
}

/// Recorded states mapped by `X ↦ λ (X − X(p_k, t_k))`, `t ↦ λ² (t − t_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaleFrame {
    pub k: u32,
    pub lambda: f64,
    pub t_k: f64,
    pub p_k: usize,
    pub point: Vec2,
    pub alpha_k: f64,
    pub t_cap: f64,
    pub snapshots: Vec<RescaledSnapshot>,
}

impl RescaleFrame {
    /// Curvature at the selected vertex and time after rescaling.
    pub fn selected_curvature(&self) -> f64 {
        self.snapshots.iter().find(|s| s.tau == 0.0).map_or(f64::NAN, |s| s.kappa[self.p_k].abs())
    }

    /// Largest `κ² (T_k − τ) / T_k` over the rescaled states; at most 1 by
    /// the choice of the selected point.
    pub fn selection_ratio(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.kappa.iter().map(move |k| k * k * (self.t_cap - s.tau) / self.t_cap))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Picks `(p_k, t_k)` maximising `κ²(p, t)(T̂ − 1/k − t)` over the recorded
/// snapshots with `t ≤ T̂ − 1/k` and rescales those snapshots around it.
pub fn parabolic_rescale(snapshots: &[Snapshot], t_hat: f64, k: u32) -> Result<RescaleFrame, SingularityError> {
    let horizon = t_hat - 1.0 / k as f64;
    let window: Vec<_> = snapshots.iter().filter(|s| s.t <= horizon).collect();
    if window.is_empty() {
        return Err(SingularityError::WindowEmpty { k });
    }
    let (mut best, mut at) = (f64::NEG_INFINITY, (0, 0));
    for (si, s) in window.iter().enumerate() {
        for (p, kap) in s.kappa.iter().enumerate() {
            let v = kap * kap * (horizon - s.t);
            if v > best {
                best = v;
                at = (si, p);
            }
        }
    }
    let sel = window[at.0];
    let lambda = sel.kappa[at.1].abs();
    let point = sel.vertices[at.1];
    let t_k = sel.t;
    let l2 = lambda * lambda;
    let snapshots = window
        .iter()
        .map(|s| RescaledSnapshot {
            tau: if s.step == sel.step { 0.0 } else { l2 * (s.t - t_k) },
            vertices: s.vertices.iter().map(|&x| (x - point) * lambda).collect(),
            kappa: s.kappa.iter().map(|&c| c / lambda).collect(),
        })
        .collect();
    Ok(RescaleFrame { k, lambda, t_k, p_k: at.1, point, alpha_k: -l2 * t_k, t_cap: l2 * horizon - l2 * t_k, snapshots })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Planar distance from `(σ, u)` to the graph `u = c − log cos σ`.
fn dist_to_reaper(s: f64, u: f64, c: f64) -> f64 {
    let r = (u - c + s.cos().ln()).abs();
    let lim = std::f64::consts::FRAC_PI_2 - 1e-12;
    let lo = (s - r).max(-lim);
    let hi = (s + r).min(lim);
    let d2 = |x: f64| (x - s).powi(2) + (u - c + x.cos().ln()).powi(2);
    golden_min(d2, lo, hi, 80).1.min(r * r).sqrt()
}

/// Sup-norm distance in the plane from the vertices of an open curve to the
/// best translate of `u = −log cos σ` along the axis, with `σ` measured
/// across the axis and `u` against it.
pub fn grim_reaper_deviation(curve: &OpenCurve) -> Result<f64, SingularityError> {
    let v = curve.axis();
    let e = v.perp();
    let pts: Vec<(f64, f64)> = curve.vertices().iter().map(|x| (x.dot(e), -x.dot(v))).collect();
    let inc = pts.windows(2).all(|w| w[1].0 > w[0].0);
    let dec = pts.windows(2).all(|w| w[1].0 < w[0].0);
    if !(inc || dec) || pts.iter().any(|p| p.0.abs() >= std::f64::consts::FRAC_PI_2) {
        return Err(SingularityError::NotGraph);
    }
    let r: Vec<f64> = pts.iter().map(|(s, u)| u + s.cos().ln()).collect();
    let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-12 {
        return Ok(0.5 * (hi - lo));
    }
    let sup = |c: f64| pts.iter().map(|&(s, u)| dist_to_reaper(s, u, c)).fold(0.0f64, f64::max);
    Ok(golden_min(sup, lo, hi, 60).1)
}
