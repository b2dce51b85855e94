//! The global term `h(t)` in `∂X/∂t = (h − κ)ν`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{enclosed_area, frame, length, ClosedCurve, CurveFrame, GeometryError, Polyline};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForcingError {
    #[error("isoperimetric deficit {deficit} too small relative to A0={a0}: gamma undefined")]
    CircleInterpolation { deficit: f64, a0: f64 },
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("rate table: {0}")]
    BadTable(String),
    #[error("rate g={g} at t={t} left its admissible window: {reason}")]
    OutOfWindow { t: f64, g: f64, reason: String },
    #[error("forcing {0} needs a closed curve")]
    NeedsClosed(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which admissibility branch a prescribed rate follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBranch {
    /// `g ≤ 0`, nondecreasing.
    NonPositive,
    /// `g ≥ 0`, nonincreasing.
    NonNegative,
}

/// A sampled rate `g(t)`, linearly interpolated and held constant outside
/// the sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    times: Vec<f64>,
    values: Vec<f64>,
    branch: RateBranch,
}

impl RateTable {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, ForcingError> {
        let bad = |m: &str| Err(ForcingError::BadTable(m.to_string()));
        if times.len() != values.len() || times.is_empty() {
            return bad("times and values must be nonempty and of equal length");
        }
        if times.iter().chain(&values).any(|x| !x.is_finite()) {
            return bad("non-finite entry");
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("times must be strictly increasing");
        }
        let branch = if values.iter().all(|&g| g <= 0.0) {
            if values.windows(2).any(|w| w[1] < w[0]) {
                return bad("a nonpositive rate must be nondecreasing");
            }
            RateBranch::NonPositive
        } else if values.iter().all(|&g| g >= 0.0) {
            if values.windows(2).any(|w| w[1] > w[0]) {
                return bad("a nonnegative rate must be nonincreasing");
            }
            RateBranch::NonNegative
        } else {
            return bad("rate changes sign");
        };
        if *values.last().unwrap() != 0.0 {
            return bad("last sample must be 0 so that the rate is integrable");
        }
        Ok(RateTable { times, values, branch })
    }

    pub fn branch(&self) -> RateBranch {
        self.branch
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let ts = &self.times;
        if t <= ts[0] {
            return self.values[0];
        }
        if t >= *ts.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let k = ts.partition_point(|&x| x <= t) - 1;
        let w = (t - ts[k]) / (ts[k + 1] - ts[k]);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    /// `∫ g dt` over `[0, ∞)` (trapezoid on the samples, zero tail).
    pub fn integral(&self) -> f64 {
        let head = if self.times[0] > 0.0 { self.times[0] * self.values[0] } else { 0.0 };
        head + self
            .times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, g)| 0.5 * (t[1] - t[0]) * (g[0] + g[1]))
            .sum::<f64>()
    }
}

/// The forcing regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForcingSpec {
    /// Plain curve shortening, `h = 0`.
    Csf,
    /// `h = 2π/L`. With `discrete_exact` the numerator is the discrete total
    /// turning instead of `2π`.
    AreaPreserving { discrete_exact: bool },
    /// `h = (1/2π) ∫κ² ds`. On a polygon `2π` and `∫κ²` become the sums of
    /// [`CurveFrame::length_sums`], which keeps the perimeter fixed.
    LengthPreserving,
    /// `h = (1−γ) 2π/L + (γ/2π) ∫κ² ds` with γ frozen from the initial curve.
    Interpolated { delta: f64, gamma: f64, l0: f64, a0: f64 },
    /// `h = (2π + g(t)) / L`, so `dA/dt = g`.
    PrescribedAreaRate { g: RateTable },
    /// `h = (∫κ² ds + g(t)) / 2π`, so `dL/dt = g`.
    PrescribedLengthRate { g: RateTable },
    /// A fixed scalar; meant for open curves.
    Constant { h: f64 },
}

/// `γ = (δ−1) A₀ / (L₀²/4π − A₀)`.
pub fn gamma_from_delta(delta: f64, l0: f64, a0: f64) -> Result<f64, ForcingError> {
    if !(delta > 0.0) {
        return Err(ForcingError::BadDelta(delta));
    }
    let deficit = l0 * l0 / (4.0 * PI) - a0;
    if !(deficit > 1e-9 * a0) {
        return Err(ForcingError::CircleInterpolation { deficit, a0 });
    }
    Ok((delta - 1.0) * a0 / deficit)
}

/// `Σ κ_i² Δs_i`.
pub fn curvature_energy<C: Polyline + ?Sized>(curve: &C) -> Result<f64, ForcingError> {
    Ok(frame(curve)?.energy())
}

impl ForcingSpec {
    pub fn area_preserving() -> Self {
        ForcingSpec::AreaPreserving { discrete_exact: false }
    }

    /// Interpolated forcing with γ taken from `(L₀, A₀)`.
    pub fn interpolated(delta: f64, l0: f64, a0: f64) -> Result<Self, ForcingError> {
        let gamma = gamma_from_delta(delta, l0, a0)?;
        Ok(ForcingSpec::Interpolated { delta, gamma, l0, a0 })
    }

    /// Interpolated forcing for a given initial curve.
    /// Also rejects regular polygons, whose small positive deficit `L²/4π − A`
    /// is a discretisation artefact.
    pub fn interpolated_for(delta: f64, curve: &ClosedCurve) -> Result<Self, ForcingError> {
        let (l0, a0) = (length(curve), enclosed_area(curve)?);
        let n = curve.vertices().len() as f64;
        let polygonal = l0 * l0 / (4.0 * n * (PI / n).tan()) - a0;
        if delta > 0.0 && delta != 1.0 && !(polygonal > 1e-9 * a0) {
            return Err(ForcingError::CircleInterpolation { deficit: polygonal, a0 });
        }
        Self::interpolated(delta, l0, a0)
    }

    /// Prescribed area rate, checking the integral bounds against the initial curve.
    pub fn area_rate_for(g: RateTable, curve: &ClosedCurve) -> Result<Self, ForcingError> {
        let (l0, a0) = (length(curve), enclosed_area(curve)?);
        let int = g.integral();
        match g.branch() {
            RateBranch::NonPositive => {
                if g.values()[0] <= -2.0 * PI {
                    return Err(ForcingError::BadTable("area rate must exceed -2π".into()));
                }
                if !(int > -a0) {
                    return Err(ForcingError::BadTable(format!("∫g = {int} would exhaust the area {a0}")));
                }
            }
            RateBranch::NonNegative => {
                let cap = l0 * l0 / (4.0 * PI) - a0;
                if int > cap {
                    return Err(ForcingError::BadTable(format!("∫g = {int} exceeds the deficit {cap}")));
                }
            }
        }
        Ok(ForcingSpec::PrescribedAreaRate { g })
    }

    /// Prescribed length rate, checking the integral bound against the initial curve.
    pub fn length_rate_for(g: RateTable, curve: &ClosedCurve) -> Result<Self, ForcingError> {
        let l0 = length(curve);
        if g.branch() == RateBranch::NonPositive && !(g.integral() > -l0) {
            return Err(ForcingError::BadTable(format!("∫g = {} would exhaust the length {l0}", g.integral())));
        }
        Ok(ForcingSpec::PrescribedLengthRate { g })
    }

    /// The weight γ of the conserved interpolant `(1−γ)A + γL²/4π`, where
    /// this forcing has one.
    pub fn conserved_gamma(&self) -> Option<f64> {
        match self {
            ForcingSpec::AreaPreserving { .. } => Some(0.0),
            ForcingSpec::LengthPreserving => Some(1.0),
            ForcingSpec::Interpolated { gamma, .. } => Some(*gamma),
            _ => None,
        }
    }

    pub fn needs_closed(&self) -> bool {
        !matches!(self, ForcingSpec::Csf | ForcingSpec::Constant { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ForcingSpec::Csf => "csf",
            ForcingSpec::AreaPreserving { .. } => "apcsf",
            ForcingSpec::LengthPreserving => "lpcf",
            ForcingSpec::Interpolated { .. } => "interp",
            ForcingSpec::PrescribedAreaRate { .. } => "area_rate",
            ForcingSpec::PrescribedLengthRate { .. } => "length_rate",
            ForcingSpec::Constant { .. } => "const",
        }
    }

    /// `h` from a precomputed frame.
    pub fn h_from_frame(&self, f: &CurveFrame, t: f64) -> Result<f64, ForcingError> {
        if self.needs_closed() && !f.closed {
            return Err(ForcingError::NeedsClosed(self.name()));
        }
        let two_pi = 2.0 * PI;
        Ok(match self {
            ForcingSpec::Csf => 0.0,
            ForcingSpec::Constant { h } => *h,
            ForcingSpec::AreaPreserving { discrete_exact } => {
                let num = if *discrete_exact { f.total_turning() } else { two_pi };
                num / f.length
            }
            ForcingSpec::LengthPreserving => {
                let (w, kw) = f.length_sums();
                kw / w
            }
            ForcingSpec::Interpolated { gamma, .. } => {
                let (w, kw) = f.length_sums();
                let l = f.length;
                ((1.0 - gamma) * f.total_turning() + gamma * l * kw / two_pi)
                    / ((1.0 - gamma) * l + gamma * l * w / two_pi)
            }
            ForcingSpec::PrescribedAreaRate { g } => {
                let gv = g.eval(t);
                if g.branch() == RateBranch::NonNegative {
                    let cap = f.length * f.energy() / two_pi - two_pi;
                    if gv > 0.0 && !(gv < cap) {
                        return Err(ForcingError::OutOfWindow {
                            t,
                            g: gv,
                            reason: format!("area rate must stay below (L/2π)∫κ² − 2π = {cap}"),
                        });
                    }
                }
                (two_pi + gv) / f.length
            }
            ForcingSpec::PrescribedLengthRate { g } => {
                let gv = g.eval(t);
                let (w, kw) = f.length_sums();
                if g.branch() == RateBranch::NonPositive {
                    let floor = -kw + 4.0 * PI / f.length;
                    if gv < 0.0 && !(gv > floor) {
                        return Err(ForcingError::OutOfWindow {
                            t,
                            g: gv,
                            reason: format!("length rate must stay above −∫κ² + 4π/L = {floor}"),
                        });
                    }
                }
                (kw + gv) / w
            }
        })
    }
}

/// The global term for `curve` at time `t`.
pub fn compute_h<C: Polyline + ?Sized>(spec: &ForcingSpec, curve: &C, t: f64) -> Result<f64, ForcingError> {
    spec.h_from_frame(&frame(curve)?, t)
}
