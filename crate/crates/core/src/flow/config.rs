use serde::{Deserialize, Serialize};

/// Time integrator for the normal motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Forward Euler.
    Explicit,
    /// The curvature increment is smoothed by `(I − dt D₂)⁻¹`, where `D₂` is
    /// the arclength second difference. For closed curves under a conserving
    /// or rate forcing, `h` is re-solved so the steered quantity hits its target.
    SemiImplicit,
    /// Two-stage explicit (Heun). Second order in time.
    Heun,
}

impl Scheme {
    pub fn default_cfl(self) -> f64 {
        match self {
            Scheme::SemiImplicit => 4.0,
            Scheme::Explicit | Scheme::Heun => 0.4,
        }
    }
}

/// When a run ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub t_max: f64,
    /// Stop once `max|κ − 2π/L| < tol` (closed curves).
    pub converge_tol: Option<f64>,
    /// Blow-up fires when `max|κ| · Δs_ref` exceeds this, with `Δs_ref` the
    /// initial mean edge length.
    pub blowup_budget: f64,
    /// Keep going after a self-intersection (the event is still logged once).
    pub continue_after_crossing: bool,
    pub max_steps: usize,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            t_max: 1.0,
            converge_tol: None,
            blowup_budget: 0.25,
            continue_after_crossing: false,
            max_steps: 50_000_000,
        }
    }
}

/// Which of the costlier monitors are evaluated at recorded samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonitorToggles {
    pub theta: bool,
    pub ratio: bool,
    /// Gage residual and Bonnesen gap.
    pub isoperimetric: bool,
}

impl Default for MonitorToggles {
    fn default() -> Self {
        MonitorToggles { theta: true, ratio: true, isoperimetric: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordConfig {
    /// Sample stride in steps.
    pub every: usize,
    /// Above this `max|κ|` every step is sampled (cheap columns only).
    pub dense_kappa: f64,
    /// Snapshot stride in steps; 0 keeps only the first and last state.
    pub snapshot_every: usize,
    /// In the dense phase, snapshot whenever `max|κ|` grew by this factor.
    pub dense_snapshot_growth: f64,
    pub monitors: MonitorToggles,
}

impl Default for RecordConfig {
    fn default() -> Self {
        RecordConfig {
            every: 10,
            dense_kappa: 10.0,
            snapshot_every: 1000,
            dense_snapshot_growth: 1.02,
            monitors: MonitorToggles::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepConfig {
    pub scheme: Scheme,
    pub cfl: f64,
    /// Fixed step; overrides the stability estimate.
    pub dt: Option<f64>,
    /// Steps between tangential redistributions; 0 disables it.
    pub resample_every: usize,
    /// Working resolution; the initial curve is resampled to it.
    pub n: Option<usize>,
    pub stop: StopRule,
    pub record: RecordConfig,
}

impl StepConfig {
    pub fn new(scheme: Scheme) -> Self {
        StepConfig {
            scheme,
            cfl: scheme.default_cfl(),
            dt: None,
            resample_every: 1,
            n: None,
            stop: StopRule::default(),
            record: RecordConfig::default(),
        }
    }

    pub fn explicit() -> Self {
        Self::new(Scheme::Explicit)
    }

    pub fn semi_implicit() -> Self {
        Self::new(Scheme::SemiImplicit)
    }

    pub fn heun() -> Self {
        Self::new(Scheme::Heun)
    }

    pub fn t_max(mut self, t: f64) -> Self {
        self.stop.t_max = t;
        self
    }

    pub fn every(mut self, k: usize) -> Self {
        self.record.every = k;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return Err(format!("cfl must be positive, got {}", self.cfl));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(format!("dt must be positive, got {dt}"));
            }
        }
        if let Some(n) = self.n {
            if n < 16 {
                return Err(format!("working resolution must be at least 16, got {n}"));
            }
        }
        if !(self.stop.t_max >= 0.0) || !self.stop.t_max.is_finite() {
            return Err(format!("t_max must be finite and nonnegative, got {}", self.stop.t_max));
        }
        if !(self.stop.blowup_budget > 0.0) {
            return Err("blowup_budget must be positive".into());
        }
        if self.record.every == 0 {
            return Err("record stride must be at least 1".into());
        }
        if !(self.record.dense_snapshot_growth > 1.0) {
            return Err("dense_snapshot_growth must exceed 1".into());
        }
        Ok(())
    }
}

impl Default for StepConfig {
    fn default() -> Self {
        Self::semi_implicit()
    }
}
