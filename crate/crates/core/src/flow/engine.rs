use std::f64::consts::PI;

use super::{Event, EventKind, FlowError, FlowState, Sample, Scheme, Snapshot, StepConfig, StopReason, Trajectory};
use crate::forcing::{ForcingError, ForcingSpec};
use crate::geometry::{
    frame_of, resample_points, signed_area, simplicity_of, ClosedCurve, Curve, CurveFrame, GeometryError, OpenCurve,
    Polyline, Simplicity, TurningTable, Vec2,
};
use crate::linalg::{solve_cyclic, solve_tridiagonal};
use crate::monitors::{
    bonnesen_gap, chord_arc_min, chord_psi_min, conserved_interpolant, gage_residual, isoperimetric_deficit,
    theta_extremes_of,
};

/// Why a single step could not be taken.
#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    /// An edge collapsed or the implicit solve broke down.
    Collapse,
    Forcing(ForcingError),
}

impl From<GeometryError> for StepError {
    fn from(_: GeometryError) -> Self {
        StepError::Collapse
    }
}

/// Stable step size: `cfl·(min Δs)²/2`, capped by `0.1 / max|κ(h−κ)|`.
pub fn stable_dt(frame: &CurveFrame, h: f64, cfg: &StepConfig) -> f64 {
    let ds = frame.min_ds();
    let parabolic = cfg.cfl * ds * ds / 2.0;
    let speed = frame.kappa.iter().fold(0.0f64, |m, &k| m.max((k * (h - k)).abs()));
    parabolic.min(0.1 / speed.max(1e-12))
}

/// Normal velocity `(h − κ)ν` at each vertex. The factor `dual/half_chord`
/// makes the polygon's area change at exactly `h L − Σ turning`.
fn velocity(f: &CurveFrame, h: f64) -> Vec<Vec2> {
    (0..f.len()).map(|i| f.nu[i] * ((h - f.kappa[i]) * f.dual[i] / f.half_chord[i])).collect()
}

fn implicit_increment(f: &CurveFrame, v: &[Vec2], dt: f64) -> Option<Vec<Vec2>> {
    let n = f.len();
    let row = |i: usize, prev: usize| {
        let m = f.dual[i];
        let a = -dt / (f.ds[prev] * m);
        let c = -dt / (f.ds[i] * m);
        (a, 1.0 - a - c, c)
    };
    let (idx, cyclic): (Vec<usize>, bool) =
        if f.closed { ((0..n).collect(), true) } else { ((1..n - 1).collect(), false) };
    let m = idx.len();
    let (mut a, mut b, mut c) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let (mut dx, mut dy) = (vec![0.0; m], vec![0.0; m]);
    for (k, &i) in idx.iter().enumerate() {
        let (p, q, r) = row(i, (i + n - 1) % n);
        a[k] = p;
        b[k] = q;
        c[k] = r;
        dx[k] = dt * v[i].x;
        dy[k] = dt * v[i].y;
    }
    let (x, y) = if cyclic {
        (solve_cyclic(&a, &b, &c, &dx)?, solve_cyclic(&a, &b, &c, &dy)?)
    } else {
        (solve_tridiagonal(&a, &b, &c, &dx)?, solve_tridiagonal(&a, &b, &c, &dy)?)
    };
    let mut out: Vec<Vec2> = v.iter().map(|&w| w * dt).collect();
    for (k, &i) in idx.iter().enumerate() {
        out[i] = Vec2::new(x[k], y[k]);
    }
    Some(out)
}

/// Quantity a closed-curve forcing steers, with its prescribed change over a step.
enum Budget {
    /// `(1−γ)A + γL²/4π` held fixed.
    Conserved(f64),
    Area(f64),
    Length(f64),
}

fn budget(spec: &ForcingSpec, t: f64, dt: f64) -> Option<Budget> {
    let mid = t + 0.5 * dt;
    match spec {
        ForcingSpec::PrescribedAreaRate { g } => Some(Budget::Area(dt * g.eval(mid))),
        ForcingSpec::PrescribedLengthRate { g } => Some(Budget::Length(dt * g.eval(mid))),
        _ => spec.conserved_gamma().map(Budget::Conserved),
    }
}

fn polygon_length(v: &[Vec2]) -> f64 {
    (0..v.len()).map(|i| v[i].dist(v[(i + 1) % v.len()])).sum()
}

/// Semi-implicit step whose `h` is adjusted so the steered quantity changes by
/// exactly its budget. The increment is affine in `h`; the scalar equation is
/// solved by secant iteration starting from the frame's `h`.
fn steered_increment(state: &FlowState, budget: Budget, dt: f64) -> Option<Vec<Vec2>> {
    let f = &state.frame;
    let x = state.vertices();
    let push: Vec<Vec2> = (0..f.len()).map(|i| f.nu[i] * (f.dual[i] / f.half_chord[i])).collect();
    let bend: Vec<Vec2> = push.iter().zip(&f.kappa).map(|(&p, &k)| p * -k).collect();
    let base = implicit_increment(f, &bend, dt)?;
    let unit = implicit_increment(f, &push, dt)?;
    let at = |h: f64| -> Vec<Vec2> { (0..x.len()).map(|i| x[i] + base[i] + unit[i] * h).collect() };
    let (a0, l0) = (signed_area(x), f.length);
    let phi = |v: &[Vec2]| -> f64 {
        match budget {
            Budget::Conserved(g) => {
                let l = polygon_length(v);
                (1.0 - g) * (signed_area(v) - a0) + g * (l * l - l0 * l0) / (4.0 * PI)
            }
            Budget::Area(d) => signed_area(v) - a0 - d,
            Budget::Length(d) => polygon_length(v) - l0 - d,
        }
    };
    let scale = a0.abs().max(l0 * l0);
    let (mut h0, mut h1) = (state.h, state.h + 1e-3 * (1.0 + state.h.abs()));
    let (mut r0, mut r1) = (phi(&at(h0)), phi(&at(h1)));
    for _ in 0..20 {
        if r1.abs() <= 1e-15 * scale || r1 == r0 {
            break;
        }
        let h2 = h1 - r1 * (h1 - h0) / (r1 - r0);
        (h0, r0) = (h1, r1);
        h1 = h2;
        r1 = phi(&at(h1));
    }
    h1.is_finite().then(|| (0..x.len()).map(|i| base[i] + unit[i] * h1).collect())
}

/// Re-extrapolates the end vertices along the pinned directions.
fn pin_ends(v: &mut [Vec2], dirs: [Vec2; 2]) {
    let n = v.len();
    let l0 = v[2].dist(v[1]);
    v[0] = v[1] - dirs[0] * l0;
    let l1 = v[n - 2].dist(v[n - 3]);
    v[n - 1] = v[n - 2] + dirs[1] * l1;
}

/// Slides vertices along the curve towards equal arclength spacing, to second
/// order in the shift. Falls back to a full resampling on large shifts.
fn redistribute(v: &mut Vec<Vec2>, f: &CurveFrame) -> Result<(), GeometryError> {
    let n = v.len();
    let (lo, hi) = if f.closed { (0, n) } else { (1, n - 1) };
    let count = hi - lo;
    let target: Vec<f64> = if f.closed {
        let h = f.length / n as f64;
        let offset = (0..n).map(|i| f.s[i] - i as f64 * h).sum::<f64>() / n as f64;
        (0..n).map(|i| offset + i as f64 * h).collect()
    } else {
        let (s0, s1) = (f.s[lo], f.s[hi - 1]);
        let h = (s1 - s0) / (count - 1) as f64;
        (0..n).map(|i| if i < lo || i >= hi { f.s[i] } else { s0 + (i - lo) as f64 * h }).collect()
    };
    let sigma: Vec<f64> = (0..n).map(|i| target[i] - f.s[i]).collect();
    let worst = sigma.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if worst > 0.45 * f.min_ds() {
        if f.closed {
            *v = resample_points(v, true, n)?;
        } else {
            let inner = resample_points(&v[lo..hi], false, count)?;
            v[lo..hi].copy_from_slice(&inner);
        }
        return Ok(());
    }
    let movable = if f.closed { lo..hi } else { lo + 1..hi - 1 };
    for i in movable {
        let s = sigma[i];
        v[i] += f.tau[i] * s - f.nu[i] * (0.5 * s * s * f.kappa[i]);
    }
    Ok(())
}

fn rebuild(state: &FlowState, v: Vec<Vec2>) -> Curve {
    match &state.curve {
        Curve::Closed(_) => Curve::Closed(ClosedCurve::from_raw(v)),
        Curve::Open(c) => Curve::Open(c.with_vertices(v)),
    }
}

fn end_dirs(curve: &Curve) -> Option<[Vec2; 2]> {
    curve.as_open().map(|c| c.end_dirs())
}

/// One time step of length `dt`, followed by tangential redistribution when
/// it is due.
pub fn step(state: &FlowState, spec: &ForcingSpec, cfg: &StepConfig, dt: f64) -> Result<FlowState, StepError> {
    let closed = state.frame.closed;
    let dirs = end_dirs(&state.curve);
    let x = state.vertices();
    let v1 = velocity(&state.frame, state.h);
    let mut next: Vec<Vec2> = match cfg.scheme {
        Scheme::Explicit => x.iter().zip(&v1).map(|(&p, &w)| p + w * dt).collect(),
        Scheme::SemiImplicit => {
            let inc = match budget(spec, state.t, dt).filter(|_| closed) {
                Some(b) => steered_increment(state, b, dt),
                None => implicit_increment(&state.frame, &v1, dt),
            }
            .ok_or(StepError::Collapse)?;
            x.iter().zip(&inc).map(|(&p, &d)| p + d).collect()
        }
        Scheme::Heun => {
            let mut pred: Vec<Vec2> = x.iter().zip(&v1).map(|(&p, &w)| p + w * dt).collect();
            if let Some(d) = dirs {
                pin_ends(&mut pred, d);
            }
            let f = frame_of(&pred, closed)?;
            let h = spec.h_from_frame(&f, state.t + dt).map_err(StepError::Forcing)?;
            let v2 = velocity(&f, h);
            x.iter().zip(v1.iter().zip(&v2)).map(|(&p, (&a, &b))| p + (a + b) * (0.5 * dt)).collect()
        }
    };
    if let Some(d) = dirs {
        pin_ends(&mut next, d);
    }
    let steps = state.steps + 1;
    if cfg.resample_every > 0 && steps.is_multiple_of(cfg.resample_every) {
        let f = frame_of(&next, closed)?;
        redistribute(&mut next, &f)?;
        if let Some(d) = dirs {
            pin_ends(&mut next, d);
        }
    }
    if next.iter().any(|p| !p.is_finite()) {
        return Err(StepError::Collapse);
    }
    let frame = frame_of(&next, closed)?;
    let t = state.t + dt;
    let h = spec.h_from_frame(&frame, t).map_err(StepError::Forcing)?;
    Ok(FlowState { curve: rebuild(state, next), t, h, frame, steps })
}

struct Recorder<'a> {
    cfg: &'a StepConfig,
    gamma: Option<f64>,
    samples: Vec<Sample>,
    snapshots: Vec<Snapshot>,
    last_snap_kappa: f64,
}

impl Recorder<'_> {
    fn sample(&mut self, s: &FlowState, full: bool) {
        let f = &s.frame;
        let v = s.vertices();
        let closed = f.closed;
        let area = if closed { signed_area(v) } else { f64::NAN };
        let mut row = Sample {
            step: s.steps,
            t: s.t,
            length: f.length,
            area,
            h: s.h,
            kappa_min: f.kappa_min(),
            kappa_max: f.kappa_max(),
            kappa_abs_max: f.kappa_abs_max(),
            energy: f.energy(),
            min_ds: f.min_ds(),
            theta_min: f64::NAN,
            theta_sup: f64::NAN,
            theta_defect: f64::NAN,
            ratio_min: f64::NAN,
            deficit: if closed { isoperimetric_deficit(f.length, area) } else { f64::NAN },
            conserved_interp: match (closed, self.gamma) {
                (true, Some(g)) => conserved_interpolant(g, area, f.length),
                _ => f64::NAN,
            },
            gage_residual: f64::NAN,
            bonnesen_gap: f64::NAN,
            full,
        };
        if full {
            let mon = self.cfg.record.monitors;
            if mon.theta {
                let th = theta_extremes_of(&TurningTable::from_turning(&f.turning, closed), closed);
                row.theta_min = th.theta_min;
                row.theta_sup = th.theta_sup;
                row.theta_defect = th.identity_defect.unwrap_or(f64::NAN);
            }
            if mon.ratio {
                row.ratio_min = match &s.curve {
                    Curve::Closed(c) => chord_psi_min(c).min_value,
                    Curve::Open(c) => chord_arc_min(c).min_value,
                };
            }
            if let (true, Curve::Closed(c)) = (mon.isoperimetric, &s.curve) {
                if f.kappa_min() >= 0.0 {
                    row.gage_residual = gage_residual(c).unwrap_or(f64::NAN);
                    row.bonnesen_gap = bonnesen_gap(c).unwrap_or(f64::NAN);
                }
            }
        }
        self.samples.push(row);
    }

    fn snapshot(&mut self, s: &FlowState) {
        if self.snapshots.last().is_some_and(|x| x.step == s.steps) {
            return;
        }
        self.last_snap_kappa = s.frame.kappa_abs_max();
        self.snapshots.push(Snapshot {
            step: s.steps,
            t: s.t,
            vertices: s.vertices().to_vec(),
            kappa: s.frame.kappa.clone(),
        });
    }
}

/// Drift of the edges next to the pinned ends, against their initial directions.
fn end_drift(v: &[Vec2], initial: [Vec2; 2]) -> f64 {
    let n = v.len();
    let a = (v[2] - v[1]).normalized();
    let b = (v[n - 2] - v[n - 3]).normalized();
    let ang = |p: Vec2, q: Vec2| p.cross(q).atan2(p.dot(q)).abs();
    ang(a, initial[0]).max(ang(b, initial[1]))
}

fn check_forcing(curve: &Curve, spec: &ForcingSpec) -> Result<(), FlowError> {
    if let Curve::Open(_) = curve {
        match spec {
            ForcingSpec::Csf => {}
            ForcingSpec::Constant { h } if *h >= 0.0 => {}
            ForcingSpec::Constant { h } => return Err(FlowError::NegativeOpenForcing(*h)),
            other => return Err(FlowError::Forcing(ForcingError::NeedsClosed(other.name()))),
        }
    }
    Ok(())
}

/// Evolves `initial` until a stop rule or a terminal event.
///
/// Terminal events, in order of precedence within one step: self-intersection,
/// blow-up, convergence. Reaching `t_max` ends the run without an event.
pub fn run(initial: impl Into<Curve>, spec: &ForcingSpec, cfg: &StepConfig) -> Result<Trajectory, FlowError> {
    cfg.validate().map_err(FlowError::Config)?;
    let mut curve: Curve = initial.into();
    check_forcing(&curve, spec)?;
    if let Some(n) = cfg.n {
        if n != curve.len() {
            curve = crate::geometry::resample_uniform(&curve, n)?;
        }
    }
    if let Simplicity::Crossing(c) = simplicity_of(curve.vertices(), curve.is_closed()) {
        return Err(FlowError::NotSimple(c));
    }
    let mut state = FlowState::new(curve, spec, 0.0)?;
    let closed = state.frame.closed;
    let n = state.vertices().len();
    let ds_ref = state.frame.length / state.curve.edge_count() as f64;
    let inner_dirs = {
        let v = state.vertices();
        (!closed).then(|| [(v[2] - v[1]).normalized(), (v[n - 2] - v[n - 3]).normalized()])
    };
    let stop = &cfg.stop;
    let rec_cfg = &cfg.record;
    let mut rec = Recorder {
        cfg,
        gamma: spec.conserved_gamma(),
        samples: Vec::new(),
        snapshots: Vec::new(),
        last_snap_kappa: 0.0,
    };
    let mut events: Vec<Event> = Vec::new();
    let push =
        |events: &mut Vec<Event>, s: &FlowState, kind: EventKind| events.push(Event { t: s.t, step: s.steps, kind });

    rec.sample(&state, true);
    rec.snapshot(&state);
    let mut convex = closed && state.frame.kappa_min() > 0.0;
    let mut onset = convex;
    if convex {
        push(&mut events, &state, EventKind::ConvexityOnset);
    }
    let mut warned_negative = false;
    let mut warned_drift = false;
    let mut crossed = false;
    if state.h < 0.0 {
        warned_negative = true;
        push(&mut events, &state, EventKind::NegativeForcing { h: state.h });
    }

    let eps = 1e-12 * stop.t_max.max(1.0);
    let reason = loop {
        if state.t >= stop.t_max - eps {
            break StopReason::TMax;
        }
        if state.steps >= stop.max_steps {
            break StopReason::StepLimit;
        }
        let mut dt = cfg.dt.unwrap_or_else(|| stable_dt(&state.frame, state.h, cfg));
        if state.t + dt > stop.t_max {
            dt = stop.t_max - state.t;
        }
        let next = match step(&state, spec, cfg, dt) {
            Ok(s) => s,
            Err(StepError::Collapse) => {
                let k = state.frame.kappa_abs_max();
                push(&mut events, &state, EventKind::BlowUp { kappa_abs_max: k, ds_ref, collapsed: true });
                break StopReason::BlowUp;
            }
            Err(StepError::Forcing(e)) => {
                push(&mut events, &state, EventKind::ForcingOutOfWindow { message: e.to_string() });
                break StopReason::ForcingOutOfWindow;
            }
        };
        state = next;
        let f = &state.frame;

        if !crossed {
            if let Simplicity::Crossing(c) = simplicity_of(state.vertices(), closed) {
                crossed = true;
                push(&mut events, &state, EventKind::SelfIntersection { crossing: c });
                if !stop.continue_after_crossing {
                    rec.sample(&state, true);
                    break StopReason::SelfIntersection;
                }
            }
        }
        let kmax = f.kappa_abs_max();
        if kmax * ds_ref > stop.blowup_budget {
            push(&mut events, &state, EventKind::BlowUp { kappa_abs_max: kmax, ds_ref, collapsed: false });
            rec.sample(&state, false);
            break StopReason::BlowUp;
        }
        if closed {
            if let Some(tol) = stop.converge_tol {
                let r = 2.0 * PI / f.length;
                let dev = f.kappa.iter().fold(0.0f64, |m, k| m.max((k - r).abs()));
                if dev < tol {
                    push(&mut events, &state, EventKind::Converged { deviation: dev });
                    rec.sample(&state, true);
                    break StopReason::Converged;
                }
            }
            let kmin = f.kappa_min();
            if !convex && kmin > 0.0 {
                convex = true;
                if !onset {
                    onset = true;
                    push(&mut events, &state, EventKind::ConvexityOnset);
                }
            } else if convex && kmin < -1e-9 {
                convex = false;
                push(&mut events, &state, EventKind::ConvexityLost { kappa_min: kmin });
            }
        }
        if !warned_negative && state.h < 0.0 {
            warned_negative = true;
            push(&mut events, &state, EventKind::NegativeForcing { h: state.h });
        }
        if let (Some(d), false) = (inner_dirs, warned_drift) {
            let drift = end_drift(state.vertices(), d);
            if drift > 1e-4 {
                warned_drift = true;
                push(&mut events, &state, EventKind::TruncationWarning { drift });
            }
        }

        let regular = state.steps % rec_cfg.every == 0;
        let dense = kmax > rec_cfg.dense_kappa;
        if regular || dense {
            rec.sample(&state, regular);
        }
        let snap_due = rec_cfg.snapshot_every > 0 && state.steps % rec_cfg.snapshot_every == 0;
        if snap_due || (dense && kmax > rec.last_snap_kappa * rec_cfg.dense_snapshot_growth) {
            rec.snapshot(&state);
        }
    };
    if rec.samples.last().map(|s| s.step) != Some(state.steps) {
        rec.sample(&state, true);
    }
    rec.snapshot(&state);
    Ok(Trajectory {
        closed,
        forcing: spec.clone(),
        n,
        ds_ref,
        samples: rec.samples,
        snapshots: rec.snapshots,
        events,
        stop: reason,
        final_state: state,
    })
}

/// [`run`] for open curves: the interior moves by `(h − κ)ν` and the end
/// edges keep their directions.
pub fn evolve_open(initial: OpenCurve, spec: &ForcingSpec, cfg: &StepConfig) -> Result<Trajectory, FlowError> {
    run(Curve::Open(initial), spec, cfg)
}
