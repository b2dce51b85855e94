//! Deterministic generators for the initial curves used by runs and tests.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    equal_chord_points, is_simple, ClosedCurve, Crossing, Curve, GeometryError, OpenCurve, Path, Simplicity, Vec2,
};
use crate::monitors::theta_extremes;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("generated curve is not simple: edges {} and {} cross", .0.edges.0, .0.edges.1)]
    NotSimple(Crossing),
    #[error("counterexample has θ_min = {theta_min}, which is not below −π")]
    ThetaCertificate { theta_min: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::BadParameter(msg.into()))
}

/// A straight segment or circular arc; arcs run counterclockwise for
/// positive `sweep`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { a: Vec2, b: Vec2 },
    Arc { center: Vec2, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { a, b } => a.dist(b),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at arclength `s` from the start.
    pub fn at(&self, s: f64) -> Vec2 {
        match *self {
            Segment::Line { a, b } => {
                let l = a.dist(b);
                a + (b - a) * (s / l)
            }
            Segment::Arc { center, radius, start, sweep } => {
                center + Vec2::from_angle(start + sweep.signum() * s / radius) * radius
            }
        }
    }

    pub fn end(&self) -> Vec2 {
        match *self {
            Segment::Line { b, .. } => b,
            Segment::Arc { center, radius, start, sweep } => center + Vec2::from_angle(start + sweep) * radius,
        }
    }
}

/// Concatenated segments parametrised by arclength.
pub struct Piecewise {
    segs: Vec<Segment>,
    cum: Vec<f64>,
    closed: bool,
}

impl Piecewise {
    pub fn new(segs: Vec<Segment>, closed: bool) -> Self {
        let mut cum = vec![0.0];
        for s in &segs {
            cum.push(cum.last().unwrap() + s.length());
        }
        Piecewise { segs, cum, closed }
    }
}

impl Path for Piecewise {
    fn span(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn closed(&self) -> bool {
        self.closed
    }

    fn point(&self, u: f64) -> Vec2 {
        let l = self.span();
        let u = if self.closed { u.rem_euclid(l) } else { u.clamp(0.0, l) };
        let k = (self.cum.partition_point(|&c| c <= u).max(1) - 1).min(self.segs.len() - 1);
        self.segs[k].at(u - self.cum[k])
    }

    fn step_hint(&self, chord: f64) -> f64 {
        0.25 * chord
    }
}

struct Ellipse {
    a: f64,
    b: f64,
}

impl Path for Ellipse {
    fn span(&self) -> f64 {
        2.0 * PI
    }
    fn closed(&self) -> bool {
        true
    }
    fn point(&self, u: f64) -> Vec2 {
        Vec2::new(self.a * u.cos(), self.b * u.sin())
    }
    fn step_hint(&self, chord: f64) -> f64 {
        0.25 * chord / self.a.max(self.b)
    }
}

/// `r(φ) = 1 + ε cos(mφ)`.
struct Polar {
    eps: f64,
    m: f64,
}

impl Path for Polar {
    fn span(&self) -> f64 {
        2.0 * PI
    }
    fn closed(&self) -> bool {
        true
    }
    fn point(&self, u: f64) -> Vec2 {
        Vec2::from_angle(u) * (1.0 + self.eps * (self.m * u).cos())
    }
    fn step_hint(&self, chord: f64) -> f64 {
        0.25 * chord / (1.0 + self.eps * (1.0 + self.m))
    }
}

/// `|x/a|^p + |y/b|^p = 1`.
struct Superellipse {
    a: f64,
    b: f64,
    p: f64,
}

impl Path for Superellipse {
    fn span(&self) -> f64 {
        2.0 * PI
    }
    fn closed(&self) -> bool {
        true
    }
    fn point(&self, u: f64) -> Vec2 {
        let e = 2.0 / self.p;
        let (s, c) = u.sin_cos();
        Vec2::new(self.a * c.signum() * c.abs().powf(e), self.b * s.signum() * s.abs().powf(e))
    }
    fn step_hint(&self, chord: f64) -> f64 {
        // The parametrisation is steep near the axes; walk finely.
        0.02 * chord / self.a.max(self.b)
    }
}

/// `x₂ = log cos x₁`, traversed from `x₁ = σ_max` to `x₁ = −σ_max`.
struct Reaper {
    sigma_max: f64,
}

impl Path for Reaper {
    fn span(&self) -> f64 {
        2.0 * self.sigma_max
    }
    fn closed(&self) -> bool {
        false
    }
    fn point(&self, u: f64) -> Vec2 {
        let x = self.sigma_max - u;
        Vec2::new(x, x.cos().ln())
    }
    fn step_hint(&self, chord: f64) -> f64 {
        0.25 * chord * self.sigma_max.cos()
    }
}

fn closed_from<P: Path>(path: &P, n: usize) -> Result<ClosedCurve, ScenarioError> {
    if n < ClosedCurve::MIN_VERTICES {
        return bad(format!("N must be at least {}, got {n}", ClosedCurve::MIN_VERTICES));
    }
    let c = ClosedCurve::new(equal_chord_points(path, n)?)?;
    if let Simplicity::Crossing(x) = is_simple(&c) {
        return Err(ScenarioError::NotSimple(x));
    }
    Ok(c)
}

fn positive(name: &str, x: f64) -> Result<(), ScenarioError> {
    if !(x > 0.0) || !x.is_finite() {
        return bad(format!("{name} must be positive, got {x}"));
    }
    Ok(())
}

/// Regular `N`-gon inscribed in the circle of radius `r` about the origin.
pub fn make_circle(r: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("radius", r)?;
    if n < ClosedCurve::MIN_VERTICES {
        return bad(format!("N must be at least {}, got {n}", ClosedCurve::MIN_VERTICES));
    }
    let v = (0..n).map(|i| Vec2::from_angle(2.0 * PI * i as f64 / n as f64) * r).collect();
    Ok(ClosedCurve::new(v)?)
}

/// Ellipse with semi-axes `a` (along x₁) and `b`, at equal chord spacing.
pub fn make_ellipse(a: f64, b: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("a", a)?;
    positive("b", b)?;
    closed_from(&Ellipse { a, b }, n)
}

/// `|x/a|^p + |y/b|^p = 1` with `p ≥ 2`: convex and smooth.
pub fn make_superellipse(a: f64, b: f64, p: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("a", a)?;
    positive("b", b)?;
    if !(p >= 2.0) || !p.is_finite() {
        return bad(format!("exponent must be at least 2, got {p}"));
    }
    closed_from(&Superellipse { a, b, p }, n)
}

/// The star-shaped curve `r(φ) = 1 + ε cos(mφ)`.
pub fn make_wavy(eps: f64, m: u32, n: usize) -> Result<ClosedCurve, ScenarioError> {
    if !(0.0..1.0).contains(&eps) {
        return bad(format!("amplitude must lie in [0, 1), got {eps}"));
    }
    if m == 0 {
        return bad("petal count must be positive");
    }
    closed_from(&Polar { eps, m: m as f64 }, n)
}

/// Square of side `side` centred at the origin.
pub fn make_square(side: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("side", side)?;
    let h = side / 2.0;
    let corners = [Vec2::new(-h, -h), Vec2::new(h, -h), Vec2::new(h, h), Vec2::new(-h, h)];
    let segs = (0..4).map(|i| Segment::Line { a: corners[i], b: corners[(i + 1) % 4] }).collect();
    closed_from(&Piecewise::new(segs, true), n)
}

/// Outline of a thick circular arc with a gap at the top.
///
/// The centreline has radius `lobe`, the band is `lobe` thick, the gap is
/// `opening` radians wide and bounded by two radial caps. All four corners
/// are rounded with radius `lobe/8`. Symmetric about the x₂-axis.
pub fn make_horseshoe(opening: f64, lobe: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("lobe", lobe)?;
    if !(opening > 0.0 && opening < PI * 1.5) {
        return bad(format!("opening must lie in (0, 3π/2), got {opening}"));
    }
    closed_from(&Piecewise::new(horseshoe_segments(opening, lobe), true), n)
}

fn horseshoe_segments(gamma: f64, rho: f64) -> Vec<Segment> {
    let (ro, ri, f) = (1.5 * rho, 0.5 * rho, rho / 8.0);
    let d_o = (f / (ro - f)).asin();
    let d_i = (f / (ri + f)).asin();
    let br = PI / 2.0 - gamma / 2.0;
    let bl = PI / 2.0 + gamma / 2.0;
    let dir = Vec2::from_angle;
    let (cap_out, cap_in) = ((ro - f) * d_o.cos(), (ri + f) * d_i.cos());
    vec![
        Segment::Arc { center: Vec2::ZERO, radius: ro, start: bl + d_o, sweep: 2.0 * PI - gamma - 2.0 * d_o },
        Segment::Arc { center: dir(br - d_o) * (ro - f), radius: f, start: br - d_o, sweep: PI / 2.0 + d_o },
        Segment::Line { a: dir(br) * cap_out, b: dir(br) * cap_in },
        Segment::Arc { center: dir(br - d_i) * (ri + f), radius: f, start: br + PI / 2.0, sweep: PI / 2.0 - d_i },
        Segment::Arc {
            center: Vec2::ZERO,
            radius: ri,
            start: br - d_i + 2.0 * PI,
            sweep: gamma + 2.0 * d_i - 2.0 * PI,
        },
        Segment::Arc { center: dir(bl + d_i) * (ri + f), radius: f, start: bl + d_i + PI, sweep: PI / 2.0 - d_i },
        Segment::Line { a: dir(bl) * cap_in, b: dir(bl) * cap_out },
        Segment::Arc { center: dir(bl + d_o) * (ro - f), radius: f, start: bl - PI / 2.0, sweep: PI / 2.0 + d_o },
    ]
}

/// The horseshoe whose caps are `neck_gap` apart on the centreline.
///
/// The flat caps carry the points `p` (right cap, `ν ≈ −e₁`) and `q` (left
/// cap, `ν ≈ e₁`). The construction checks its own `θ_min < −π`.
pub fn make_cexample(neck_gap: f64, lobe: f64, n: usize) -> Result<ClosedCurve, ScenarioError> {
    positive("neck_gap", neck_gap)?;
    positive("lobe", lobe)?;
    if neck_gap >= 2.0 * lobe {
        return bad(format!("neck_gap must be below twice the lobe size, got {neck_gap}"));
    }
    let gamma = 2.0 * (neck_gap / (2.0 * lobe)).asin();
    let c = make_horseshoe(gamma, lobe, n)?;
    let th = theta_extremes(&c).theta_min;
    if !(th < -PI) {
        return Err(ScenarioError::ThetaCertificate { theta_min: th });
    }
    Ok(c)
}

/// The grim reaper `x₂ = log cos x₁` on `|x₁| ≤ σ_max`, turning by π, axis e₂.
pub fn make_grim_reaper(sigma_max: f64, n: usize) -> Result<OpenCurve, ScenarioError> {
    if !(sigma_max > 0.0 && sigma_max < PI / 2.0) {
        return bad(format!("sigma_max must lie in (0, π/2), got {sigma_max}"));
    }
    if n < OpenCurve::MIN_VERTICES {
        return bad(format!("N must be at least {}, got {n}", OpenCurve::MIN_VERTICES));
    }
    let pts = equal_chord_points(&Reaper { sigma_max }, n)?;
    Ok(OpenCurve::truncated(pts, Vec2::E2, PI)?)
}

/// Two straight arms of length `truncation` joined by a unit-radius arc,
/// total curvature `alpha`, axis e₂.
pub fn make_open_vee(alpha: f64, n: usize, truncation: f64) -> Result<OpenCurve, ScenarioError> {
    if !(alpha.abs() < PI) {
        return bad(format!("alpha must lie in (−π, π), got {alpha}"));
    }
    positive("truncation", truncation)?;
    if n < OpenCurve::MIN_VERTICES {
        return bad(format!("N must be at least {}, got {n}", OpenCurve::MIN_VERTICES));
    }
    let a = alpha.abs();
    let t0 = Vec2::from_angle(PI - a / 2.0);
    let t1 = Vec2::from_angle(PI + a / 2.0);
    let segs = if a == 0.0 {
        vec![Segment::Line { a: Vec2::new(truncation, 0.0), b: Vec2::new(-truncation, 0.0) }]
    } else {
        let center = Vec2::new(0.0, -1.0);
        let arc = Segment::Arc { center, radius: 1.0, start: PI / 2.0 - a / 2.0, sweep: a };
        let p0 = arc.at(0.0);
        let p1 = arc.end();
        vec![Segment::Line { a: p0 - t0 * truncation, b: p0 }, arc, Segment::Line { a: p1, b: p1 + t1 * truncation }]
    };
    let mut pts = equal_chord_points(&Piecewise::new(segs, false), n)?;
    if alpha < 0.0 {
        for p in &mut pts {
            p.y = -p.y;
        }
    }
    Ok(OpenCurve::new(pts, Vec2::E2, alpha)?)
}

/// A named, fully parametrised initial curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpec {
    Circle {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "n256")]
        n: usize,
    },
    Ellipse {
        #[serde(default = "two")]
        a: f64,
        #[serde(default = "one")]
        b: f64,
        #[serde(default = "n256")]
        n: usize,
    },
    Superellipse {
        #[serde(default = "two")]
        a: f64,
        #[serde(default = "one")]
        b: f64,
        #[serde(default = "four")]
        p: f64,
        #[serde(default = "n256")]
        n: usize,
    },
    Wavy {
        #[serde(default = "wavy_eps")]
        amplitude: f64,
        #[serde(default = "three")]
        petals: u32,
        #[serde(default = "n512")]
        n: usize,
    },
    Square {
        #[serde(default = "one")]
        side: f64,
        #[serde(default = "n256")]
        n: usize,
    },
    Horseshoe {
        #[serde(default = "wide_opening")]
        opening: f64,
        #[serde(default = "one")]
        lobe: f64,
        #[serde(default = "n1024")]
        n: usize,
    },
    Cexample {
        #[serde(default = "neck")]
        neck_gap: f64,
        #[serde(default = "one")]
        lobe: f64,
        #[serde(default = "n1024")]
        n: usize,
    },
    GrimReaper {
        #[serde(default = "sigma")]
        sigma_max: f64,
        #[serde(default = "n512")]
        n: usize,
    },
    Vee {
        #[serde(default = "half_pi")]
        alpha: f64,
        #[serde(default = "n512")]
        n: usize,
        #[serde(default = "arm")]
        truncation: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn three() -> u32 {
    3
}
fn four() -> f64 {
    4.0
}
fn n256() -> usize {
    256
}
fn n512() -> usize {
    512
}
fn n1024() -> usize {
    1024
}
fn wavy_eps() -> f64 {
    0.3
}
fn wide_opening() -> f64 {
    1.2 * PI
}
fn neck() -> f64 {
    0.01
}
fn sigma() -> f64 {
    1.5
}
fn half_pi() -> f64 {
    PI / 2.0
}
fn arm() -> f64 {
    5.0
}

impl ScenarioSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::Circle { .. } => "circle",
            ScenarioSpec::Ellipse { .. } => "ellipse",
            ScenarioSpec::Superellipse { .. } => "superellipse",
            ScenarioSpec::Wavy { .. } => "wavy",
            ScenarioSpec::Square { .. } => "square",
            ScenarioSpec::Horseshoe { .. } => "horseshoe",
            ScenarioSpec::Cexample { .. } => "cexample",
            ScenarioSpec::GrimReaper { .. } => "grim_reaper",
            ScenarioSpec::Vee { .. } => "vee",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            ScenarioSpec::Circle { n, .. }
            | ScenarioSpec::Ellipse { n, .. }
            | ScenarioSpec::Superellipse { n, .. }
            | ScenarioSpec::Wavy { n, .. }
            | ScenarioSpec::Square { n, .. }
            | ScenarioSpec::Horseshoe { n, .. }
            | ScenarioSpec::Cexample { n, .. }
            | ScenarioSpec::GrimReaper { n, .. }
            | ScenarioSpec::Vee { n, .. } => n,
        }
    }

    /// The same scenario at another resolution.
    pub fn with_n(&self, n_new: usize) -> Self {
        let mut s = self.clone();
        match &mut s {
            ScenarioSpec::Circle { n, .. }
            | ScenarioSpec::Ellipse { n, .. }
            | ScenarioSpec::Superellipse { n, .. }
            | ScenarioSpec::Wavy { n, .. }
            | ScenarioSpec::Square { n, .. }
            | ScenarioSpec::Horseshoe { n, .. }
            | ScenarioSpec::Cexample { n, .. }
            | ScenarioSpec::GrimReaper { n, .. }
            | ScenarioSpec::Vee { n, .. } => *n = n_new,
        }
        s
    }

    pub fn build(&self) -> Result<Curve, ScenarioError> {
        Ok(match *self {
            ScenarioSpec::Circle { radius, n } => make_circle(radius, n)?.into(),
            ScenarioSpec::Ellipse { a, b, n } => make_ellipse(a, b, n)?.into(),
            ScenarioSpec::Superellipse { a, b, p, n } => make_superellipse(a, b, p, n)?.into(),
            ScenarioSpec::Wavy { amplitude, petals, n } => make_wavy(amplitude, petals, n)?.into(),
            ScenarioSpec::Square { side, n } => make_square(side, n)?.into(),
            ScenarioSpec::Horseshoe { opening, lobe, n } => make_horseshoe(opening, lobe, n)?.into(),
            ScenarioSpec::Cexample { neck_gap, lobe, n } => make_cexample(neck_gap, lobe, n)?.into(),
            ScenarioSpec::GrimReaper { sigma_max, n } => make_grim_reaper(sigma_max, n)?.into(),
            ScenarioSpec::Vee { alpha, n, truncation } => make_open_vee(alpha, n, truncation)?.into(),
        })
    }
}

/// One entry of the scenario catalogue.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub default: ScenarioSpec,
}

/// Every scenario with its default parameters.
pub fn catalog() -> Vec<CatalogEntry> {
    let e = |description, default: ScenarioSpec| CatalogEntry { name: default.name(), description, default };
    vec![
        e("regular polygon on a circle", ScenarioSpec::Circle { radius: 1.0, n: 256 }),
        e("ellipse at equal chord spacing", ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 256 }),
        e("convex superellipse |x/a|^p + |y/b|^p = 1", ScenarioSpec::Superellipse { a: 2.0, b: 1.0, p: 4.0, n: 256 }),
        e("star-shaped r = 1 + eps cos(m phi)", ScenarioSpec::Wavy { amplitude: 0.3, petals: 3, n: 512 }),
        e("axis-aligned square", ScenarioSpec::Square { side: 1.0, n: 256 }),
        e(
            "thick arc with a wide gap (theta_min above -pi)",
            ScenarioSpec::Horseshoe { opening: 1.2 * PI, lobe: 1.0, n: 1024 },
        ),
        e(
            "thick arc with a narrow neck (theta_min below -pi)",
            ScenarioSpec::Cexample { neck_gap: 0.01, lobe: 1.0, n: 1024 },
        ),
        e("truncated grim reaper, axis e2", ScenarioSpec::GrimReaper { sigma_max: 1.5, n: 512 }),
        e("two rays joined by a unit arc", ScenarioSpec::Vee { alpha: PI / 2.0, n: 512, truncation: 5.0 }),
    ]
}

/// Looks up a catalogue entry by name.
pub fn default_for(name: &str) -> Option<ScenarioSpec> {
    catalog().into_iter().find(|e| e.name == name).map(|e| e.default)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{enclosed_area, frame, length, Polyline};
    use crate::monitors::theta_extremes;

    #[test]
    fn circle_values() {
        let c = make_circle(1.0, 256).unwrap();
        assert!((length(&c) - 6.283028).abs() < 1e-6);
        let f = frame(&c).unwrap();
        assert!(f.kappa.iter().all(|k| (k - 1.0).abs() < 1e-4));
        assert!((enclosed_area(&make_circle(1.0, 4096).unwrap()).unwrap() - PI).abs() < 2e-6);
    }

    #[test]
    fn ellipse_values() {
        let e = make_ellipse(2.0, 1.0, 1024).unwrap();
        assert!((enclosed_area(&e).unwrap() - 2.0 * PI).abs() < 1e-4);
        assert_eq!(theta_extremes(&e).theta_min, 0.0);
        let f = frame(&e).unwrap();
        let spread = f.ds.iter().fold(0.0f64, |m, d| m.max((d - f.ds[0]).abs()));
        assert!(spread < 1e-12);
        let round = make_ellipse(1.0, 1.0, 64).unwrap();
        assert!(round.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn wavy_values() {
        let w = make_wavy(0.3, 3, 512).unwrap();
        let th = theta_extremes(&w).theta_min;
        assert!(th < 0.0 && th > -PI, "{th}");
        assert_eq!(theta_extremes(&make_wavy(0.05, 2, 256).unwrap()).theta_min, 0.0);
        assert!(make_wavy(1.2, 3, 256).is_err());
    }

    #[test]
    fn horseshoes() {
        let c = make_cexample(0.2, 1.0, 1024).unwrap();
        let th = theta_extremes(&c).theta_min;
        assert!(th < -1.1 * PI, "{th}");
        let wide = make_horseshoe(1.2 * PI, 1.0, 1024).unwrap();
        let th = theta_extremes(&wide).theta_min;
        assert!(th > -PI && th < 0.0, "{th}");
        // Symmetric about the x₂-axis: mirrored vertices stay on the curve.
        let f = frame(&wide).unwrap();
        assert!((f.total_turning() - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn grim_reaper_values() {
        let g = make_grim_reaper(1.5, 512).unwrap();
        assert!(!g.is_asymptotic());
        let v = g.vertices();
        let top = v.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.y));
        assert!(top <= 0.0 && top > -1e-3);
        assert!(make_grim_reaper(PI / 2.0, 512).is_err());
    }

    #[test]
    fn vees() {
        for alpha in [0.0, PI / 2.0, -PI / 2.0, 3.0] {
            let c = make_open_vee(alpha, 256, 5.0).unwrap();
            let f = frame(&c).unwrap();
            assert!((f.total_turning() - alpha).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic() {
        let a = ScenarioSpec::Cexample { neck_gap: 0.2, lobe: 1.0, n: 300 }.build().unwrap();
        let b = ScenarioSpec::Cexample { neck_gap: 0.2, lobe: 1.0, n: 300 }.build().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn catalog_builds() {
        for e in catalog() {
            e.default.build().unwrap();
        }
    }
}
