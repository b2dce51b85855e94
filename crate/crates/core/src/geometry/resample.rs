//! Equal-chord placement of vertices along a curve.
//!
//! Points are walked along a parametrised path so that consecutive points are
//! exactly one chord `c` apart, and `c` is then tuned until the walk closes
//! (or lands on the far end of an open path). Every output vertex lies on the
//! input path.

use super::curve::Polyline;
use super::{ClosedCurve, Curve, GeometryError, OpenCurve, Vec2};

/// A parametrised planar path on `[0, span]`, periodic when closed.
pub trait Path {
    fn span(&self) -> f64;
    fn closed(&self) -> bool;
    fn point(&self, u: f64) -> Vec2;
    /// Parameter increment that moves the point by roughly `chord / 4` or less.
    fn step_hint(&self, chord: f64) -> f64;
}

/// Piecewise linear path through a vertex list, parametrised by arclength.
pub struct PolylinePath<'a> {
    v: &'a [Vec2],
    s: Vec<f64>,
    closed: bool,
}

impl<'a> PolylinePath<'a> {
    pub fn new(v: &'a [Vec2], closed: bool) -> Self {
        let n = v.len();
        let ne = if closed { n } else { n - 1 };
        let mut s = Vec::with_capacity(ne + 1);
        s.push(0.0);
        for i in 0..ne {
            let l = v[i].dist(v[(i + 1) % n]);
            s.push(s[i] + l);
        }
        PolylinePath { v, s, closed }
    }
}

impl Path for PolylinePath<'_> {
    fn span(&self) -> f64 {
        *self.s.last().unwrap()
    }

    fn closed(&self) -> bool {
        self.closed
    }

    fn point(&self, u: f64) -> Vec2 {
        let l = self.span();
        let u = if self.closed { u.rem_euclid(l) } else { u.clamp(0.0, l) };
        let ne = self.s.len() - 1;
        let k = match self.s.binary_search_by(|x| x.total_cmp(&u)) {
            Ok(k) => k.min(ne - 1),
            Err(k) => k.saturating_sub(1).min(ne - 1),
        };
        let n = self.v.len();
        let a = self.v[k];
        let b = self.v[(k + 1) % n];
        let seg = self.s[k + 1] - self.s[k];
        let t = if seg > 0.0 { ((u - self.s[k]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        a + (b - a) * t
    }

    fn step_hint(&self, chord: f64) -> f64 {
        0.25 * chord
    }
}

/// Rough length from dense sampling of the parameter.
pub fn approx_length<P: Path + ?Sized>(path: &P, samples: usize) -> f64 {
    let span = path.span();
    let mut prev = path.point(0.0);
    let mut acc = 0.0;
    for k in 1..=samples {
        let p = path.point(span * k as f64 / samples as f64);
        acc += p.dist(prev);
        prev = p;
    }
    acc
}

enum Walk {
    /// Parameter reached after the requested number of chords.
    Done(f64, Vec<Vec2>),
    /// Ran off the end of an open path; carries an overshoot measure > 0.
    Stuck(f64),
}

fn next_crossing<P: Path + ?Sized>(path: &P, u0: f64, p: Vec2, c: f64) -> Option<f64> {
    let span = path.span();
    let du = path.step_hint(c).max(span * 1e-12);
    let mut ua = u0;
    loop {
        let mut ub = ua + du;
        let at_end = !path.closed() && ub >= span;
        if at_end {
            ub = span;
        }
        if path.closed() && ub - u0 > span {
            return None;
        }
        if path.point(ub).dist(p) >= c {
            let (mut lo, mut hi) = (ua, ub);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if path.point(mid).dist(p) >= c {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        if at_end {
            return None;
        }
        ua = ub;
    }
}

fn walk<P: Path + ?Sized>(path: &P, c: f64, chords: usize, keep: bool) -> Walk {
    let mut u = 0.0;
    let mut p = path.point(0.0);
    let mut pts = Vec::new();
    if keep {
        pts.push(p);
    }
    for k in 0..chords {
        match next_crossing(path, u, p, c) {
            Some(v) => {
                u = v;
                p = path.point(u);
                if keep {
                    pts.push(p);
                }
            }
            None => {
                let end = path.point(path.span());
                let left = (chords - k - 1) as f64 * c + (c - end.dist(p)).max(0.0);
                return Walk::Stuck(left.max(f64::MIN_POSITIVE));
            }
        }
    }
    Walk::Done(u, pts)
}

fn residual<P: Path + ?Sized>(path: &P, c: f64, chords: usize) -> f64 {
    match walk(path, c, chords, false) {
        Walk::Done(u, _) => u - path.span(),
        Walk::Stuck(over) => over,
    }
}

/// `n` points on `path` with all consecutive chords equal (cyclically for
/// closed paths). Open paths keep both end points.
pub fn equal_chord_points<P: Path + ?Sized>(path: &P, n: usize) -> Result<Vec<Vec2>, GeometryError> {
    let closed = path.closed();
    let chords = if closed { n } else { n - 1 };
    if chords < 2 {
        return Err(GeometryError::TooFewVertices { got: n, min: 3 });
    }
    let span = path.span();
    let total = approx_length(path, (16 * n).max(4096));
    if !(total > 0.0) {
        return Err(GeometryError::ZeroArea);
    }
    let mut hi = total / chords as f64;
    let mut f_hi = residual(path, hi, chords);
    let mut lo = hi;
    let mut f_lo = f_hi;
    let mut tries = 0;
    while f_hi < 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 1.25;
        f_hi = residual(path, hi, chords);
        tries += 1;
        if tries > 200 {
            return Err(GeometryError::ResampleFailed);
        }
    }
    if f_lo >= 0.0 {
        lo = hi;
        while f_lo >= 0.0 {
            if f_lo == 0.0 {
                hi = lo;
                f_hi = 0.0;
                break;
            }
            hi = lo;
            f_hi = f_lo;
            lo *= 0.8;
            f_lo = residual(path, lo, chords);
            tries += 1;
            if tries > 400 {
                return Err(GeometryError::ResampleFailed);
            }
        }
    }
    // Illinois iteration on the bracket [lo, hi].
    let mut c = hi;
    if f_hi != 0.0 {
        let mut side = 0i8;
        for _ in 0..300 {
            c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if !(c > lo && c < hi) {
                c = 0.5 * (lo + hi);
            }
            let fc = residual(path, c, chords);
            if fc == 0.0 || (hi - lo) <= 4.0 * f64::EPSILON * hi || fc.abs() <= 1e-15 * span {
                break;
            }
            if fc > 0.0 {
                hi = c;
                f_hi = fc;
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            } else {
                lo = c;
                f_lo = fc;
                if side == -1 {
                    f_hi *= 0.5;
                }
                side = -1;
            }
        }
    }
    match walk(path, c, chords, true) {
        Walk::Done(_, mut pts) => {
            if closed {
                pts.pop();
            } else {
                *pts.last_mut().unwrap() = path.point(span);
            }
            Ok(pts)
        }
        Walk::Stuck(_) => {
            // The converged chord can sit one rounding step past the end.
            match walk(path, c * (1.0 - 1e-14), chords, true) {
                Walk::Done(_, mut pts) => {
                    if closed {
                        pts.pop();
                    } else {
                        *pts.last_mut().unwrap() = path.point(span);
                    }
                    Ok(pts)
                }
                Walk::Stuck(_) => Err(GeometryError::ResampleFailed),
            }
        }
    }
}

/// Equal-spacing resampling of a raw vertex list.
pub fn resample_points(v: &[Vec2], closed: bool, n: usize) -> Result<Vec<Vec2>, GeometryError> {
    equal_chord_points(&PolylinePath::new(v, closed), n)
}

/// Curves that can be rebuilt at a new resolution.
pub trait Resample: Sized {
    fn resampled(&self, n: usize) -> Result<Self, GeometryError>;
}

impl Resample for ClosedCurve {
    fn resampled(&self, n: usize) -> Result<Self, GeometryError> {
        if n < Self::MIN_VERTICES {
            return Err(GeometryError::TooFewVertices { got: n, min: Self::MIN_VERTICES });
        }
        ClosedCurve::new(resample_points(self.vertices(), true, n)?)
    }
}

impl Resample for OpenCurve {
    fn resampled(&self, n: usize) -> Result<Self, GeometryError> {
        if n < Self::MIN_VERTICES {
            return Err(GeometryError::TooFewVertices { got: n, min: Self::MIN_VERTICES });
        }
        let pts = resample_points(self.vertices(), false, n)?;
        if self.is_asymptotic() {
            OpenCurve::new(pts, self.axis(), self.alpha())
        } else {
            OpenCurve::truncated(pts, self.axis(), self.alpha())
        }
    }
}

impl Resample for Curve {
    fn resampled(&self, n: usize) -> Result<Self, GeometryError> {
        Ok(match self {
            Curve::Closed(c) => Curve::Closed(c.resampled(n)?),
            Curve::Open(c) => Curve::Open(c.resampled(n)?),
        })
    }
}

/// `n` vertices at equal spacing along the polygon of `curve`.
pub fn resample_uniform<C: Resample>(curve: &C, n: usize) -> Result<C, GeometryError> {
    curve.resampled(n)
}
