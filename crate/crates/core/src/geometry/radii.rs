use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::curve::Polyline;
use super::frame::turn;
use super::{ClosedCurve, GeometryError, Vec2};

/// Turning angles below this count as concave.
pub const CONVEX_TOL: f64 = -1e-9;

/// A circle given by centre and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: Vec2) -> bool {
        p.dist(self.center) <= self.radius * (1.0 + 1e-12) + 1e-300
    }
}

fn diametral(a: Vec2, b: Vec2) -> Circle {
    let center = (a + b) * 0.5;
    Circle { center, radius: a.dist(center).max(b.dist(center)) }
}

fn circumscribed(a: Vec2, b: Vec2, c: Vec2) -> Circle {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    let scale = ab.norm_sq().max(ac.norm_sq());
    if d.abs() <= 1e-14 * scale {
        // Nearly collinear: the widest pair decides.
        let cands = [diametral(a, b), diametral(a, c), diametral(b, c)];
        return cands.into_iter().max_by(|p, q| p.radius.total_cmp(&q.radius)).unwrap();
    }
    let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / d;
    let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / d;
    let center = a + Vec2::new(ux, uy);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Circle { center, radius }
}

/// Smallest circle containing all points (incremental algorithm over a
/// fixed-seed shuffle, so the result is deterministic).
pub fn min_enclosing_circle(points: &[Vec2]) -> Circle {
    let mut p = points.to_vec();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let mut c = Circle { center: p[0], radius: 0.0 };
    for i in 1..p.len() {
        if c.contains(p[i]) {
            continue;
        }
        c = Circle { center: p[i], radius: 0.0 };
        for j in 0..i {
            if c.contains(p[j]) {
                continue;
            }
            c = diametral(p[i], p[j]);
            for k in 0..j {
                if !c.contains(p[k]) {
                    c = circumscribed(p[i], p[j], p[k]);
                }
            }
        }
    }
    c
}

fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Largest circle inside a convex, positively oriented polygon.
///
/// The depth `min_i dist(x, edge line i)` is concave, so a nested golden
/// section over the bounding box finds its maximum.
pub fn max_inscribed_circle(v: &[Vec2]) -> Circle {
    let n = v.len();
    let lines: Vec<(Vec2, Vec2)> = (0..n)
        .map(|i| {
            let a = v[i];
            let d = (v[(i + 1) % n] - a).normalized();
            (a, d)
        })
        .collect();
    let depth = |x: Vec2| lines.iter().fold(f64::INFINITY, |m, &(a, d)| m.min(d.cross(x - a)));
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in v {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let best_y = |x: f64| golden_max(|y| depth(Vec2::new(x, y)), y0, y1, 64);
    let (x, _) = golden_max(|x| best_y(x).1, x0, x1, 64);
    let (y, r) = best_y(x);
    Circle { center: Vec2::new(x, y), radius: r }
}

/// Whether every turning angle is at least [`CONVEX_TOL`].
pub fn is_convex(curve: &ClosedCurve) -> bool {
    min_turning(curve.vertices()) >= CONVEX_TOL
}

pub(crate) fn min_turning(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| turn(v[i] - v[(i + n - 1) % n], v[(i + 1) % n] - v[i])).fold(f64::INFINITY, f64::min)
}

/// Inscribed and circumscribed radii `(r_in, r_circ)` of a convex curve.
pub fn radii(curve: &ClosedCurve) -> Result<(f64, f64), GeometryError> {
    let v = curve.vertices();
    let m = min_turning(v);
    if m < CONVEX_TOL {
        return Err(GeometryError::NotConvex { min_turning: m });
    }
    Ok((max_inscribed_circle(v).radius, min_enclosing_circle(v).radius))
}
