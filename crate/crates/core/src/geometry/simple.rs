use serde::{Deserialize, Serialize};

use super::curve::Polyline;
use super::Vec2;

/// First crossing of two non-adjacent edges, in lexicographic edge order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub edges: (usize, usize),
    pub point: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Simplicity {
    Simple,
    Crossing(Crossing),
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple)
    }

    pub fn crossing(&self) -> Option<Crossing> {
        match self {
            Simplicity::Simple => None,
            Simplicity::Crossing(c) => Some(*c),
        }
    }
}

#[inline]
fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

#[inline]
fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Intersection point of segments `ab` and `cd`, if they meet.
pub(crate) fn segment_hit(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<Vec2> {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        let t = d1 / (d1 - d2);
        return Some(a + (b - a) * t);
    }
    if d1 == 0.0 && on_segment(c, d, a) {
        return Some(a);
    }
    if d2 == 0.0 && on_segment(c, d, b) {
        return Some(b);
    }
    if d3 == 0.0 && on_segment(a, b, c) {
        return Some(c);
    }
    if d4 == 0.0 && on_segment(a, b, d) {
        return Some(d);
    }
    None
}

/// Tests every pair of non-adjacent edges whose bounding boxes overlap.
///
/// Candidate pairs come from a sort along x, which yields exactly the pairs
/// an all-pairs bounding-box filter would keep; the reported crossing is the
/// lexicographically smallest `(i, j)` with `i < j`.
pub fn is_simple<C: Polyline + ?Sized>(curve: &C) -> Simplicity {
    simplicity_of(curve.vertices(), curve.is_closed())
}

pub(crate) fn simplicity_of(v: &[Vec2], closed: bool) -> Simplicity {
    let n = v.len();
    let ne = if closed { n } else { n - 1 };
    let seg = |i: usize| (v[i], v[(i + 1) % n]);
    let mut order: Vec<(f64, f64, f64, f64, usize)> = (0..ne)
        .map(|i| {
            let (a, b) = seg(i);
            (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y), i)
        })
        .collect();
    order.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.4.cmp(&q.4)));
    let adjacent = |i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        j == i + 1 || (closed && i == 0 && j == ne - 1)
    };
    let mut best: Option<Crossing> = None;
    for (k, p) in order.iter().enumerate() {
        for q in &order[k + 1..] {
            if q.0 > p.1 {
                break;
            }
            if q.2 > p.3 || p.2 > q.3 {
                continue;
            }
            let (i, j) = if p.4 < q.4 { (p.4, q.4) } else { (q.4, p.4) };
            if adjacent(i, j) {
                continue;
            }
            if let Some(b) = best {
                if (i, j) >= b.edges {
                    continue;
                }
            }
            let (a0, a1) = seg(i);
            let (b0, b1) = seg(j);
            if let Some(point) = segment_hit(a0, a1, b0, b1) {
                best = Some(Crossing { edges: (i, j), point });
            }
        }
    }
    match best {
        None => Simplicity::Simple,
        Some(c) => Simplicity::Crossing(c),
    }
}
