//! Reference computations used as ground truth by the test suite.
//!
//! Nothing here calls into the geometry or monitor code: every quantity is
//! recomputed from raw coordinates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::Trajectory;
use crate::monitors::{PairRatioReport, RatioKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("t = {t} is at or past the extinction time {t_ext}")]
    PastExtinction { t: f64, t_ext: f64 },
    #[error("need at least 5 uniformly spaced snapshots, got {0}")]
    TooFewSamples(usize),
    #[error("snapshots are not uniformly spaced in time")]
    NonUniform,
    #[error("no recorded h at step {0}")]
    MissingH(usize),
}

type P = [f64; 2];

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: P) -> f64 {
    a[0].hypot(a[1])
}

fn cross(a: P, b: P) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: P, b: P) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Radius of the circle shrinking under curve shortening: `√(R₀² − 2t)`.
pub fn exact_circle_csf(r0: f64, t: f64) -> Result<f64, OracleError> {
    let t_ext = r0 * r0 / 2.0;
    if t >= t_ext {
        return Err(OracleError::PastExtinction { t, t_ext });
    }
    Ok((r0 * r0 - 2.0 * t).sqrt())
}

/// Perimeter of a closed or open polygon.
pub fn perimeter(v: &[P], closed: bool) -> f64 {
    let n = v.len();
    let ne = if closed { n } else { n - 1 };
    (0..ne).map(|i| norm(sub(v[(i + 1) % n], v[i]))).sum()
}

/// Shoelace area.
pub fn shoelace(v: &[P]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>()
}

/// `Σ κ_i² (e_{i−1} + e_i)/2` with the circumcircle curvature
/// `κ_i = 2 sin φ_i / |X_{i+1} − X_{i−1}|` of a closed polygon.
pub fn menger_energy(v: &[P]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            let (u, w) = (sub(b, a), sub(c, b));
            let (lu, lw) = (norm(u), norm(w));
            let k = 2.0 * cross(u, w) / (lu * lw * norm(sub(c, a)));
            k * k * 0.5 * (lu + lw)
        })
        .sum()
}

/// Which identity [`fd_identity_check`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `dA/dt = hL − 2π`.
    Area,
    /// `dL/dt = 2πh − ∫κ² ds`.
    Length,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    pub which: Identity,
    pub max_defect: f64,
    /// `(t, defect)` at each interior snapshot.
    pub defects: Vec<(f64, f64)>,
}

/// Compares a central difference of `A` or `L` across consecutive snapshots
/// with the right-hand side evaluated at the middle snapshot. Snapshots must
/// be uniformly spaced in time; `h` is read from the recorded series.
pub fn fd_identity_check(traj: &Trajectory, which: Identity) -> Result<FdReport, OracleError> {
    let snaps: Vec<_> = traj.snapshots.iter().filter(|s| s.t > 0.0 || s.step == 0).collect();
    let m = snaps.len();
    if m < 5 {
        return Err(OracleError::TooFewSamples(m));
    }
    let pts: Vec<Vec<P>> = snaps.iter().map(|s| s.vertices.iter().map(|&p| p.into()).collect()).collect();
    let value = |k: usize| match which {
        Identity::Area => shoelace(&pts[k]),
        Identity::Length => perimeter(&pts[k], true),
    };
    let mut defects = Vec::with_capacity(m - 2);
    for k in 1..m - 1 {
        let (t0, t1, t2) = (snaps[k - 1].t, snaps[k].t, snaps[k + 1].t);
        if ((t2 - t1) - (t1 - t0)).abs() > 1e-9 * (t2 - t0) {
            return Err(OracleError::NonUniform);
        }
        let h = traj
            .samples
            .iter()
            .find(|s| s.step == snaps[k].step)
            .map(|s| s.h)
            .ok_or(OracleError::MissingH(snaps[k].step))?;
        let l = perimeter(&pts[k], true);
        let rhs = match which {
            Identity::Area => h * l - 2.0 * PI,
            Identity::Length => 2.0 * PI * h - menger_energy(&pts[k]),
        };
        let lhs = (value(k + 1) - value(k - 1)) / (t2 - t0);
        defects.push((t1, (lhs - rhs).abs()));
    }
    let max_defect = defects.iter().fold(0.0f64, |a, d| a.max(d.1));
    Ok(FdReport { which, max_defect, defects })
}

/// Observed order `log₂(coarse/fine)` of a defect under one halving.
pub fn refinement_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // Split first so the error estimate sees the whole period.
    let k = 16;
    let h = (b - a) / k as f64;
    (0..k)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            simpson(f, x0, x1, f0, fm, f1, h / 6.0 * (f0 + 4.0 * fm + f1), tol / k as f64, 40)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipseFunctional {
    Length,
    Energy,
    KappaMax,
}

/// Closed-form ellipse quantities, by quadrature where needed (tolerance 1e−12).
pub fn ellipse_quadrature(a: f64, b: f64, which: EllipseFunctional) -> f64 {
    let q = move |t: f64| (a * t.sin()).powi(2) + (b * t.cos()).powi(2);
    match which {
        EllipseFunctional::Length => integrate(&|t| q(t).sqrt(), 0.0, 2.0 * PI, 1e-12),
        EllipseFunctional::Energy => integrate(&|t| (a * b).powi(2) / q(t).powf(2.5), 0.0, 2.0 * PI, 1e-12),
        EllipseFunctional::KappaMax => (a / (b * b)).max(b / (a * a)),
    }
}

/// Straight double loop over vertex pairs for `d/l` or `d/ψ`.
pub fn brute_force_ratio(v: &[P], kind: RatioKind) -> PairRatioReport {
    let n = v.len();
    let closed = kind == RatioKind::DOverPsi;
    let mut s = vec![0.0; n];
    for i in 1..n {
        s[i] = s[i - 1] + norm(sub(v[i], v[i - 1]));
    }
    let total = if closed { s[n - 1] + norm(sub(v[0], v[n - 1])) } else { s[n - 1] };
    let mut best = 1.0;
    let mut arg = (0, 0);
    for p in 0..n {
        for q in p + 1..n {
            let d = norm(sub(v[q], v[p]));
            let l = s[q] - s[p];
            let r = if closed {
                let l = l.min(total - l);
                d / (total / PI * (PI * l / total).sin())
            } else {
                d / l
            };
            if r < best {
                best = r;
                arg = (p, q);
            }
        }
    }
    PairRatioReport { kind, min_value: best, argmin: (arg.0, arg.1), truncated: !closed, matrix: None }
}

/// `(θ_min, θ_sup)` by direct summation of exterior angles between each pair.
///
/// The vertex at each end of the range contributes half its angle; the
/// diagonal contributes 0 to the minimum and, on closed curves, the total
/// turning to the supremum.
pub fn brute_force_theta(v: &[P], closed: bool) -> (f64, f64) {
    let n = v.len();
    let phi: Vec<f64> = (0..n)
        .map(|i| {
            if !closed && (i == 0 || i == n - 1) {
                return 0.0;
            }
            let a = sub(v[i], v[(i + n - 1) % n]);
            let b = sub(v[(i + 1) % n], v[i]);
            cross(a, b).atan2(dot(a, b))
        })
        .collect();
    let total: f64 = phi.iter().sum();
    let (mut lo, mut hi) = (0.0f64, if closed { total } else { 0.0 });
    for i in 0..n {
        let mut acc = 0.5 * phi[i];
        let steps = if closed { n - 1 } else { n - 1 - i };
        for k in 1..=steps {
            let j = (i + k) % n;
            let th = acc + 0.5 * phi[j];
            lo = lo.min(th);
            hi = hi.max(th);
            acc += phi[j];
        }
    }
    (lo, hi)
}

/// θ_min of `r(φ) = 1 + ε cos(mφ)` from its analytic tangent angle on a grid
/// of `samples` points.
pub fn polar_theta_min(eps: f64, m: f64, samples: usize) -> f64 {
    let angle = |u: f64| {
        let r = 1.0 + eps * (m * u).cos();
        let dr = -eps * m * (m * u).sin();
        u + r.atan2(dr)
    };
    let mut t = Vec::with_capacity(samples);
    let mut prev = angle(0.0);
    t.push(prev);
    for k in 1..samples {
        let mut a = angle(2.0 * PI * k as f64 / samples as f64);
        while a - prev > PI {
            a -= 2.0 * PI;
        }
        while a - prev < -PI {
            a += 2.0 * PI;
        }
        t.push(a);
        prev = a;
    }
    // Forward pairs i < j give T_j − T_i; wrapped pairs give 2π − (T_i − T_j).
    let mut lo = 0.0f64;
    let mut run_max = t[0];
    let mut run_min = t[0];
    for &x in &t[1..] {
        lo = lo.min(x - run_max);
        run_max = run_max.max(x);
        run_min = run_min.min(x);
        lo = lo.min(2.0 * PI - (x - run_min));
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_solution() {
        assert_eq!(exact_circle_csf(1.0, 0.0).unwrap(), 1.0);
        assert!((exact_circle_csf(1.0, 0.375).unwrap() - 0.5).abs() < 1e-15);
        assert!(exact_circle_csf(1.0, 0.5).is_err());
        for t in [0.1, 0.3, 0.49] {
            let k = 1.0 / exact_circle_csf(1.0, t).unwrap();
            assert!((k * (0.5 - t).sqrt() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_values() {
        assert!((ellipse_quadrature(1.0, 1.0, EllipseFunctional::Length) - 2.0 * PI).abs() < 1e-12);
        assert!((ellipse_quadrature(1.0, 1.0, EllipseFunctional::Energy) - 2.0 * PI).abs() < 1e-12);
        assert_eq!(ellipse_quadrature(2.0, 1.0, EllipseFunctional::KappaMax), 2.0);
        // Ramanujan's second approximation is good to ~1e−9 at this eccentricity.
        let h = (1.0f64 / 3.0).powi(2);
        let ram = PI * 3.0 * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((ellipse_quadrature(2.0, 1.0, EllipseFunctional::Length) - ram).abs() < 1e-6);
    }

    #[test]
    fn theta_on_square_corners() {
        let v: Vec<P> = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let (lo, hi) = brute_force_theta(&v, true);
        assert_eq!(lo, 0.0);
        assert!((hi - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn polar_oracle_on_circle() {
        assert!(polar_theta_min(0.0, 3.0, 1000).abs() < 1e-12);
        assert!(polar_theta_min(0.3, 3.0, 4000) < 0.0);
    }
}
