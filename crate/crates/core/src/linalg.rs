//! Banded solves for the implicit curvature step.

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` (Thomas algorithm).
/// `a[0]` and `c[n-1]` are ignored. Returns `None` on a zero pivot.
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    if b[0] == 0.0 || !b[0].is_finite() {
        return None;
    }
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    Some(x)
}

/// Periodic tridiagonal solve: `a[0]` couples to `x[n-1]` and `c[n-1]` to
/// `x[0]`. Sherman–Morrison on top of the Thomas algorithm.
pub fn solve_cyclic(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    if n < 3 {
        return None;
    }
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= c[n - 1] * a[0] / gamma;
    let x = solve_tridiagonal(a, &bb, c, d)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];
    let z = solve_tridiagonal(a, &bb, c, &u)?;
    let vx = x[0] + a[0] * x[n - 1] / gamma;
    let vz = z[0] + a[0] * z[n - 1] / gamma;
    let denom = 1.0 + vz;
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let f = vx / denom;
    Some(x.iter().zip(&z).map(|(xi, zi)| xi - f * zi).collect())
}
