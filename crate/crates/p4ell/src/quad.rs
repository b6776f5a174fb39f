//! Quadrature primitives: Gauss–Legendre rules with cached nodes and an
//! adaptive doubling driver for complex-valued integrands.

use crate::error::{Error, Result};
use crate::num::C;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on P_n with the usual interior-extremum initial guesses.
pub fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(rule) = guard.get(&n) {
        return rule;
    }
    let rule: &'static _ = Box::leak(Box::new(compute_gauss_legendre(n)));
    guard.insert(n, rule);
    rule
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_pd(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss–Legendre integral of `f` over `[a, b]` (real interval,
/// complex integrand).  The integrand receives the node and its index within
/// the sorted node list, which branch-tracking integrands use for continuity.
pub fn gl_integrate<F: FnMut(f64) -> C>(a: f64, b: f64, n: usize, mut f: F) -> C {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// Adaptive driver: evaluates `make(n)` (a fresh fixed-order estimate at
/// order n) at doubling orders until two consecutive estimates agree to
/// `tol` (absolute, plus relative at the same magnitude).  Returns the last
/// estimate and the error estimate.
pub fn adaptive<F: FnMut(usize) -> C>(mut make: F, tol: f64, n0: usize, n_max: usize) -> Result<(C, f64)> {
    let mut n = n0.max(8);
    let mut prev = make(n);
    loop {
        n *= 2;
        let cur = make(n);
        let err = (cur - prev).norm();
        let scale = 1.0_f64.max(cur.norm());
        if err <= tol * scale {
            return Ok((cur, err));
        }
        if n >= n_max {
            return Err(Error::Precision {
                estimate: err,
                tol: tol * scale,
            });
        }
        prev = cur;
    }
}

/// Trapezoidal rule for a 2π-periodic integrand (spectrally accurate on
/// closed analytic contours).
pub fn periodic_trapezoid<F: FnMut(f64) -> C>(n: usize, mut f: F) -> C {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut acc = C::new(0.0, 0.0);
    for k in 0..n {
        acc += f(k as f64 * h);
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // Degree 2n-1 exactness: x^7 over [0, 1] with n = 4.
        let v = gl_integrate(0.0, 1.0, 4, |x| C::new(x.powi(7), 0.0));
        assert!((v.re - 0.125).abs() < 1e-15, "{v}");
    }

    #[test]
    fn gl_high_order_smooth() {
        let v = gl_integrate(0.0, PI, 48, |x| C::new(x.sin(), 0.0));
        assert!((v.re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_reports_error_estimate() {
        let (v, err) = adaptive(
            |n| gl_integrate(0.0, 1.0, n, |x| C::new((10.0 * x).cos(), 0.0)),
            1e-12,
            8,
            1 << 12,
        )
        .unwrap();
        assert!((v.re - 10.0_f64.sin() / 10.0).abs() < 1e-12);
        assert!(err < 1e-10);
    }

    #[test]
    fn trapezoid_on_circle_counts_winding() {
        // (1/2πi)∮ dz/z over |z| = 2.
        let v = periodic_trapezoid(32, |t| {
            let z = C::new(2.0 * t.cos(), 2.0 * t.sin());
            let dz = C::new(-2.0 * t.sin(), 2.0 * t.cos());
            dz / z
        }) / C::new(0.0, 2.0 * PI);
        assert!((v - C::new(1.0, 0.0)).norm() < 1e-13);
    }
}
