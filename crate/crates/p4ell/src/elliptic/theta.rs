//! Jacobi theta functions ϑ(z, τ) = Σ e^{πiτn² + 2πizn} (the ϑ₃-type series
//! used throughout) and the odd theta ϑ₁ used for the Weierstrass function.
//!
//! Arguments are reduced into the fundamental domain of the lattice
//! Z + τZ before summation, so evaluations stay stable for the large
//! arguments that appear in t-scans; the quasi-periodicity corrections are
//! reinstated exactly.

use crate::error::{Error, Result};
use crate::num::{c, C};
use std::f64::consts::PI;

/// Truncation context for theta series at a fixed τ.
#[derive(Debug, Clone)]
pub struct ThetaContext {
    pub tau: C,
    /// ν = (1 + τ)/2, the half-period combination entering every formula.
    pub nu: C,
    /// Truncation order: the series run over |n| ≤ n_max.
    pub n_max: usize,
}

/// Series tail target: |q|^{N²} < 1e-18 on the reduced domain.
const TAIL_LOG10: f64 = -18.0;

impl ThetaContext {
    pub fn new(tau: C) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!("Im tau = {} must be positive", tau.im)));
        }
        // On the reduced domain |Im z| ≤ Im τ/2 + 1/2; bound the tail of
        // Σ exp(−π Im τ n² + 2π |Im z| n) by solving the exponent quadratic.
        let it = tau.im;
        let iy = 0.5 * it + 0.5;
        let ln10 = std::f64::consts::LN_10;
        let target = -TAIL_LOG10 * ln10;
        // π·it·n² − 2π·iy·n ≥ target
        let disc = (PI * iy) * (PI * iy) + PI * it * target;
        let n = ((PI * iy + disc.sqrt()) / (PI * it)).ceil() as usize + 2;
        Ok(ThetaContext {
            tau,
            nu: (tau + 1.0) * 0.5,
            n_max: n.max(4),
        })
    }

    /// Split z = x + yτ (real lattice coordinates) and reduce to the
    /// fundamental domain; returns (z_reduced, n) with
    /// z = z_reduced + m + nτ for integers m, n.
    fn reduce(&self, z: C) -> (C, i64) {
        let y = z.im / self.tau.im;
        let x = z.re - y * self.tau.re;
        let m = x.round() as i64;
        let n = y.round() as i64;
        let zr = z - c(m as f64, 0.0) - self.tau * (n as f64);
        (zr, n)
    }

    /// ϑ(z, τ) = 1 + 2 Σ_{n≥1} q^{n²} cos(2πnz).
    pub fn theta(&self, z: C) -> C {
        let (zr, n) = self.reduce(z);
        // ϑ(z + m + nτ) = e^{−πiτn² − 2πinz_r} ϑ(z_r); invert for ϑ(z).
        let factor = (-(self.tau * ((n * n) as f64) + zr * (2.0 * n as f64)) * PI * crate::num::I).exp();
        self.theta_reduced(zr) * factor
    }

    fn theta_reduced(&self, z: C) -> C {
        let q_exp = self.tau * PI * crate::num::I;
        let zpi = z * 2.0 * PI * crate::num::I;
        let mut acc = c(1.0, 0.0);
        for n in 1..=self.n_max {
            let nf = n as f64;
            let base = (q_exp * (nf * nf)).exp();
            acc += base * ((zpi * nf).exp() + (-zpi * nf).exp());
        }
        acc
    }

    /// d/dz ln ϑ(z, τ), with the exact −2πin quasi-periodicity correction.
    pub fn theta_logderiv(&self, z: C) -> C {
        let (zr, n) = self.reduce(z);
        let (mut num, mut den) = (c(0.0, 0.0), c(1.0, 0.0));
        let q_exp = self.tau * PI * crate::num::I;
        let zpi = zr * 2.0 * PI * crate::num::I;
        for k in 1..=self.n_max {
            let kf = k as f64;
            let base = (q_exp * (kf * kf)).exp();
            let ep = (zpi * kf).exp();
            let em = (-zpi * kf).exp();
            den += base * (ep + em);
            num += base * (ep - em) * (2.0 * PI * kf) * crate::num::I;
        }
        num / den - c(0.0, 2.0 * PI) * (n as f64)
    }

    /// d²/dz² ln ϑ(z, τ) = ϑ''/ϑ − (ϑ'/ϑ)², which is fully periodic (both
    /// quasi-periodicity corrections are affine), so the reduction needs no
    /// correction term.
    pub fn theta_logderiv2(&self, z: C) -> C {
        let (zr, _) = self.reduce(z);
        let (mut num1, mut num2, mut den) = (c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let q_exp = self.tau * PI * crate::num::I;
        let zpi = zr * 2.0 * PI * crate::num::I;
        for k in 1..=self.n_max {
            let kf = k as f64;
            let base = (q_exp * (kf * kf)).exp();
            let ep = (zpi * kf).exp();
            let em = (-zpi * kf).exp();
            let factor = c(0.0, 2.0 * PI * kf);
            den += base * (ep + em);
            num1 += base * (ep - em) * factor;
            num2 += base * (ep + em) * factor * factor;
        }
        let l1 = num1 / den;
        num2 / den - l1 * l1
    }

    /// ϑ₁(v, τ) = 2 Σ (−1)^n q^{(n+1/2)²} sin((2n+1)πv) and its first three
    /// log-derivative combinations, reduced into the fundamental domain.
    /// Returns (d ln ϑ₁, d² ln ϑ₁, d³ ln ϑ₁) at v.
    pub fn theta1_logderivs(&self, v: C) -> (C, C, C) {
        let (vr, n) = self.reduce(v);
        let (mut t0, mut t1, mut t2, mut t3) = (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let q_exp = self.tau * PI * crate::num::I;
        for k in 0..=self.n_max {
            let half = k as f64 + 0.5;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = (q_exp * (half * half)).exp() * (2.0 * sign);
            let m = (2 * k + 1) as f64 * PI;
            let arg = vr * m;
            let (s, cs) = (arg.sin(), arg.cos());
            t0 += base * s;
            t1 += base * cs * m;
            t2 -= base * s * (m * m);
            t3 -= base * cs * (m * m * m);
        }
        let l1 = t1 / t0;
        let l2 = t2 / t0 - l1 * l1;
        let l3 = t3 / t0 - l1 * (t2 / t0) * 3.0 + l1 * l1 * l1 * 2.0;
        // ln ϑ₁(v + m + nτ) = ln ϑ₁(v) + (linear in v) ⇒ only the first
        // derivative picks up the −2πin correction.
        (l1 - c(0.0, 2.0 * PI) * (n as f64), l2, l3)
    }

    /// ϑ₁'''(0)/ϑ₁'(0), the constant fixing the ℘ normalisation.
    pub fn theta1_triple_prime_ratio(&self) -> C {
        let (mut t1, mut t3) = (c(0.0, 0.0), c(0.0, 0.0));
        let q_exp = self.tau * PI * crate::num::I;
        for k in 0..=self.n_max {
            let half = k as f64 + 0.5;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = (q_exp * (half * half)).exp() * (2.0 * sign);
            let m = (2 * k + 1) as f64 * PI;
            t1 += base * m;
            t3 -= base * (m * m * m);
        }
        t3 / t1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::cis;

    fn ctx(tau: C) -> ThetaContext {
        ThetaContext::new(tau).unwrap()
    }

    /// Brute-force partial sums as the independent oracle.
    fn theta_brute(z: C, tau: C, n: usize) -> C {
        let mut acc = c(0.0, 0.0);
        for k in -(n as i64)..=(n as i64) {
            let kf = k as f64;
            acc += ((tau * (kf * kf) + z * (2.0 * kf)) * PI * crate::num::I).exp();
        }
        acc
    }

    #[test]
    fn reference_value_at_origin() {
        // ϑ(0, i) by direct summation (N = 50): 1.08643481...
        let t = ctx(c(0.0, 1.0));
        let oracle = theta_brute(c(0.0, 0.0), c(0.0, 1.0), 50);
        assert!((oracle.re - 1.08643481).abs() < 1e-8);
        assert!((t.theta(c(0.0, 0.0)) - oracle).norm() < 1e-14);
    }

    #[test]
    fn period_one_invariance() {
        let t = ctx(c(0.3, 0.8));
        let z = c(0.37, 0.11);
        assert!((t.theta(z + 1.0) - t.theta(z)).norm() < 1e-13);
    }

    #[test]
    fn quasi_periodicity_in_tau() {
        let tau = c(-0.2, 0.9);
        let t = ctx(tau);
        let z = c(0.21, -0.35);
        let lhs = t.theta(z + tau);
        let rhs = (-(tau + z * 2.0) * PI * crate::num::I).exp() * t.theta(z);
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn logderiv_matches_finite_difference() {
        let t = ctx(c(0.1, 1.2));
        let z = c(0.4, 0.7);
        let h = 1e-6;
        let fd = (t.theta(z + h).ln() - t.theta(z - h).ln()) / (2.0 * h);
        assert!((t.theta_logderiv(z) - fd).norm() < 1e-8);
    }

    #[test]
    fn logderiv_quasi_periodicity() {
        // ϑ'/ϑ(z + τ) = ϑ'/ϑ(z) − 2πi, honoured through the reduction.
        let tau = c(0.22, 0.71);
        let t = ctx(tau);
        let z = c(0.13, 0.4);
        let lhs = t.theta_logderiv(z + tau * 3.0);
        let rhs = t.theta_logderiv(z) - c(0.0, 6.0 * PI);
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn large_argument_stability() {
        // Reduction keeps huge arguments finite and consistent.
        let tau = c(0.05, 0.6);
        let t = ctx(tau);
        let z = c(0.3, 0.1) + tau * 400.0 + 123.0;
        let v = t.theta_logderiv(z);
        let expected = t.theta_logderiv(c(0.3, 0.1)) - c(0.0, 2.0 * PI * 400.0);
        assert!(v.is_finite());
        assert!((v - expected).norm() < 1e-10 * (1.0 + expected.norm()));
    }

    #[test]
    fn theta1_logderiv_consistency() {
        // Finite differences of the ϑ₁ log-derivative chain.
        let t = ctx(c(0.15, 0.95));
        let v = c(0.27, 0.33);
        let h = 1e-5;
        let (l1p, _, _) = t.theta1_logderivs(v + h);
        let (l1m, _, _) = t.theta1_logderivs(v - h);
        let (_, l2, l3) = t.theta1_logderivs(v);
        assert!(((l1p - l1m) / (2.0 * h) - l2).norm() < 1e-7);
        let (_, l2p, _) = t.theta1_logderivs(v + h);
        let (_, l2m, _) = t.theta1_logderivs(v - h);
        assert!(((l2p - l2m) / (2.0 * h) - l3).norm() < 1e-6);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(ThetaContext::new(c(0.4, -0.1)).is_err());
    }

    #[test]
    fn works_on_rotated_moderate_tau() {
        // A τ of the kind the trajectory produces.
        let tau = cis(1.9) * 0.8 + c(0.0, 1.0);
        let t = ctx(tau);
        let z = c(0.4, 0.2);
        let oracle = theta_brute(z, tau, 60);
        assert!((t.theta(z) - oracle).norm() < 1e-12 * (1.0 + oracle.norm()));
    }
}
