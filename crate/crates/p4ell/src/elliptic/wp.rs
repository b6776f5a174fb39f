//! Weierstrass ℘ on an explicit lattice, through the ϑ₁ log-derivative:
//!
//!   ℘(u) = −Ω_a⁻²[ (ln ϑ₁)''(u/Ω_a) − ϑ₁'''(0)/(3ϑ₁'(0)) ],
//!   ℘'(u) = −Ω_a⁻³ (ln ϑ₁)'''(u/Ω_a),
//!
//! plus the trigonometric degenerations used near the boundary rays.

use super::theta::ThetaContext;
use crate::error::Result;
use crate::num::{c, C};

/// A period lattice Ω_a Z + Ω_b Z with Im(Ω_b/Ω_a) > 0.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub omega_a: C,
    pub omega_b: C,
    pub theta: ThetaContext,
    c0: C,
}

impl Lattice {
    pub fn new(omega_a: C, omega_b: C) -> Result<Self> {
        let theta = ThetaContext::new(omega_b / omega_a)?;
        let c0 = theta.theta1_triple_prime_ratio() / 3.0;
        Ok(Lattice {
            omega_a,
            omega_b,
            theta,
            c0,
        })
    }

    /// ℘(u) on this lattice.
    pub fn wp(&self, u: C) -> C {
        let v = u / self.omega_a;
        let (_, l2, _) = self.theta.theta1_logderivs(v);
        -(l2 - self.c0) / (self.omega_a * self.omega_a)
    }

    /// ℘'(u) on this lattice.
    pub fn wp_prime(&self, u: C) -> C {
        let v = u / self.omega_a;
        let (_, _, l3) = self.theta.theta1_logderivs(v);
        -l3 / (self.omega_a * self.omega_a * self.omega_a)
    }
}

/// Invariants (g₂, g₃) of the curve at (φ, A):
/// g₂ = −4e^{4iφ}(A − 1/3), g₃ = e^{6iφ}(−A² + 4A/3 − 8/27).
pub fn invariants(phi: f64, a: C) -> (C, C) {
    let rot = crate::num::cis(phi);
    let g2 = (a - 1.0 / 3.0) * rot.powu(4) * -4.0;
    let g3 = (-a * a + a * (4.0 / 3.0) - 8.0 / 27.0) * rot.powu(6);
    (g2, g3)
}

/// Modular discriminant Δ = g₂³ − 27 g₃².
pub fn discriminant(g2: C, g3: C) -> C {
    g2 * g2 * g2 - g3 * g3 * 27.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateMode {
    /// ℘(u) ≈ −ω̂²/3 + ω̂²/sin²(ω̂u), valid near the real period line.
    Sine,
    /// ℘(u) ≈ −ω̂²/3 − 8ω̂²h·cos(2ω̂(u−ω′)), valid near the ω′ line.
    Cosine,
}

/// Trigonometric degeneration of ℘ for half-periods (ω, ω′) with
/// ω̂ = π/(2ω) and nome h = e^{iπω′/ω}; accurate to O(h)-level terms when
/// |h| is small.  Returns the approximation and whether |h| is inside the
/// requested validity threshold.
pub fn wp_degenerate(u: C, mode: DegenerateMode, omega: C, omega_prime: C, h_max: f64) -> (C, bool) {
    let omega_hat = c(std::f64::consts::PI, 0.0) / (omega * 2.0);
    let h = (crate::num::I * std::f64::consts::PI * omega_prime / omega).exp();
    let value = match mode {
        DegenerateMode::Sine => {
            let s = (omega_hat * u).sin();
            omega_hat * omega_hat * (-1.0 / 3.0 + 1.0 / (s * s))
        }
        DegenerateMode::Cosine => {
            let cosine = ((u - omega_prime) * omega_hat * 2.0).cos();
            omega_hat * omega_hat * (c(-1.0 / 3.0, 0.0) - h * cosine * 8.0)
        }
    };
    (value, h.norm() <= h_max)
}
