//! The elliptic curve w² = z⁴ + 4e^{iφ}z³ + 4e^{2iφ}z² + 4e^{3iφ}Az: branch
//! points, the two-sheeted branch of w, cycles, and contour integrals.

pub mod branch;
pub mod cycles;
pub mod integrals;
pub mod roots;
pub mod third_kind;

pub use cycles::{build_cycles, CycleKind, CyclePath};
pub use integrals::{cycle_integral, cycle_integral_collapsed, cycle_n_over_w, path_integral, periods, Integrand};
pub use roots::{cubic_roots, match_roots, zeta_roots};
pub use third_kind::{third_kind_identities, IdentityCheck, ThirdKindReport};

use crate::error::{Error, Result};
use crate::num::{c, cis, serialize_c, C};
use serde::{Deserialize, Serialize};

/// Coordinate frame of a curve.  The ζ-frame is the substitution ζ = e^{-iφ}z,
/// in which the curve v² = ζ⁴ + 4ζ³ + 4ζ² + 4Aζ depends on A only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    Z,
    Zeta,
}

/// A point (φ, A) together with the tracked, ordered branch points of w².
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    pub phi: f64,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub a: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub z1: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub z3: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub z5: C,
    pub frame: Frame,
}

/// Period data of one curve: Ω_a, Ω_b, τ = Ω_b/Ω_a and the Boutroux
/// integrals J_a, J_b of w/z.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Periods {
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub omega_a: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub omega_b: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub tau: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub j_a: C,
    #[serde(serialize_with = "serialize_c", deserialize_with = "crate::num::deserialize_c")]
    pub j_b: C,
}

impl Periods {
    /// Residual of the Legendre-type relation
    /// Ω_b J_a − Ω_a J_b = −4πi e^{iφ} (e^{iφ} = 1 in the ζ-frame).
    pub fn legendre_residual(&self, phi: f64) -> f64 {
        let target = c(0.0, -4.0 * std::f64::consts::PI) * cis(phi);
        (self.omega_b * self.j_a - self.omega_a * self.j_b - target).norm()
    }
}

/// Relative distance of A from the degeneracy set {0, 8/27}.
pub fn degeneracy_distance(a: C) -> f64 {
    a.norm().min((a - c(8.0 / 27.0, 0.0)).norm())
}

const DEGENERACY_TOL: f64 = 1e-6;

impl CurveSpec {
    /// z-frame curve for direction φ and modulus A.
    pub fn new(phi: f64, a: C) -> Self {
        let (z1, z3, z5) = roots::cubic_roots(phi, a);
        CurveSpec {
            phi,
            a,
            z1,
            z3,
            z5,
            frame: Frame::Z,
        }
    }

    /// ζ-frame curve (depends on A only).
    pub fn zeta(a: C) -> Self {
        let (z1, z3, z5) = roots::zeta_roots(a);
        CurveSpec {
            phi: 0.0,
            a,
            z1,
            z3,
            z5,
            frame: Frame::Zeta,
        }
    }

    /// Rotation factor e^{iφ} of the working frame (1 in the ζ-frame).
    pub fn rot(&self) -> C {
        match self.frame {
            Frame::Z => cis(self.phi),
            Frame::Zeta => c(1.0, 0.0),
        }
    }

    /// The quartic w², evaluated from the tracked roots.
    #[inline]
    pub fn quartic(&self, z: C) -> C {
        z * (z - self.z1) * (z - self.z3) * (z - self.z5)
    }

    /// d(w²)/dz.
    #[inline]
    pub fn quartic_prime(&self, z: C) -> C {
        (z - self.z1) * (z - self.z3) * (z - self.z5)
            + z * (z - self.z3) * (z - self.z5)
            + z * (z - self.z1) * (z - self.z5)
            + z * (z - self.z1) * (z - self.z3)
    }

    /// All four branch points.
    pub fn branch_points(&self) -> [C; 4] {
        [c(0.0, 0.0), self.z1, self.z3, self.z5]
    }

    /// Branch cuts [z₅, z₃] and [z₁, 0], oriented as drawn.
    pub fn cuts(&self) -> [(C, C); 2] {
        [(self.z5, self.z3), (self.z1, c(0.0, 0.0))]
    }

    /// Characteristic length of the branch-point configuration.
    pub fn scale(&self) -> f64 {
        1.0_f64.max(self.z5.norm()).max(self.z1.norm()).max(self.z3.norm())
    }

    /// Err if the curve is degenerate (cycles collapse).
    pub fn require_nondegenerate(&self) -> Result<()> {
        let dist = degeneracy_distance(self.a);
        if dist < DEGENERACY_TOL {
            Err(Error::Degenerate { a: self.a, dist })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_frame_matches_rotated_z_frame() {
        let a = c(0.2, 0.04);
        let phi = -0.35;
        let z = CurveSpec::new(phi, a);
        let zeta = CurveSpec::zeta(a);
        let rot = cis(phi);
        assert!((z.z1 - rot * zeta.z1).norm() < 1e-12);
        assert!((z.z3 - rot * zeta.z3).norm() < 1e-12);
        assert!((z.z5 - rot * zeta.z5).norm() < 1e-12);
    }

    #[test]
    fn quartic_matches_coefficient_form() {
        let phi = 0.22;
        let a = c(0.17, -0.03);
        let spec = CurveSpec::new(phi, a);
        let e1 = cis(phi);
        for z in [c(1.1, 0.4), c(-0.5, 0.9), c(-2.0, -0.3)] {
            let coeff = z.powu(4) + e1 * 4.0 * z.powu(3) + e1 * e1 * 4.0 * z * z + e1.powu(3) * a * 4.0 * z;
            assert!((spec.quartic(z) - coeff).norm() < 1e-12 * (1.0 + coeff.norm()));
        }
    }

    #[test]
    fn degeneracy_detection() {
        assert!(CurveSpec::zeta(c(1e-9, 0.0)).require_nondegenerate().is_err());
        assert!(CurveSpec::zeta(c(8.0 / 27.0 + 1e-9, 0.0)).require_nondegenerate().is_err());
        assert!(CurveSpec::zeta(c(0.15, 0.02)).require_nondegenerate().is_ok());
    }
}
