//! Numerics for the elliptic asymptotic regime of the fourth Painlevé equation.
//!
//! The solution family y(x) of P_IV behaves, along a ray arg x = φ, like a
//! modulated elliptic function `e^{-iφ} x P(e^{iφ}t + χ; A_φ)` with
//! `2t = (e^{-iφ}x)²`.  This crate computes every ingredient of that
//! representation and cross-checks the closed-form identities tying them
//! together:
//!
//! * [`curve`] — the genus-1 curve w² = z⁴+4e^{iφ}z³+4e^{2iφ}z²+4e^{3iφ}Az,
//!   its branch points, cycles, periods and contour integrals;
//! * [`boutroux`] — the trajectory A_φ solving Re e^{2iφ}J_a = Re e^{2iφ}J_b = 0;
//! * [`elliptic`] — theta functions, the Weierstrass ℘ and the curve's own
//!   elliptic function P(u; A) with its two evaluation routes;
//! * [`monodromy`] — Stokes data surfaces, phase shifts χ, the correction
//!   function B_φ(t) and leading-order direct-monodromy predictions;
//! * [`wkb`] — turning points and Stokes-graph tracing for the t = ∞
//!   characteristic root;
//! * [`verify`] — direct complex-path integration of P_IV and quantitative
//!   comparison against the elliptic representation.

pub mod boutroux;
pub mod curve;
pub mod elliptic;
pub mod error;
pub mod monodromy;
pub mod num;
pub mod quad;
pub mod verify;
pub mod wkb;

pub use error::{Error, Result};
pub use num::C;
