//! Theta functions, the Weierstrass ℘, and the curve's elliptic function
//! P(u; A) with its structural properties.

pub mod pfn;
pub mod theta;
pub mod wp;

pub use pfn::{chi_transform, lattice_reduce, EllipticP};
pub use theta::ThetaContext;
pub use wp::{discriminant, invariants, wp_degenerate, DegenerateMode, Lattice};
