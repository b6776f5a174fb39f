//! Error types shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Evaluation requested at (or too close to) a branch point of w.
    #[error("point {0} is a branch point (or too close to one)")]
    Singularity(Complex64),

    /// The curve is degenerate (A at or near 0 or 8/27): cycles collapse.
    #[error("degenerate curve: A = {a} is within {dist:.3e} of a degeneracy")]
    Degenerate { a: Complex64, dist: f64 },

    /// An adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed to converge: error estimate {estimate:.3e} > tolerance {tol:.3e}")]
    Precision { estimate: f64, tol: f64 },

    /// Newton iteration did not converge; carries the last iterate.
    #[error("solver did not converge after {iters} iterations (last iterate {last}, residual {residual:.3e})")]
    NoConvergence {
        iters: usize,
        last: Complex64,
        residual: f64,
    },

    /// Jacobian (nearly) singular at the current iterate.
    #[error("Jacobian nearly singular (condition estimate {0:.3e})")]
    IllConditioned(f64),

    /// Continuation step fell below the minimum allowed step.
    #[error("continuation step collapsed below {min_step:.3e} near phi = {phi}")]
    ContinuationBreak { phi: f64, min_step: f64 },

    /// A genericity hypothesis on the monodromy data is violated.
    #[error("non-generic monodromy data: {0}")]
    NonGenericData(String),

    /// A linear relation became underdetermined (vanishing coefficient).
    #[error("underdetermined: {0}")]
    Underdetermined(String),

    /// Argument out of the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation too close to a pole of the elliptic function.
    #[error("argument within pole radius; nearest pole at u = {nearest}")]
    PoleProximity { nearest: Complex64 },

    /// A Stokes-curve trace stalled; carries the partial polyline length.
    #[error("stokes trace failed near {at} after {points} points: {reason}")]
    TraceFailure {
        at: Complex64,
        points: usize,
        reason: String,
    },

    /// ODE integration step size underflowed.
    #[error("integration step underflow at x = {x} (|y| = {y_abs:.3e})")]
    StepUnderflow { x: Complex64, y_abs: f64 },

    /// Invalid user-supplied configuration or input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
