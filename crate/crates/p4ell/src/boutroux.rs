//! The Boutroux trajectory: for each direction φ, the unique modulus A_φ
//! with Re e^{2iφ}J_a(A) = Re e^{2iφ}J_b(A) = 0, where J_a, J_b are the
//! ζ-frame integrals of v/ζ over the cycles.  A_φ is π/2-periodic in φ,
//! conjugate-symmetric under φ → −φ, and runs from A_0 = 8/27 to
//! A_{±π/4} = 0.
//!
//! The two real equations are solved by Newton iteration with the analytic
//! Jacobian ∂J/∂A = 2Ω; the trajectory is produced by continuation with the
//! φ-step halved whenever Newton runs long (Ω_a is log-singular at the
//! degenerate endpoints).

use crate::curve::{cycle_integral_collapsed, periods, CurveSpec, CycleKind, Integrand, Periods};
use crate::error::{Error, Result};
use crate::num::{c, cis, serialize_c, C};
use serde::Serialize;

/// A_0 = 8/27 (the φ = 0 endpoint); A_{±π/4} = 0 is the other endpoint.
/// Both are analytic constants, never solved for.
pub const A_ZERO: f64 = 8.0 / 27.0;

/// Directions closer than this to kπ/4 are rejected by the solver.
pub const PHI_MARGIN: f64 = 5e-4;

/// One converged point of the trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct BoutrouxPoint {
    pub phi: f64,
    #[serde(serialize_with = "serialize_c")]
    pub a: C,
    /// (Re e^{2iφ}J_a, Re e^{2iφ}J_b) at the solution.
    pub residual: (f64, f64),
    /// ζ-frame periods of the solved curve.
    pub periods: Periods,
    pub newton_iters: usize,
    /// Rough condition estimate of the Newton Jacobian.
    pub condition: f64,
}

impl BoutrouxPoint {
    /// z-frame periods: Ω = e^{-iφ}Ω*, J = e^{2iφ}J*.
    pub fn periods_z(&self) -> Periods {
        let rot = cis(self.phi);
        Periods {
            omega_a: self.periods.omega_a / rot,
            omega_b: self.periods.omega_b / rot,
            tau: self.periods.tau,
            j_a: self.periods.j_a * rot * rot,
            j_b: self.periods.j_b * rot * rot,
        }
    }
}

/// ζ-frame Boutroux integrals (J_a*, J_b*) of A.
pub fn boutroux_integrals(a: C) -> Result<(C, C)> {
    let spec = CurveSpec::zeta(a);
    let ja = cycle_integral_collapsed(&spec, CycleKind::CycleA, Integrand::WOverZ)?;
    let jb = cycle_integral_collapsed(&spec, CycleKind::CycleB, Integrand::WOverZ)?;
    Ok((ja, jb))
}

/// The Boutroux residual (Re e^{2iφ}J_a, Re e^{2iφ}J_b).
pub fn boutroux_residual(phi: f64, a: C) -> Result<(f64, f64)> {
    let (ja, jb) = boutroux_integrals(a)?;
    let rot2 = cis(2.0 * phi);
    Ok(((rot2 * ja).re, (rot2 * jb).re))
}

/// Ratio I(A) = J_b/J_a, or its reciprocal when J_a ≈ 0, so the criterion
/// "I real ⇔ A solves (BE)_φ for some φ" stays usable (J_a and J_b never
/// vanish together).
#[derive(Debug, Clone, Copy)]
pub enum IRatio {
    Ratio(C),
    Reciprocal(C),
}

pub fn i_ratio(a: C) -> Result<IRatio> {
    let (ja, jb) = boutroux_integrals(a)?;
    assert!(
        ja.norm() + jb.norm() > 1e-9,
        "J_a and J_b cannot vanish simultaneously"
    );
    if ja.norm() < 1e-7 * (1.0 + jb.norm()) {
        Ok(IRatio::Reciprocal(ja / jb))
    } else {
        Ok(IRatio::Ratio(jb / ja))
    }
}

/// Newton options.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iters: 30,
        }
    }
}

fn check_phi(phi: f64) -> Result<()> {
    let q = phi / std::f64::consts::FRAC_PI_4;
    if (q - q.round()).abs() * std::f64::consts::FRAC_PI_4 < PHI_MARGIN {
        return Err(Error::Domain(format!(
            "phi = {phi} is within {PHI_MARGIN} of a degenerate direction kπ/4"
        )));
    }
    Ok(())
}

/// Solve (BE)_φ for A by damped Newton from `a_init`.
pub fn solve_a(phi: f64, a_init: C, opts: &SolveOptions) -> Result<BoutrouxPoint> {
    check_phi(phi)?;
    let rot2 = cis(2.0 * phi);
    let mut a = a_init;
    let mut res = residual_vec(phi, a)?;
    let mut iters = 0;
    let mut condition = 0.0;
    while res.0.hypot(res.1) > opts.tol {
        if iters >= opts.max_iters {
            return Err(Error::NoConvergence {
                iters,
                last: a,
                residual: res.0.hypot(res.1),
            });
        }
        let spec = CurveSpec::zeta(a);
        let oa = cycle_integral_collapsed(&spec, CycleKind::CycleA, Integrand::OneOverW)?;
        let ob = cycle_integral_collapsed(&spec, CycleKind::CycleB, Integrand::OneOverW)?;
        // d(e^{2iφ}J_c)/dA = 2 e^{2iφ}Ω_c; the real 2×2 Jacobian rows are
        // (Re g', −Im g') for each cycle.
        let ga = rot2 * oa * 2.0;
        let gb = rot2 * ob * 2.0;
        let (j11, j12) = (ga.re, -ga.im);
        let (j21, j22) = (gb.re, -gb.im);
        let det = j11 * j22 - j12 * j21;
        let frob2 = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
        condition = frob2 / det.abs().max(1e-300);
        if det.abs() < 1e-12 * frob2 {
            return Err(Error::IllConditioned(condition));
        }
        let dx = (j22 * res.0 - j12 * res.1) / det;
        let dy = (-j21 * res.0 + j11 * res.1) / det;
        // Damped update: halve until the residual actually decreases.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let trial = a - c(lambda * dx, lambda * dy);
            if let Ok(r_new) = residual_vec(phi, trial) {
                if r_new.0.hypot(r_new.1) < res.0.hypot(res.1) {
                    a = trial;
                    res = r_new;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iters,
                last: a,
                residual: res.0.hypot(res.1),
            });
        }
        iters += 1;
    }
    let spec = CurveSpec::zeta(a);
    let p = periods(&spec)?;
    Ok(BoutrouxPoint {
        phi,
        a,
        residual: res,
        periods: p,
        newton_iters: iters,
        condition,
    })
}

fn residual_vec(phi: f64, a: C) -> Result<(f64, f64)> {
    if CurveSpec::zeta(a).require_nondegenerate().is_err() {
        return Err(Error::Degenerate {
            a,
            dist: crate::curve::degeneracy_distance(a),
        });
    }
    boutroux_residual(phi, a)
}

/// Coarse-grid seed for the first solve on one side of the trajectory:
/// scan |r_a| + |r_b| over the trajectory rectangle and take the argmin.
pub fn seed_scan(phi: f64, n: usize) -> C {
    let (im_lo, im_hi) = if phi < 0.0 { (0.0, 0.2) } else { (-0.2, 0.0) };
    let (re_lo, re_hi) = (0.005, A_ZERO - 0.005);
    let mut best = (f64::INFINITY, c(0.15, 0.5 * (im_lo + im_hi)));
    for i in 0..n {
        for j in 0..n {
            let a = c(
                re_lo + (re_hi - re_lo) * (i as f64 + 0.5) / n as f64,
                im_lo + (im_hi - im_lo) * (j as f64 + 0.5) / n as f64,
            );
            if let Ok((ra, rb)) = boutroux_residual(phi, a) {
                let score = ra.abs() + rb.abs();
                if score < best.0 {
                    best = (score, a);
                }
            }
        }
    }
    best.1
}

/// Solve along a φ-grid by continuation; the grid must avoid kπ/4 by the
/// solver margin.  Grid points are reduced mod π/2 for the solve (A_φ is
/// π/2-periodic) and reported at their original φ, in input order.
pub fn trajectory(phi_grid: &[f64], opts: &SolveOptions) -> Result<Vec<BoutrouxPoint>> {
    let indexed: Vec<(usize, f64, f64)> = phi_grid
        .iter()
        .enumerate()
        .map(|(k, &phi)| (k, phi, reduce_phi(phi)))
        .collect();
    for (_, phi, red) in &indexed {
        check_phi(*red).map_err(|_| {
            Error::Domain(format!(
                "grid point phi = {phi} reduces to {red}, inside the degenerate-direction margin"
            ))
        })?;
    }
    let mut out: Vec<(usize, BoutrouxPoint)> = Vec::with_capacity(indexed.len());
    // Work each sign class outward from its ±π/8 anchor.
    for sign in [-1.0, 1.0] {
        let mut side: Vec<&(usize, f64, f64)> = indexed
            .iter()
            .filter(|(_, _, red)| red.signum() == sign)
            .collect();
        if side.is_empty() {
            continue;
        }
        let anchor_phi = sign * std::f64::consts::FRAC_PI_8;
        let seed = seed_scan(anchor_phi, 24);
        let anchor = solve_a(anchor_phi, seed, opts)?;
        side.sort_by(|a, b| {
            (a.2 - anchor_phi)
                .abs()
                .partial_cmp(&(b.2 - anchor_phi).abs())
                .unwrap()
        });
        let mut below = anchor.clone();
        let mut above = anchor.clone();
        for &&(k, phi_orig, red) in &side {
            let cur = if red < anchor_phi { &mut below } else { &mut above };
            let pt = continue_to(red, cur, opts)?;
            *cur = pt.clone();
            out.push((k, BoutrouxPoint { phi: phi_orig, ..pt }));
        }
    }
    out.sort_by_key(|(k, _)| *k);
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

/// Continuation with bisection: halve the φ-step whenever Newton needs more
/// than 8 iterations or fails outright.
fn continue_to(target: f64, from: &BoutrouxPoint, opts: &SolveOptions) -> Result<BoutrouxPoint> {
    let mut cur = from.clone();
    let min_step = 1e-7;
    while (cur.phi - target).abs() > 1e-15 {
        let mut step = target - cur.phi;
        loop {
            match solve_a(cur.phi + step, cur.a, opts) {
                Ok(pt) if pt.newton_iters <= 8 || step.abs() < min_step => {
                    cur = pt;
                    break;
                }
                Err(_) if step.abs() < min_step => {
                    return Err(Error::ContinuationBreak {
                        phi: cur.phi,
                        min_step,
                    });
                }
                _ => step *= 0.5,
            }
        }
    }
    Ok(cur)
}

/// Reduce φ into (−π/4, π/4] modulo the π/2-periodicity of A_φ.
pub fn reduce_phi(phi: f64) -> f64 {
    let half = std::f64::consts::FRAC_PI_2;
    let mut r = phi - (phi / half).round() * half;
    if r <= -std::f64::consts::FRAC_PI_4 {
        r += half;
    }
    r
}

/// ε_φ = (8i/3)·φ/ln|φ|, the leading deviation A_φ − 8/27 for small φ
/// (real logarithm; the sign pattern is carried by φ itself).
pub fn epsilon_phi(phi: f64) -> C {
    c(0.0, 8.0 / 3.0) * phi / phi.abs().ln()
}
