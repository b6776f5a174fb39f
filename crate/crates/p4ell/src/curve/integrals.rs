//! Contour integrals on the curve.
//!
//! Loop integrals of odd integrands (anything with a single power of w in
//! numerator or denominator) collapse to twice a segment integral between
//! branch points.  On a segment [p, q] the substitution z = m − h·cos θ
//! turns (z−p)(z−q) into −h²sin²θ, so with w = h·sin θ·s(θ),
//! s(θ)² = −(z−r₁)(z−r₂), every 1/√ endpoint singularity cancels and plain
//! Gauss–Legendre in θ converges spectrally.
//!
//! The explicit loop route ([`path_integral`]) integrates along a stored
//! `CyclePath` with w tracked by continuity and serves as the independent
//! cross-check of the collapsed route.

use super::branch::track_sqrt;
use super::cycles::{CycleKind, CyclePath};
use super::{CurveSpec, Periods};
use crate::error::{Error, Result};
use crate::num::{C, I};
use crate::quad::{adaptive, gauss_legendre};
use std::f64::consts::PI;

/// Integrands of the spec'd contour integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrand {
    /// w/z dz (Boutroux integrand)
    WOverZ,
    /// dz/w (period integrand)
    OneOverW,
    /// z dz/w
    ZOverW,
    /// dz/(z w)
    OneOverZW,
    /// z dz/w³
    ZOverW3,
    /// dz/((z−z₀) w)
    ThirdKind(C),
}

/// Orientation calibrations fixing the traversal sense of the two cycles.
///
/// They are pinned by the endpoint value J_a(8/27) = +4i/√3 (ζ-frame) and by
/// Im Ω_b/Ω_a > 0; tests assert both.
const CAL_A: f64 = 1.0;
const CAL_B: f64 = 1.0;

/// Default absolute quadrature target.
pub const QUAD_TOL: f64 = 1e-10;
const N0: usize = 16;
const N_MAX: usize = 4096;

struct Segment {
    /// Remaining two zeros of the quartic: s² = −(z−r₁)(z−r₂).
    r1: C,
    r2: C,
    m: C,
    h: C,
    /// Branch of s at θ = π/2 (the midpoint).
    s_mid: C,
    orient: f64,
}

impl CurveSpec {
    fn segment(&self, kind: CycleKind) -> Result<Segment> {
        let ((p, q), (r1, r2), orient): ((C, C), (C, C), f64) = match kind {
            CycleKind::CycleA => ((self.z5, self.z3), (C::new(0.0, 0.0), self.z1), CAL_A),
            CycleKind::CycleB => ((self.z3, self.z1), (C::new(0.0, 0.0), self.z5), CAL_B),
            CycleKind::Segment => {
                return Err(Error::Domain(
                    "segment kind has no canonical collapsed form".into(),
                ))
            }
        };
        let m = (p + q) * 0.5;
        let h = (q - p) * 0.5;
        if h.norm() < 1e-14 * self.scale() {
            // Collapsed segment: zero-length cycle (degenerate curve).
            let _ = (p, q);
            return Ok(Segment {
                r1,
                r2,
                m,
                h,
                s_mid: C::new(0.0, 0.0),
                orient,
            });
        }
        // Anchor the branch of s at the midpoint.  The a-segment is itself a
        // cut, so its midpoint value is the left-shore limit; the b-segment
        // lies between the cuts and has an unambiguous upper-sheet value.
        let w_mid = match kind {
            CycleKind::CycleA => {
                let n = I * h / h.norm();
                let probe = m + n * (1e-5 * self.scale());
                let w_probe = self.w_upper(probe)?;
                self.w_with_hint(m, w_probe)
            }
            _ => self.w_upper(m)?,
        };
        let s_raw = (-(m - r1) * (m - r2)).sqrt();
        let s_mid = if (h * s_raw - w_mid).norm() <= (-(h * s_raw) - w_mid).norm() {
            s_raw
        } else {
            -s_raw
        };
        Ok(Segment {
            r1,
            r2,
            m,
            h,
            s_mid,
            orient,
        })
    }
}

impl Segment {
    #[inline]
    fn z_at(&self, theta: f64) -> C {
        self.m - self.h * theta.cos()
    }

    /// s values at the Gauss–Legendre nodes, tracked by continuity outward
    /// from the anchored midpoint value.
    fn s_at_nodes(&self, thetas: &[f64]) -> Result<Vec<C>> {
        let f = |t: f64| -> C {
            let z = self.z_at(t);
            -(z - self.r1) * (z - self.r2)
        };
        let mut out = vec![C::new(0.0, 0.0); thetas.len()];
        let centre = thetas
            .iter()
            .position(|&t| t >= PI / 2.0)
            .unwrap_or(thetas.len() - 1);
        let mut s = track_sqrt(&f, PI / 2.0, self.s_mid, thetas[centre], 0)?;
        out[centre] = s;
        for k in (centre + 1)..thetas.len() {
            s = track_sqrt(&f, thetas[k - 1], s, thetas[k], 0)?;
            out[k] = s;
        }
        s = out[centre];
        for k in (0..centre).rev() {
            s = track_sqrt(&f, thetas[k + 1], s, thetas[k], 0)?;
            out[k] = s;
        }
        Ok(out)
    }

    /// ∮ n(z)/w dz = orient · 2 ∫₀^π n(z(θ))/s(θ) dθ.
    fn n_over_w<F: Fn(C) -> C>(&self, n: &F, order: usize) -> Result<C> {
        let (nodes, weights) = gauss_legendre(order);
        let thetas: Vec<f64> = nodes.iter().map(|x| (x + 1.0) * (PI / 2.0)).collect();
        let s = self.s_at_nodes(&thetas)?;
        let mut acc = C::new(0.0, 0.0);
        for k in 0..thetas.len() {
            acc += n(self.z_at(thetas[k])) / s[k] * weights[k];
        }
        Ok(acc * (PI / 2.0) * 2.0 * self.orient)
    }

    /// ∮ w·g(z) dz = orient · 2 ∫₀^π h² sin²θ · s(θ) · g(z(θ)) dθ.
    fn w_times<F: Fn(C) -> C>(&self, g: &F, order: usize) -> Result<C> {
        let (nodes, weights) = gauss_legendre(order);
        let thetas: Vec<f64> = nodes.iter().map(|x| (x + 1.0) * (PI / 2.0)).collect();
        let s = self.s_at_nodes(&thetas)?;
        let h2 = self.h * self.h;
        let mut acc = C::new(0.0, 0.0);
        for k in 0..thetas.len() {
            let sin = thetas[k].sin();
            acc += s[k] * g(self.z_at(thetas[k])) * (sin * sin) * weights[k];
        }
        Ok(acc * h2 * (PI / 2.0) * 2.0 * self.orient)
    }
}

fn collapse_adaptive<F: Fn(usize) -> Result<C>>(make: F, tol: f64) -> Result<C> {
    let mut failure = None;
    let result = adaptive(
        |n| match make(n) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                C::new(f64::NAN, f64::NAN)
            }
        },
        tol,
        N0,
        N_MAX,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    result.map(|(v, _)| v)
}

/// Loop integral over the collapsed canonical cycle.
pub fn cycle_integral_collapsed(
    spec: &CurveSpec,
    kind: CycleKind,
    integrand: Integrand,
) -> Result<C> {
    let seg = spec.segment(kind)?;
    if seg.h.norm() < 1e-14 * spec.scale() {
        // Zero-length cycle: every odd integral vanishes.
        return Ok(C::new(0.0, 0.0));
    }
    match integrand {
        Integrand::WOverZ => collapse_adaptive(|n| seg.w_times(&|z| 1.0 / z, n), QUAD_TOL),
        Integrand::OneOverW => collapse_adaptive(|n| seg.n_over_w(&|_| C::new(1.0, 0.0), n), QUAD_TOL),
        Integrand::ZOverW => collapse_adaptive(|n| seg.n_over_w(&|z| z, n), QUAD_TOL),
        Integrand::OneOverZW => collapse_adaptive(|n| seg.n_over_w(&|z| 1.0 / z, n), QUAD_TOL),
        Integrand::ThirdKind(z0) => {
            collapse_adaptive(|n| seg.n_over_w(&|z| 1.0 / (z - z0), n), QUAD_TOL)
        }
        Integrand::ZOverW3 => {
            // No collapsed form (the shore integrals diverge individually);
            // differentiate the period instead: ∮ z/w³ dz = −e^{-3iφ}/2 ∂Ω/∂A.
            let rot3 = spec.rot().powu(3);
            let d = 1e-6 * (1.0 + spec.a.norm());
            let specs = [
                rebuilt(spec, spec.a + d),
                rebuilt(spec, spec.a - d),
                rebuilt(spec, spec.a + C::new(0.0, d)),
                rebuilt(spec, spec.a - C::new(0.0, d)),
            ];
            let mut om = [C::new(0.0, 0.0); 4];
            for (i, s) in specs.iter().enumerate() {
                om[i] = cycle_integral_collapsed(s, kind, Integrand::OneOverW)?;
            }
            // Complex derivative from the two real directions, averaged.
            let d_re = (om[0] - om[1]) / (2.0 * d);
            let d_im = (om[2] - om[3]) / (C::new(0.0, 2.0 * d));
            Ok((d_re + d_im) * 0.5 / rot3 * -0.5)
        }
    }
}

fn rebuilt(spec: &CurveSpec, a: C) -> CurveSpec {
    match spec.frame {
        super::Frame::Z => CurveSpec::new(spec.phi, a),
        super::Frame::Zeta => CurveSpec::zeta(a),
    }
}

/// ∮ n(z)/w dz over the collapsed cycle for an arbitrary smooth numerator.
pub fn cycle_n_over_w<F: Fn(C) -> C>(
    spec: &CurveSpec,
    kind: CycleKind,
    n: F,
    tol: f64,
) -> Result<C> {
    let seg = spec.segment(kind)?;
    if seg.h.norm() < 1e-14 * spec.scale() {
        return Ok(C::new(0.0, 0.0));
    }
    collapse_adaptive(|order| seg.n_over_w(&n, order), tol)
}

/// Integral of `integrand` along an explicit path with w tracked by
/// continuity (the loop route).
pub fn path_integral(spec: &CurveSpec, path: &CyclePath, integrand: Integrand) -> Result<C> {
    let f = |z: C, w: C| -> C {
        match integrand {
            Integrand::WOverZ => w / z,
            Integrand::OneOverW => 1.0 / w,
            Integrand::ZOverW => z / w,
            Integrand::OneOverZW => 1.0 / (z * w),
            Integrand::ZOverW3 => z / (w * w * w),
            Integrand::ThirdKind(z0) => 1.0 / ((z - z0) * w),
        }
    };
    // Start tracking at the node farthest from the cuts.
    let nodes = &path.nodes;
    let closed = path.is_closed();
    let start = if closed {
        let dist = |z: C| {
            spec.cuts()
                .iter()
                .map(|&(c0, c1)| crate::num::dist_point_segment(z, c0, c1))
                .fold(f64::INFINITY, f64::min)
        };
        (0..nodes.len() - 1)
            .max_by(|&i, &j| dist(nodes[i]).partial_cmp(&dist(nodes[j])).unwrap())
            .unwrap()
    } else {
        0
    };
    let ordered: Vec<C> = if closed {
        nodes[start..nodes.len() - 1]
            .iter()
            .chain(nodes[..=start].iter())
            .copied()
            .collect()
    } else {
        nodes.clone()
    };
    // The stored sheet signs define the intended lift of the plane curve:
    // the branch at the tracking start must match its declared sheet.
    let start_sign = *path.sheet_signs.get(start).unwrap_or(&1) as f64;
    let mut w = spec.w_upper(ordered[0])? * start_sign;
    let mut total = C::new(0.0, 0.0);
    for leg in ordered.windows(2) {
        let (p, q) = (leg[0], leg[1]);
        if (q - p).norm() < 1e-15 * spec.scale() {
            continue;
        }
        let leg_val = collapse_adaptive(
            |order| {
                let (gl_nodes, gl_weights) = gauss_legendre(order);
                let mut acc = C::new(0.0, 0.0);
                let mut w_run = w;
                let mut z_prev = p;
                for (x, wt) in gl_nodes.iter().zip(gl_weights) {
                    let z = p + (q - p) * ((x + 1.0) * 0.5);
                    let g = |t: f64| spec.quartic(z_prev + (z - z_prev) * t);
                    w_run = track_sqrt(&g, 0.0, w_run, 1.0, 0)?;
                    z_prev = z;
                    acc += f(z, w_run) * *wt;
                }
                Ok(acc * (q - p) * 0.5)
            },
            QUAD_TOL,
        )?;
        total += leg_val;
        // Advance w to the leg end.
        let g = |t: f64| spec.quartic(p + (q - p) * t);
        w = track_sqrt(&g, 0.0, w, 1.0, 0)?;
    }
    Ok(total)
}

/// Period data (Ω_a, Ω_b, τ, J_a, J_b) of a non-degenerate curve.
pub fn periods(spec: &CurveSpec) -> Result<Periods> {
    spec.require_nondegenerate()?;
    let omega_a = cycle_integral_collapsed(spec, CycleKind::CycleA, Integrand::OneOverW)?;
    let omega_b = cycle_integral_collapsed(spec, CycleKind::CycleB, Integrand::OneOverW)?;
    let j_a = cycle_integral_collapsed(spec, CycleKind::CycleA, Integrand::WOverZ)?;
    let j_b = cycle_integral_collapsed(spec, CycleKind::CycleB, Integrand::WOverZ)?;
    let tau = omega_b / omega_a;
    if tau.im <= 0.0 {
        return Err(Error::Domain(format!(
            "period ratio has Im tau = {} <= 0 (A = {})",
            tau.im, spec.a
        )));
    }
    Ok(Periods {
        omega_a,
        omega_b,
        tau,
        j_a,
        j_b,
    })
}

/// Convenience dispatch: collapsed route for canonical cycles, explicit path
/// route for anything else.
pub fn cycle_integral(spec: &CurveSpec, path: &CyclePath, integrand: Integrand) -> Result<C> {
    match (path.kind, integrand) {
        (CycleKind::Segment, _) => path_integral(spec, path, integrand),
        (kind, intg) => cycle_integral_collapsed(spec, kind, intg),
    }
}

/// Abel map from the branch point 0:  u(z₀) = ∫₀^{z₀} dz/w, integrating on
/// the branch whose value at z₀ is `w0`, along the canonical routed path.
///
/// The 1/√z singularity at the lower endpoint is removed by z = z_leg·σ².
pub fn abel_from_zero(spec: &CurveSpec, z0: C, w0: C) -> Result<C> {
    let path = spec.route(C::new(0.0, 0.0), z0)?;
    // Walk the path backwards from z₀ carrying the branch, recording the
    // w value at each intermediate node.
    let n_legs = path.len() - 1;
    let mut w_at = vec![C::new(0.0, 0.0); path.len()];
    w_at[n_legs] = w0;
    for k in (1..=n_legs).rev() {
        if k == 1 {
            break; // the first node is the branch point itself
        }
        let g = |t: f64| spec.quartic(path[k] + (path[k - 1] - path[k]) * t);
        w_at[k - 1] = track_sqrt(&g, 0.0, w_at[k], 1.0, 0)?;
    }
    let mut total = C::new(0.0, 0.0);
    // First leg [0, p1]: substitute z = p1 σ².
    let p1 = path[1];
    let sqrt_p1 = p1.sqrt();
    let rho_at_1 = w_at[1] / sqrt_p1;
    let rho = |sigma: f64| -> C {
        let z = p1 * (sigma * sigma);
        (z - spec.z1) * (z - spec.z3) * (z - spec.z5)
    };
    let first = collapse_adaptive(
        |order| {
            let (gl_nodes, gl_weights) = gauss_legendre(order);
            let mut acc = C::new(0.0, 0.0);
            let mut r_run = rho_at_1;
            let mut s_prev = 1.0;
            for (x, wt) in gl_nodes.iter().rev().zip(gl_weights.iter().rev()) {
                let sigma = (x + 1.0) * 0.5;
                r_run = track_sqrt(&rho, s_prev, r_run, sigma, 0)?;
                s_prev = sigma;
                acc += *wt / r_run;
            }
            Ok(acc * 0.5 * sqrt_p1 * 2.0)
        },
        QUAD_TOL,
    )?;
    total += first;
    // Remaining legs: plain quadrature with tracked w.
    for k in 1..n_legs {
        let (p, q) = (path[k], path[k + 1]);
        let w_start = w_at[k];
        let leg = collapse_adaptive(
            |order| {
                let (gl_nodes, gl_weights) = gauss_legendre(order);
                let mut acc = C::new(0.0, 0.0);
                let mut w_run = w_start;
                let mut z_prev = p;
                for (x, wt) in gl_nodes.iter().zip(gl_weights) {
                    let z = p + (q - p) * ((x + 1.0) * 0.5);
                    let g = |t: f64| spec.quartic(z_prev + (z - z_prev) * t);
                    w_run = track_sqrt(&g, 0.0, w_run, 1.0, 0)?;
                    z_prev = z;
                    acc += *wt / w_run;
                }
                Ok(acc * (q - p) * 0.5)
            },
            QUAD_TOL,
        )?;
        total += leg;
    }
    Ok(total)
}
