//! Ground-truth harness: direct complex-path integration of the fourth
//! Painlevé equation and quantitative comparison against the elliptic
//! representation, plus the brute-force grid oracle for the Boutroux
//! solver.

use crate::error::{Error, Result};
use crate::monodromy::AsymptoticSolution;
use crate::num::{c, cis, line_fit, serialize_c, C};
use serde::Serialize;

/// Right-hand side of P_IV:
/// y'' = (y')²/2y + (3/2)y³ + 4xy² + (−4α+β+2x²)y − β²/2y.
pub fn p4_rhs(x: C, y: C, yp: C, alpha: C, beta: C) -> Result<C> {
    if y.norm() == 0.0 {
        return Err(Error::Singularity(x));
    }
    Ok(yp * yp / (y * 2.0)
        + y * y * y * 1.5
        + x * y * y * 4.0
        + (beta - alpha * 4.0 + x * x * 2.0) * y
        - beta * beta / (y * 2.0))
}

/// Integration limits: a pole event fires outside this band of |y|.
pub const POLE_HI: f64 = 1e8;
pub const POLE_LO: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct PoleEvent {
    #[serde(serialize_with = "serialize_c")]
    pub x: C,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeTrajectory {
    /// Accepted nodes along the path.
    #[serde(with = "crate::num::c_vec")]
    pub xs: Vec<C>,
    #[serde(with = "crate::num::c_vec")]
    pub ys: Vec<C>,
    #[serde(with = "crate::num::c_vec")]
    pub yps: Vec<C>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub pole_events: Vec<PoleEvent>,
    /// True if integration reached the end of the path.
    pub completed: bool,
}

impl OdeTrajectory {
    pub fn final_state(&self) -> (C, C, C) {
        let k = self.xs.len() - 1;
        (self.xs[k], self.ys[k], self.yps[k])
    }

    /// Dense output at a path parameter already passed, by cubic Hermite
    /// interpolation between the bracketing accepted nodes (parametrised by
    /// arc position along the recorded nodes).
    pub fn sample_near(&self, x: C) -> Option<(C, C)> {
        let k = self
            .xs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - x).norm().partial_cmp(&(*b - x).norm()).unwrap()
            })
            .map(|(i, _)| i)?;
        if k + 1 >= self.xs.len() {
            return Some((self.ys[k], self.yps[k]));
        }
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let h = x1 - x0;
        if h.norm() == 0.0 {
            return Some((self.ys[k], self.yps[k]));
        }
        let s = ((x - x0) / h).re.clamp(0.0, 1.0);
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        let (d0, d1) = (self.yps[k] * h, self.yps[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let y = y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + d1 * (s3 - s2);
        let yp = (y0 * (6.0 * s2 - 6.0 * s) + d0 * (3.0 * s2 - 4.0 * s + 1.0)
            + y1 * (6.0 * s - 6.0 * s2)
            + d1 * (3.0 * s2 - 2.0 * s))
            / h;
        Some((y, yp))
    }
}

/// Dormand–Prince 5(4) pair for the complex second-order system, marching
/// along the straight segment x0 → x1 with PI step control.
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 400_000,
        }
    }
}

const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate P_IV along a polyline path in x.
pub fn integrate_p4(
    x0: C,
    y0: C,
    yp0: C,
    path: &[C],
    alpha: C,
    beta: C,
    opts: &IntegrateOptions,
) -> Result<OdeTrajectory> {
    if y0.norm() == 0.0 {
        return Err(Error::Singularity(x0));
    }
    let mut traj = OdeTrajectory {
        xs: vec![x0],
        ys: vec![y0],
        yps: vec![yp0],
        steps_accepted: 0,
        steps_rejected: 0,
        pole_events: Vec::new(),
        completed: false,
    };
    let mut y = y0;
    let mut yp = yp0;
    let mut x = x0;
    let mut err_old: f64 = 1e-4;
    let full: Vec<C> = std::iter::once(x0).chain(path.iter().copied()).collect();
    for leg in full.windows(2) {
        let (p, q) = (leg[0], leg[1]);
        let dir_len = (q - p).norm();
        if dir_len == 0.0 {
            continue;
        }
        let dir = (q - p) / dir_len;
        // march s from 0 to dir_len along this leg
        let mut s = ((x - p) / dir).re.max(0.0);
        let mut h = (dir_len / 100.0).min(0.1);
        let f = |x: C, y: C, yp: C| -> Result<(C, C)> { Ok((yp, p4_rhs(x, y, yp, alpha, beta)?)) };
        while s < dir_len - 1e-13 * dir_len {
            if traj.steps_accepted + traj.steps_rejected > opts.max_steps {
                return Err(Error::StepUnderflow { x, y_abs: y.norm() });
            }
            h = h.min(dir_len - s);
            let hc = dir * h;
            // 7-stage Dormand–Prince step.
            let mut ky = [c(0.0, 0.0); 7];
            let mut kp = [c(0.0, 0.0); 7];
            let r0 = f(x, y, yp)?;
            ky[0] = r0.0;
            kp[0] = r0.1;
            let mut failed = false;
            for i in 0..6 {
                let mut ay = c(0.0, 0.0);
                let mut ap = c(0.0, 0.0);
                for j in 0..=i {
                    ay += ky[j] * DP_A[i][j];
                    ap += kp[j] * DP_A[i][j];
                }
                let xi = x + hc * DP_C[i];
                let yi = y + hc * ay;
                let ypi = yp + hc * ap;
                if yi.norm() < POLE_LO {
                    failed = true;
                    break;
                }
                let r = f(xi, yi, ypi)?;
                ky[i + 1] = r.0;
                kp[i + 1] = r.1;
            }
            if failed {
                traj.pole_events.push(PoleEvent {
                    x,
                    reason: "|y| underflow (movable zero)".into(),
                });
                return Ok(traj);
            }
            let mut y5 = y;
            let mut p5 = yp;
            let mut y4 = y;
            let mut p4 = yp;
            for i in 0..7 {
                y5 += hc * ky[i] * DP_B5[i];
                p5 += hc * kp[i] * DP_B5[i];
                y4 += hc * ky[i] * DP_B4[i];
                p4 += hc * kp[i] * DP_B4[i];
            }
            let scale_y = opts.atol + opts.rtol * y.norm().max(y5.norm());
            let scale_p = opts.atol + opts.rtol * yp.norm().max(p5.norm());
            let err = ((y5 - y4).norm() / scale_y).hypot((p5 - p4).norm() / scale_p)
                / std::f64::consts::SQRT_2;
            if err <= 1.0 {
                s += h;
                x = p + dir * s;
                y = y5;
                yp = p5;
                traj.steps_accepted += 1;
                traj.xs.push(x);
                traj.ys.push(y);
                traj.yps.push(yp);
                if y.norm() > POLE_HI {
                    traj.pole_events.push(PoleEvent {
                        x,
                        reason: "|y| overflow (movable pole)".into(),
                    });
                    return Ok(traj);
                }
                if y.norm() < POLE_LO {
                    traj.pole_events.push(PoleEvent {
                        x,
                        reason: "|y| underflow (movable zero)".into(),
                    });
                    return Ok(traj);
                }
                // PI controller.
                let fac = 0.9 * err.powf(-0.7 / 5.0) * err_old.powf(0.4 / 5.0);
                h *= fac.clamp(0.2, 5.0);
                err_old = err.max(1e-10);
            } else {
                traj.steps_rejected += 1;
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
            if h < 1e-13 * (1.0 + s) {
                return Err(Error::StepUnderflow { x, y_abs: y.norm() });
            }
        }
    }
    traj.completed = true;
    Ok(traj)
}

const DP_C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

/// Initial data for the elliptic representation at parameter t0:
/// x0 = e^{iφ}√(2t0), y0 = e^{−iφ}x0 P(e^{iφ}t0 + χ), and the chain rule
/// dy/dx = e^{−iφ}P + 2t0·P′.
pub fn seed_from_asymptotics(asym: &AsymptoticSolution, t0: C) -> Result<(C, C, C)> {
    let phi = asym.phi_reduced();
    let rot = cis(phi);
    let x0 = rot * (t0 * 2.0).sqrt();
    let ep = asym.elliptic()?;
    let u = rot * t0 + asym.chi;
    let p = ep.eval(u)?;
    let dp = ep.deriv(u)?;
    let y0 = x0 / rot * p;
    let yp0 = p / rot + t0 * 2.0 * dp;
    Ok((x0, y0, yp0))
}

/// y(x) from the elliptic representation along the scan.
fn y_asym(asym: &AsymptoticSolution, t: C) -> Result<C> {
    let phi = asym.phi_reduced();
    let rot = cis(phi);
    let x = rot * (t * 2.0).sqrt();
    let ep = asym.elliptic()?;
    let p = ep.eval(rot * t + asym.chi)?;
    Ok(x / rot * p)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualSample {
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualScan {
    pub samples: Vec<ResidualSample>,
    /// Fitted slope of ln(residual) against ln(t).
    pub fitted_exponent: f64,
    /// Medians of log-spaced bins (the oscillation-tolerant trend).
    pub binned_medians: Vec<(f64, f64)>,
    pub segments_failed: usize,
}

/// Integrate inward from the largest t and compare y_num with y_asym on a
/// strip Im t = im_t with pole disks of radius `delta0` removed.
pub fn residual_scan(
    asym: &AsymptoticSolution,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    im_t: f64,
    delta0: f64,
    opts: &IntegrateOptions,
) -> Result<ResidualScan> {
    let phi = asym.phi_reduced();
    let rot = cis(phi);
    let poles = asym.pole_ts(t_lo - 5.0, t_hi + 5.0, 3.0 * delta0.max(1.0));
    let clear = |t: C| poles.iter().all(|&tp| (t - tp).norm() > delta0);
    let mut out = ResidualScan {
        samples: Vec::new(),
        fitted_exponent: 0.0,
        binned_medians: Vec::new(),
        segments_failed: 0,
    };
    // Walk from t_hi down to t_lo in short re-seeded segments: each segment
    // seeds from the representation and integrates inward, sampling as it
    // goes.  Segments that hit a pole disk are skipped and reported.
    let seg_len = (t_hi - t_lo) / samples as f64;
    let mut t_right = t_hi;
    while t_right > t_lo {
        let t_left = (t_right - seg_len).max(t_lo);
        let t0 = c(t_right, im_t);
        if !clear(t0) {
            t_right = t_left;
            out.segments_failed += 1;
            continue;
        }
        let seed = seed_from_asymptotics(asym, t0);
        let (x0, y0, yp0) = match seed {
            Ok(v) => v,
            Err(_) => {
                t_right = t_left;
                out.segments_failed += 1;
                continue;
            }
        };
        // x-path for t from t0 down to t_left at fixed Im t.
        let t_end = c(t_left, im_t);
        let x_end = rot * (t_end * 2.0).sqrt();
        match integrate_p4(x0, y0, yp0, &[x_end], asym.monodromy.alpha, asym.monodromy.beta, opts) {
            Ok(traj) if traj.completed => {
                let (x_f, y_f, _) = traj.final_state();
                let t_f = (x_f / rot) * (x_f / rot) * 0.5;
                if clear(t_f) {
                    if let Ok(ya) = y_asym(asym, t_f) {
                        out.samples.push(ResidualSample {
                            t: t_f.re,
                            residual: (y_f - ya).norm(),
                        });
                    }
                }
            }
            _ => out.segments_failed += 1,
        }
        t_right = t_left;
    }
    if out.samples.len() >= 4 {
        let xs: Vec<f64> = out.samples.iter().map(|s| s.t.ln()).collect();
        let ys: Vec<f64> = out.samples.iter().map(|s| s.residual.max(1e-300).ln()).collect();
        let (_, slope) = line_fit(&xs, &ys);
        out.fitted_exponent = slope;
        // Log-spaced bins with medians.
        let bins = 4.min(out.samples.len());
        let lo = t_lo.ln();
        let hi = t_hi.ln();
        for b in 0..bins {
            let l = lo + (hi - lo) * b as f64 / bins as f64;
            let r = lo + (hi - lo) * (b + 1) as f64 / bins as f64;
            let mut vals: Vec<f64> = out
                .samples
                .iter()
                .filter(|s| s.t.ln() >= l && s.t.ln() < r)
                .map(|s| s.residual)
                .collect();
            if vals.is_empty() {
                continue;
            }
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out.binned_medians
                .push((((l + r) * 0.5).exp(), vals[vals.len() / 2]));
        }
    }
    Ok(out)
}

/// Chase a movable pole: repeatedly aim at the first-order Laurent estimate
/// x_p ≈ x + y/y′ (y has simple poles) and integrate most of the way, until
/// the |y| overflow guard fires.  Returns the pole event if caught.
pub fn hunt_pole(
    x0: C,
    y0: C,
    yp0: C,
    alpha: C,
    beta: C,
    opts: &IntegrateOptions,
) -> Result<Option<PoleEvent>> {
    let (mut x, mut y, mut yp) = (x0, y0, yp0);
    for _ in 0..200 {
        let xp_est = x + y / yp;
        let target = x + (xp_est - x) * 0.6;
        if (target - x).norm() < 1e-13 * (1.0 + x.norm()) {
            return Ok(Some(PoleEvent {
                x,
                reason: "pole estimate converged below resolution".into(),
            }));
        }
        let traj = integrate_p4(x, y, yp, &[target], alpha, beta, opts)?;
        if let Some(ev) = traj.pole_events.first() {
            return Ok(Some(ev.clone()));
        }
        let st = traj.final_state();
        x = st.0;
        y = st.1;
        yp = st.2;
    }
    Ok(None)
}

/// Brute-force residual scan over a rectangle in A: grid argmin of
/// |r_a| + |r_b|, then golden-section refinement per axis.
pub fn boutroux_oracle_scan(
    phi: f64,
    re_range: (f64, f64),
    im_range: (f64, f64),
    grid_n: usize,
) -> C {
    let score = |a: C| -> f64 {
        match crate::boutroux::boutroux_residual(phi, a) {
            Ok((ra, rb)) => ra.abs() + rb.abs(),
            Err(_) => f64::INFINITY,
        }
    };
    let mut best = (f64::INFINITY, c(0.0, 0.0));
    for i in 0..grid_n {
        for j in 0..grid_n {
            let a = c(
                re_range.0 + (re_range.1 - re_range.0) * (i as f64 + 0.5) / grid_n as f64,
                im_range.0 + (im_range.1 - im_range.0) * (j as f64 + 0.5) / grid_n as f64,
            );
            let s = score(a);
            if s < best.0 {
                best = (s, a);
            }
        }
    }
    // Zooming grids inside the best cell (the residual valley is a narrow
    // diagonal ravine, so plain coordinate descent stalls), then a final
    // golden-section polish per axis.
    let mut cell_re = (re_range.1 - re_range.0) / grid_n as f64;
    let mut cell_im = (im_range.1 - im_range.0) / grid_n as f64;
    let mut a = best.1;
    for _ in 0..6 {
        let mut local = (score(a), a);
        for i in -6i32..=6 {
            for j in -6i32..=6 {
                let cand = a + c(cell_re * i as f64 / 6.0, cell_im * j as f64 / 6.0);
                let s = score(cand);
                if s < local.0 {
                    local = (s, cand);
                }
            }
        }
        a = local.1;
        cell_re /= 5.0;
        cell_im /= 5.0;
    }
    for _ in 0..2 {
        a = c(golden_min(|x| score(c(x, a.im)), a.re - cell_re, a.re + cell_re), a.im);
        a = c(a.re, golden_min(|y| score(c(a.re, y)), a.im - cell_im, a.im + cell_im));
    }
    a
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..40 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boutroux::{seed_scan, solve_a, SolveOptions};
    use crate::monodromy::{phase_shift, solve_s4, MonodromyData};

    /// Exact rational solutions: y = −2x at (α,β) = (1/2, 2) and
    /// y = −2x/3 at (1/6, 2/3).
    #[test]
    fn rational_solutions_annihilate_the_rhs() {
        for (cc, alpha, beta) in [
            (-2.0, c(0.5, 0.0), c(2.0, 0.0)),
            (-2.0 / 3.0, c(1.0 / 6.0, 0.0), c(2.0 / 3.0, 0.0)),
        ] {
            for x in [c(1.0, 0.0), c(2.0, 1.0), c(5.0, 0.0)] {
                let y = x * cc;
                let rhs = p4_rhs(x, y, c(cc, 0.0), alpha, beta).unwrap();
                assert!(rhs.norm() < 1e-12 * (1.0 + y.norm()), "rhs {rhs} at {x}");
            }
        }
    }

    #[test]
    fn rhs_odd_symmetry() {
        let (alpha, beta) = (c(0.23, 0.0), c(0.71, 0.0));
        let (x, y, yp) = (c(1.3, 0.4), c(0.7, -0.2), c(0.1, 0.9));
        let a = p4_rhs(x, y, yp, alpha, beta).unwrap();
        let b = p4_rhs(-x, -y, yp, alpha, beta).unwrap();
        assert!((a + b).norm() < 1e-12 * (1.0 + a.norm()));
    }

    /// Max end-of-segment error of the rational solution y = c·x over
    /// re-seeded unit segments covering |x| ≤ 5 on both sides, avoiding the
    /// zero at the origin.  The rationals are separatrix solutions whose
    /// perturbations amplify like e^{Δ(x²)/√2} in either direction, so the
    /// segment length is what separates integrator error from the IVP's own
    /// conditioning.
    fn rational_segment_error(cc: f64, alpha: C, beta: C) -> f64 {
        let mut worst = 0.0f64;
        for sign in [1.0, -1.0] {
            let mut x0: f64 = 5.0 * sign;
            while x0.abs() > 1.0 {
                let x1 = x0 - 0.5 * sign;
                let traj = integrate_p4(
                    c(x0, 0.0),
                    c(cc * x0, 0.0),
                    c(cc, 0.0),
                    &[c(x1, 0.0)],
                    alpha,
                    beta,
                    &IntegrateOptions::default(),
                )
                .unwrap();
                let (_, y, yp) = traj.final_state();
                assert!(traj.completed);
                worst = worst
                    .max((y - c(cc * x1, 0.0)).norm())
                    .max((yp - c(cc, 0.0)).norm());
                x0 = x1;
            }
        }
        worst
    }

    #[test]
    fn integrates_rational_solution_exactly() {
        let e = rational_segment_error(-2.0, c(0.5, 0.0), c(2.0, 0.0));
        assert!(e < 1e-8, "max segment error {e}");
    }

    #[test]
    fn second_rational_solution_on_complex_path() {
        // y = −2x/3 at (α, β) = (1/6, 2/3): segments, plus one complex
        // detour leg checking the path machinery.
        let e = rational_segment_error(-2.0 / 3.0, c(1.0 / 6.0, 0.0), c(2.0 / 3.0, 0.0));
        assert!(e < 1e-8, "max segment error {e}");
        let traj = integrate_p4(
            c(5.0, 0.0),
            c(-10.0 / 3.0, 0.0),
            c(-2.0 / 3.0, 0.0),
            &[c(4.5, 0.3), c(4.0, 0.0)],
            c(1.0 / 6.0, 0.0),
            c(2.0 / 3.0, 0.0),
            &IntegrateOptions::default(),
        )
        .unwrap();
        let (_, y, _) = traj.final_state();
        assert!(traj.completed);
        assert!((y - c(-8.0 / 3.0, 0.0)).norm() < 1e-8, "y(4) = {y}");
    }

    #[test]
    fn step_halving_order_check() {
        // The embedded estimator's order shows in the accepted-step
        // scaling: steps ∝ tol^{−1/(p+1)}.
        let run = |rtol: f64| {
            integrate_p4(
                c(5.0, 0.0),
                c(-10.0, 0.0),
                c(-2.0, 0.0),
                &[c(1.0, 0.0)],
                c(0.5, 0.0),
                c(2.0, 0.0),
                &IntegrateOptions {
                    rtol,
                    atol: rtol * 1e-2,
                    max_steps: 100_000,
                },
            )
            .unwrap()
            .steps_accepted as f64
        };
        let n1 = run(1e-6);
        let n2 = run(1e-10);
        // With tol ratio 1e4 and p ≥ 4 the step ratio stays below
        // 10^{4/5} ≈ 6.3.
        assert!(n2 / n1 < 7.0, "step growth {} suggests order < 4", n2 / n1);
    }

    fn asym_fixture() -> AsymptoticSolution {
        let alpha = c(0.3, 0.0);
        let beta = c(0.1, 0.0);
        let s4 = solve_s4(alpha, beta, c(0.8, 0.1), c(0.3, -0.2), c(0.5, 0.4)).unwrap();
        let md = MonodromyData::new(alpha, beta, [c(0.8, 0.1), c(0.3, -0.2), c(0.5, 0.4), s4]);
        let phi = -std::f64::consts::FRAC_PI_8;
        let pt = solve_a(phi, seed_scan(phi, 24), &SolveOptions::default()).unwrap();
        phase_shift(&md, phi, 0, &pt.periods_z(), pt.a).unwrap()
    }

    #[test]
    fn seed_is_consistent_with_change_of_variables() {
        let asym = asym_fixture();
        let t0 = c(120.0, 0.3);
        let (x0, y0, _) = seed_from_asymptotics(&asym, t0).unwrap();
        let rot = cis(asym.phi_reduced());
        let back = (x0 / rot) * (x0 / rot) * 0.5;
        assert!((back - t0).norm() < 1e-10);
        // a_φ(t0) from the seeded pair approaches A_φ.
        let (psi, psi_t) = asym.psi(t0).unwrap();
        let a_t =
            crate::monodromy::a_phi_of_t(psi, psi_t, t0, asym.phi_reduced(), asym.monodromy.alpha, asym.monodromy.beta)
                .unwrap();
        assert!((a_t - asym.a_phi).norm() < 10.0 / t0.norm());
        let _ = y0;
    }

    #[test]
    fn wrong_sheet_breaks_the_modulation_bound() {
        // Negative control: flipping the sign of P′ in ψ_t destroys the
        // O(1/t) bound on a_φ(t) − A_φ.
        let asym = asym_fixture();
        let t0 = c(150.0, 0.3);
        let (psi, psi_t) = asym.psi(t0).unwrap();
        let good = crate::monodromy::a_phi_of_t(
            psi,
            psi_t,
            t0,
            asym.phi_reduced(),
            asym.monodromy.alpha,
            asym.monodromy.beta,
        )
        .unwrap();
        let bad = crate::monodromy::a_phi_of_t(
            psi,
            -psi_t,
            t0,
            asym.phi_reduced(),
            asym.monodromy.alpha,
            asym.monodromy.beta,
        )
        .unwrap();
        assert!((good - asym.a_phi).norm() < 0.1);
        assert!((bad - asym.a_phi).norm() > 10.0 * (good - asym.a_phi).norm());
    }

    #[test]
    fn short_inward_integration_tracks_the_ansatz() {
        let asym = asym_fixture();
        let scan = residual_scan(&asym, 170.0, 200.0, 6, 0.3, 0.15, &IntegrateOptions::default())
            .unwrap();
        assert!(scan.samples.len() >= 3, "samples: {:?}", scan.samples);
        let mut rs: Vec<f64> = scan.samples.iter().map(|s| s.residual).collect();
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(rs[rs.len() / 2] < 0.3, "median residual {}", rs[rs.len() / 2]);
    }

    #[test]
    fn pole_event_near_predicted_pole() {
        let asym = asym_fixture();
        // Aim straight (in t) at a predicted pole from a clean start on the
        // same horizontal line.
        let poles = asym.pole_ts(100.0, 200.0, 1.0);
        assert!(!poles.is_empty());
        let tp = poles[0];
        let t0 = tp + 4.0;
        let (x0, y0, yp0) = seed_from_asymptotics(&asym, t0).unwrap();
        let rot = cis(asym.phi_reduced());
        // March toward the predicted pole, then chase the actual one.
        let x_pred = rot * (tp * 2.0).sqrt();
        let approach = x_pred + (x0 - x_pred) * 0.02;
        let traj = integrate_p4(
            x0,
            y0,
            yp0,
            &[approach],
            asym.monodromy.alpha,
            asym.monodromy.beta,
            &IntegrateOptions::default(),
        )
        .unwrap();
        let (x1, y1, yp1) = traj.final_state();
        let event = hunt_pole(
            x1,
            y1,
            yp1,
            asym.monodromy.alpha,
            asym.monodromy.beta,
            &IntegrateOptions::default(),
        )
        .unwrap()
        .expect("pole not caught");
        assert!(
            (event.x - x_pred).norm() < 0.1,
            "pole at x = {}, predicted x = {x_pred} (t = {tp})",
            event.x
        );
        // The true pole should in fact sit very close to the prediction.
        assert!((event.x - x_pred).norm() < 0.02);
    }

    #[test]
    fn oracle_scan_finds_the_boutroux_point() {
        let phi = -std::f64::consts::FRAC_PI_8;
        let newton = solve_a(phi, seed_scan(phi, 24), &SolveOptions::default()).unwrap();
        let oracle = boutroux_oracle_scan(phi, (0.0, 8.0 / 27.0), (0.0, 0.2), 40);
        assert!(
            (oracle - newton.a).norm() < 1e-4,
            "oracle {oracle} vs newton {}",
            newton.a
        );
        // Coarse/fine consistency: argmins within one coarse cell.
        let fine = boutroux_oracle_scan(phi, (0.0, 8.0 / 27.0), (0.0, 0.2), 80);
        let cell = (8.0 / 27.0) / 40.0;
        assert!((oracle - fine).norm() < cell);
    }

    #[test]
    fn oracle_scan_near_phi_zero() {
        // At small φ the argmin sits near 8/27.
        let a = boutroux_oracle_scan(-5e-3, (0.2, 0.32), (-0.02, 0.05), 40);
        assert!((a - c(8.0 / 27.0, 0.0)).norm() < 1e-2, "argmin {a}");
    }
}
