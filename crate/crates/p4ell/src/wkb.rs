//! Turning points and Stokes graphs of the t = ∞ characteristic root
//! μ(λ)² = λ⁶ + 4e^{iφ}λ⁴ + 4e^{2iφ}λ² + 4e^{3iφ}A, for which
//! λμ(λ) = w(A, λ²).
//!
//! Stokes curves are the level sets Re ∫_{λ_j}^λ μ dλ = 0 emanating from
//! the turning points λ_j = ±√z_j; they are traced by arc-length stepping
//! orthogonal to ∇Re∫μ with a projection correction back onto the level
//! set, and terminate at another turning point or escape to the rays
//! arg λ = π/8 + kπ/4.

use crate::curve::roots::cubic_roots;
use crate::error::{Error, Result};
use crate::num::{c, cis, line_fit, C};
use serde::Serialize;

/// μ(∞, λ)² for the curve (φ, A).
pub fn mu_inf_squared(phi: f64, a: C, lambda: C) -> C {
    let rot = cis(phi);
    let l2 = lambda * lambda;
    ((l2 + rot * 4.0) * l2 + rot * rot * 4.0) * l2 + rot.powu(3) * a * 4.0
}

/// The six turning points, ordered (λ₁, λ₂, λ₃, λ₄, λ₅, λ₆) with
/// λ_{2k} = −λ_{2k−1} and λ_{1,3,5} in the sector |arg λ − π/2| < π/4.
pub fn turning_points(phi: f64, a: C) -> [C; 6] {
    let (z1, z3, z5) = cubic_roots(phi, a);
    let pick = |z: C| -> C {
        let r = z.sqrt();
        // Prefer the root around +i.
        if (r.arg() - std::f64::consts::FRAC_PI_2).abs() <= (std::f64::consts::FRAC_PI_2 + r.arg()).abs() {
            r
        } else {
            -r
        }
    };
    let l1 = pick(z1);
    let l3 = pick(z3);
    let l5 = pick(z5);
    [l1, -l1, l3, -l3, l5, -l5]
}

/// How a traced Stokes curve ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TraceEnd {
    /// Captured by turning point of this index (into `turning_points`).
    TurningPoint(usize),
    /// Escaped to |λ| = R_max; the asymptotic ray index k in
    /// arg λ = π/8 + kπ/4 (k = 0..7) and the measured angle at |λ| = 10.
    Ray { k: usize, angle: f64 },
    /// Reached the origin (only on degenerate graphs).
    Origin,
}

#[derive(Debug, Clone, Serialize)]
pub struct StokesCurve {
    pub from: usize,
    #[serde(with = "crate::num::c_vec")]
    pub points: Vec<C>,
    pub end: TraceEnd,
    /// max |Re ∫ μ dλ| accumulated along the polyline.
    pub level_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StokesGraph {
    pub phi: f64,
    #[serde(serialize_with = "crate::num::serialize_c")]
    pub a: C,
    #[serde(with = "crate::num::c_vec")]
    pub turning_points: Vec<C>,
    pub curves: Vec<StokesCurve>,
}

/// Adjacency summary: which turning points connect, and which rays each
/// turning point feeds.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GraphTopology {
    /// Sorted pairs (i, j), i < j, of connected turning points.
    pub connections: Vec<(usize, usize)>,
    /// Sorted (turning point, ray k) incidences.
    pub rays: Vec<(usize, usize)>,
}

pub struct TraceOptions {
    pub step: f64,
    pub r_max: f64,
    pub capture_radius: f64,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 4e-3,
            r_max: 12.0,
            capture_radius: 2e-2,
            max_steps: 80_000,
        }
    }
}

/// Re-integrate Re ∫ μ dλ along an emitted polyline (4-point Gauss per
/// segment, branch tracked by continuity); returns max |Re ∫| along the
/// way, skipping the model segments within `skip` of any turning point.
pub fn reintegrate_level(phi: f64, a: C, tps: &[C], curve: &StokesCurve, skip: f64) -> f64 {
    let pts = &curve.points;
    if pts.len() < 3 {
        return 0.0;
    }
    // Start with the √-substituted integral over the first (singular)
    // segment, then accumulate over the regular polyline; the branch sign
    // only flips Re globally, so max |Re| is branch-independent.
    let dir0 = (pts[1] - pts[0]) / (pts[1] - pts[0]).norm();
    let (start, mu_end) = start_integral(phi, a, pts[0], dir0, (pts[1] - pts[0]).norm());
    let mut mu = mu_end;
    let mut integral = start;
    let mut max_re: f64 = 0.0;
    for w in pts.windows(2).skip(1) {
        let (p, q) = (w[0], w[1]);
        let (x_nodes, x_weights) = crate::quad::gauss_legendre(8);
        let mut seg = c(0.0, 0.0);
        let mut mu_run = mu;
        for (x, wt) in x_nodes.iter().zip(x_weights) {
            let z = p + (q - p) * ((x + 1.0) * 0.5);
            mu_run = mu_next(phi, a, z, mu_run);
            seg += mu_run * *wt;
        }
        seg *= (q - p) * 0.5;
        mu = mu_next(phi, a, q, mu);
        integral += seg;
        let clear = tps.iter().map(|&tp| (q - tp).norm()).fold(f64::INFINITY, f64::min);
        if clear > skip {
            max_re = max_re.max(integral.re.abs());
        }
    }
    max_re
}

/// Continuous √(μ²) along the trace, carried by the caller.
fn mu_next(phi: f64, a: C, lambda: C, mu_prev: C) -> C {
    let s = mu_inf_squared(phi, a, lambda).sqrt();
    if (s - mu_prev).norm() <= (-s - mu_prev).norm() {
        s
    } else {
        -s
    }
}

/// ∫_{λ₀}^{λ₀+dir·δ} μ dλ from a turning point λ₀, with the √ endpoint
/// singularity removed by ξ = σ²; also returns μ at the segment end
/// (continuous branch with √g(0) principal).  Double turning points have
/// μ = ξ·√h analytic and are integrated directly.
fn start_integral(phi: f64, a: C, l0: C, dir: C, delta: f64) -> (C, C) {
    // Detect the local multiplicity through the derivative of μ² at λ0.
    let hstep = 1e-7;
    let d1 = (mu_inf_squared(phi, a, l0 + dir * hstep) - mu_inf_squared(phi, a, l0 - dir * hstep))
        / (2.0 * hstep);
    let scale = 1.0 + a.norm();
    if d1.norm() < 1e-4 * scale {
        // Double point: μ² = ξ²·h(ξ), μ = ξ√h smooth along the ray.
        let h_of = |xi: f64| -> C {
            if xi == 0.0 {
                let e = 1e-5;
                mu_inf_squared(phi, a, l0 + dir * e) / (e * e)
            } else {
                mu_inf_squared(phi, a, l0 + dir * xi) / (xi * xi)
            }
        };
        let (x_nodes, x_weights) = crate::quad::gauss_legendre(24);
        let mut acc = c(0.0, 0.0);
        let mut s_run = h_of(0.0).sqrt();
        let mut xi_prev = 0.0;
        for (x, wt) in x_nodes.iter().zip(x_weights) {
            let xi = (x + 1.0) * 0.5 * delta;
            let f = |t: f64| h_of(xi_prev + (xi - xi_prev) * t);
            s_run = crate::curve::branch::track_sqrt(&f, 0.0, s_run, 1.0, 0).unwrap_or(s_run);
            xi_prev = xi;
            acc += s_run * xi * *wt;
        }
        acc *= delta * 0.5 * dir;
        let f = |t: f64| h_of(xi_prev + (delta - xi_prev) * t);
        let s_end = crate::curve::branch::track_sqrt(&f, 0.0, s_run, 1.0, 0).unwrap_or(s_run);
        return (acc, s_end * delta);
    }
    // μ(λ0+ξ·dir)² = ξ·g(ξ) with g(0) = d/dλ μ²·dir ≠ 0.
    let g = move |xi: f64| -> C {
        if xi == 0.0 {
            d1
        } else {
            mu_inf_squared(phi, a, l0 + dir * xi) / xi
        }
    };
    let (x_nodes, x_weights) = crate::quad::gauss_legendre(24);
    let sqrt_delta = delta.sqrt();
    let mut acc = c(0.0, 0.0);
    let mut s_run = g(0.0).sqrt();
    let mut sigma_prev = 0.0;
    for (x, wt) in x_nodes.iter().zip(x_weights) {
        let sigma = (x + 1.0) * 0.5 * sqrt_delta;
        let f = |t: f64| {
            let sg = sigma_prev + (sigma - sigma_prev) * t;
            g(sg * sg)
        };
        s_run = crate::curve::branch::track_sqrt(&f, 0.0, s_run, 1.0, 0).unwrap_or(s_run);
        sigma_prev = sigma;
        acc += s_run * (2.0 * sigma * sigma) * *wt;
    }
    acc *= sqrt_delta * 0.5 * dir;
    // μ at the end point, on the tracked branch: μ = √δ·√g(δ).
    let f = |t: f64| g((sigma_prev + (sqrt_delta - sigma_prev) * t).powi(2));
    let s_end = crate::curve::branch::track_sqrt(&f, 0.0, s_run, 1.0, 0).unwrap_or(s_run);
    let mu_end = s_end * sqrt_delta;
    (acc, mu_end)
}

/// Local multiplicity of the turning point: number of the six roots within
/// the coalescence radius.
fn local_multiplicity(tps: &[C; 6], j: usize, radius: f64) -> usize {
    tps.iter().filter(|&&l| (l - tps[j]).norm() < radius).count()
}

/// Initial directions of the Stokes curves at a turning point of local
/// multiplicity m: the m+2 level-set directions of Re[c·(λ−λ_j)^{(m+2)/2}].
fn initial_directions(phi: f64, a: C, tps: &[C; 6], j: usize, radius: f64) -> Vec<C> {
    let l0 = tps[j];
    let m = local_multiplicity(tps, j, radius);
    // Effective leading coefficient: divide out the near-cluster factors.
    let probe = 3.0 * radius;
    let mut cm = mu_inf_squared(phi, a, l0 + probe) / c(probe, 0.0).powu(m as u32);
    // Average over a few probe directions for stability.
    for dir in [cis(1.7), cis(3.9)] {
        let p = l0 + dir * probe;
        cm += mu_inf_squared(phi, a, p) / (dir * probe).powu(m as u32);
    }
    let arg_c = (cm / 3.0).arg() / 2.0; // arg of sqrt(c_m)
    let count = m + 2;
    (0..count)
        .map(|k| {
            let theta = (std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI - arg_c)
                * 2.0
                / (count as f64);
            cis(theta)
        })
        .collect()
}

/// Trace one Stokes curve from turning point `j` in the given initial
/// direction.
pub fn stokes_trace(
    phi: f64,
    a: C,
    tps: &[C; 6],
    j: usize,
    dir0: C,
    opts: &TraceOptions,
) -> Result<StokesCurve> {
    let l0 = tps[j];
    let start_offset = 4.0 * opts.step;
    let lambda0 = l0 + dir0 * start_offset;
    // Exact start integral over the offset (simple turning points; double
    // points have μ analytic and the same routine applies with g ≈ μ²/ξ
    // staying regular since the trace directions avoid the partner zero).
    let (start, mu_end) = start_integral(phi, a, l0, dir0, start_offset);
    let mut integral = start;
    let mut mu = mu_end;
    if integral.re.abs() > integral.im.abs() {
        mu = -mu;
        integral = -integral;
    }
    let mut lambda = lambda0;
    let mut points = vec![l0, lambda];
    let mut drift: f64 = integral.re.abs();
    let mut dir_prev = dir0;
    for _ in 0..opts.max_steps {
        // Leave if captured by another turning point.
        for (k, &tp) in tps.iter().enumerate() {
            if k != j && (lambda - tp).norm() < opts.capture_radius {
                points.push(tp);
                return Ok(StokesCurve {
                    from: j,
                    points,
                    end: TraceEnd::TurningPoint(k),
                    level_drift: drift,
                });
            }
        }
        if lambda.norm() < opts.capture_radius && a.norm() < 1e-8 {
            points.push(c(0.0, 0.0));
            return Ok(StokesCurve {
                from: j,
                points,
                end: TraceEnd::Origin,
                level_drift: drift,
            });
        }
        if lambda.norm() > opts.r_max {
            let angle = angle_at_radius(&points, 10.0).unwrap_or(lambda.arg());
            let k = ray_index(angle);
            return Ok(StokesCurve {
                from: j,
                points,
                end: TraceEnd::Ray { k, angle },
                level_drift: drift,
            });
        }
        // Tangent: Re(μ dλ) = 0 ⇒ dλ ∝ i·conj(μ)/|μ|; keep the heading.
        let mut tangent = crate::num::I * mu.conj() / mu.norm();
        if (tangent / dir_prev).re < 0.0 {
            tangent = -tangent;
        }
        // Curvature-adaptive step: shrink near turning points.
        let near = tps
            .iter()
            .map(|&tp| (lambda - tp).norm())
            .fold(f64::INFINITY, f64::min);
        let h = opts.step * (1.0 + lambda.norm()) * near.min(1.0).max(0.05);
        let gauss_seg = |p: C, q: C, mu_p: C| -> (C, C) {
            let (x_nodes, x_weights) = crate::quad::gauss_legendre(8);
            let mut seg = c(0.0, 0.0);
            let mut mu_run = mu_p;
            for (x, wt) in x_nodes.iter().zip(x_weights) {
                let z = p + (q - p) * ((x + 1.0) * 0.5);
                mu_run = mu_next(phi, a, z, mu_run);
                seg += mu_run * *wt;
            }
            (seg * (q - p) * 0.5, mu_next(phi, a, q, mu_run))
        };
        let l_new = lambda + tangent * h;
        let (seg1, mu_new) = gauss_seg(lambda, l_new, mu);
        integral += seg1;
        // Projection correction back onto Re ∫ μ = 0.
        let corr = -integral.re * mu_new.conj() / mu_new.norm_sqr();
        let l_corr = l_new + corr;
        let (seg2, mu_corr) = gauss_seg(l_new, l_corr, mu_new);
        integral += seg2;
        drift = drift.max(integral.re.abs());
        dir_prev = tangent;
        lambda = l_corr;
        mu = mu_corr;
        points.push(lambda);
    }
    Err(Error::TraceFailure {
        at: lambda,
        points: points.len(),
        reason: "step budget exhausted".into(),
    })
}

fn angle_at_radius(points: &[C], r: f64) -> Option<f64> {
    points
        .windows(2)
        .find(|w| w[0].norm() <= r && w[1].norm() > r)
        .map(|w| w[1].arg())
}

fn ray_index(angle: f64) -> usize {
    let two_pi = 2.0 * std::f64::consts::PI;
    let base = std::f64::consts::FRAC_PI_8;
    let k = ((angle - base) / (two_pi / 8.0)).round();
    ((k % 8.0 + 8.0) % 8.0) as usize
}

/// Exact ray directions π/8 + kπ/4.
pub fn ray_angle(k: usize) -> f64 {
    std::f64::consts::FRAC_PI_8 + k as f64 * std::f64::consts::FRAC_PI_4
}

/// Angular distance modulo 2π.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// Trace the full Stokes graph at (φ, A).
pub fn stokes_graph(phi: f64, a: C, opts: &TraceOptions) -> Result<StokesGraph> {
    let tps = turning_points(phi, a);
    let mut curves = Vec::new();
    let coal = opts.capture_radius;
    // Trace from one representative of each coalescence cluster.
    let mut seen: Vec<usize> = Vec::new();
    for j in 0..6 {
        if seen
            .iter()
            .any(|&k| (tps[k] - tps[j]).norm() < coal)
        {
            continue;
        }
        seen.push(j);
        for dir in initial_directions(phi, a, &tps, j, coal) {
            match stokes_trace(phi, a, &tps, j, dir, opts) {
                Ok(curve) => curves.push(curve),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(StokesGraph {
        phi,
        a,
        turning_points: tps.to_vec(),
        curves,
    })
}

/// Convenience: graph at the Boutroux modulus for φ.
pub fn stokes_graph_on_trajectory(phi: f64, opts: &TraceOptions) -> Result<StokesGraph> {
    let red = crate::boutroux::reduce_phi(phi);
    let pt = crate::boutroux::solve_a(
        red,
        crate::boutroux::seed_scan(red, 24),
        &crate::boutroux::SolveOptions::default(),
    )?;
    stokes_graph(phi, pt.a, opts)
}

impl StokesGraph {
    /// Adjacency summary with cluster-aware endpoints.
    pub fn topology(&self) -> GraphTopology {
        let mut connections = Vec::new();
        let mut rays = Vec::new();
        for curve in &self.curves {
            match curve.end {
                TraceEnd::TurningPoint(k) => {
                    let (i, j) = if curve.from < k {
                        (curve.from, k)
                    } else {
                        (k, curve.from)
                    };
                    if !connections.contains(&(i, j)) {
                        connections.push((i, j));
                    }
                }
                TraceEnd::Ray { k, .. } => {
                    if !rays.contains(&(curve.from, k)) {
                        rays.push((curve.from, k));
                    }
                }
                TraceEnd::Origin => {}
            }
        }
        connections.sort_unstable();
        rays.sort_unstable();
        GraphTopology { connections, rays }
    }

    /// SVG rendering (curves, turning points, cuts between them, rays).
    pub fn to_svg(&self, width: u32, height: u32, view: f64) -> String {
        let scale = f64::from(width.min(height)) / (2.0 * view);
        let px = |z: C| -> (f64, f64) {
            (
                f64::from(width) * 0.5 + z.re * scale,
                f64::from(height) * 0.5 - z.im * scale,
            )
        };
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for k in 0..8 {
            let a = ray_angle(k);
            let (x1, y1) = px(cis(a) * view * 0.55);
            let (x2, y2) = px(cis(a) * view * 1.5);
            out.push_str(&format!(
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\" stroke-width=\"1\"/>\n"
            ));
        }
        for curve in &self.curves {
            let pts: Vec<String> = curve
                .points
                .iter()
                .filter(|z| z.norm() < view * 1.6)
                .map(|&z| {
                    let (x, y) = px(z);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
        }
        for &tp in &self.turning_points {
            let (x, y) = px(tp);
            out.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"#c0392b\"/>\n"
            ));
        }
        let (ox, oy) = px(c(0.0, 0.0));
        out.push_str(&format!(
            "<circle cx=\"{ox:.2}\" cy=\"{oy:.2}\" r=\"3\" fill=\"none\" stroke=\"#444444\"/>\n"
        ));
        out.push_str("</svg>\n");
        out
    }
}

/// Fitted coalescence exponent of |λ₁ − λ₃| against |ε_φ| over a φ-range;
/// the log-corrected variable makes the 1/2-power law visible.
pub fn coalescence_exponent(phis: &[f64]) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &phi in phis {
        let pt = crate::boutroux::solve_a(
            phi,
            c(crate::boutroux::A_ZERO, 0.0) + crate::boutroux::epsilon_phi(phi),
            &crate::boutroux::SolveOptions::default(),
        )?;
        let tps = turning_points(phi, pt.a);
        xs.push(crate::boutroux::epsilon_phi(phi).norm().ln());
        ys.push((tps[0] - tps[2]).norm().ln());
    }
    let (_, slope) = line_fit(&xs, &ys);
    Ok(slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_squared_matches_w_on_the_curve() {
        let (phi, a) = (0.22, c(0.19, 0.03));
        for lambda in [c(0.9, 0.4), c(-0.3, 1.2), c(2.0, -0.7)] {
            let spec = crate::curve::CurveSpec::new(phi, a);
            let lhs = lambda * lambda * mu_inf_squared(phi, a, lambda);
            let rhs = spec.quartic(lambda * lambda);
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
            // Parity.
            assert!(
                (mu_inf_squared(phi, a, -lambda) - mu_inf_squared(phi, a, lambda)).norm()
                    < 1e-14 * (1.0 + lhs.norm())
            );
        }
        // Leading term at large λ.
        let big = c(80.0, 11.0);
        let ratio = mu_inf_squared(phi, a, big) / big.powu(6);
        assert!((ratio - 1.0).norm() < 1e-2);
    }

    #[test]
    fn turning_points_at_known_configurations() {
        // φ = 0, A = 8/27: λ₁ = λ₃ = i√6/3, λ₅ = 2i√6/3.
        let tps = turning_points(0.0, c(8.0 / 27.0, 0.0));
        let expect13 = c(0.0, 6.0_f64.sqrt() / 3.0);
        let expect5 = c(0.0, 2.0 * 6.0_f64.sqrt() / 3.0);
        assert!((tps[0] - expect13).norm() < 1e-9, "λ1 = {}", tps[0]);
        assert!((tps[2] - expect13).norm() < 1e-9);
        assert!((tps[4] - expect5).norm() < 1e-9);
        // φ = π/4, A = 0: λ₁ = 0, λ₃ = λ₅ = √2 i e^{iπ/8}.
        let tps = turning_points(std::f64::consts::FRAC_PI_4, c(0.0, 0.0));
        let expect35 = crate::num::I * cis(std::f64::consts::FRAC_PI_8) * 2.0_f64.sqrt();
        assert!(tps[0].norm() < 1e-12);
        assert!((tps[2] - expect35).norm() < 1e-9, "λ3 = {}", tps[2]);
        assert!((tps[4] - expect35).norm() < 1e-9);
    }

    #[test]
    fn splitting_direction_for_small_phi() {
        // λ_{1,3} split off i√6/3 along e^{∓iπ/4}-type directions: for
        // φ < 0 the pair separates along e^{iπ/4}/e^{-3iπ/4}.
        let phi = -0.02;
        let pt = crate::boutroux::solve_a(
            phi,
            c(crate::boutroux::A_ZERO, 0.0) + crate::boutroux::epsilon_phi(phi),
            &crate::boutroux::SolveOptions::default(),
        )
        .unwrap();
        let tps = turning_points(phi, pt.a);
        let centre = c(0.0, 6.0_f64.sqrt() / 3.0);
        let d1 = tps[0] - centre;
        let d3 = tps[2] - centre;
        assert!((d1 + d3).norm() < 0.3 * d1.norm(), "split is symmetric");
        let axis = (d1 - d3).arg();
        let expected = std::f64::consts::FRAC_PI_4;
        let diff = (axis - expected + std::f64::consts::PI)
            .rem_euclid(std::f64::consts::PI)
            - std::f64::consts::PI * 0.0;
        assert!(
            diff.min((diff - std::f64::consts::PI).abs()) < 0.35,
            "axis {axis} vs ±π/4"
        );
    }

    #[test]
    fn three_curves_emanate_from_simple_turning_points() {
        let phi = -0.2;
        let pt = crate::boutroux::solve_a(
            phi,
            crate::boutroux::seed_scan(phi, 24),
            &crate::boutroux::SolveOptions::default(),
        )
        .unwrap();
        let tps = turning_points(phi, pt.a);
        let dirs = initial_directions(phi, pt.a, &tps, 0, 1e-2);
        assert_eq!(dirs.len(), 3);
        // At φ=0 the double point λ_{1,3} gets four.
        let tps0 = turning_points(0.0, c(8.0 / 27.0, 0.0));
        let dirs0 = initial_directions(0.0, c(8.0 / 27.0, 0.0), &tps0, 0, 1e-2);
        assert_eq!(dirs0.len(), 4);
    }

    #[test]
    fn graph_has_boutroux_connections_and_ray_asymptotics() {
        let opts = TraceOptions::default();
        let g = stokes_graph_on_trajectory(-0.2, &opts).unwrap();
        let topo = g.topology();
        // Saddle connections λ1–λ3 and λ3–λ5 (indices 0–2 and 2–4).
        assert!(
            topo.connections.contains(&(0, 2)),
            "missing λ1–λ3: {:?}",
            topo.connections
        );
        assert!(
            topo.connections.contains(&(2, 4)),
            "missing λ3–λ5: {:?}",
            topo.connections
        );
        // Level-set fidelity: re-integration along every emitted polyline.
        for curve in &g.curves {
            let drift = reintegrate_level(g.phi, g.a, &g.turning_points, curve, 0.1);
            assert!(drift < 1e-5, "re-integration drift {drift}");
        }
        // Every unbounded curve approaches a ray within 1e-2 at |λ| = 10.
        for curve in &g.curves {
            if let TraceEnd::Ray { k, angle } = curve.end {
                let diff = angle_distance(angle, ray_angle(k));
                assert!(diff < 1e-2, "ray {k}: angle {angle} vs {}", ray_angle(k));
            }
        }
        // Symmetry λ ↦ −λ: the curve set is closed under negation, so the
        // connection list must pair (0,2)↔(1,3) and (2,4)↔(3,5).
        assert_eq!(
            topo.connections.contains(&(1, 3)),
            topo.connections.contains(&(0, 2))
        );
    }

    #[test]
    fn mirror_symmetry_between_phi_signs() {
        let opts = TraceOptions::default();
        let gm = stokes_graph_on_trajectory(-0.15, &opts).unwrap();
        let gp = stokes_graph_on_trajectory(0.15, &opts).unwrap();
        // λ ↦ −conj λ maps the φ-graph onto the −φ-graph with the same
        // labels, so the adjacency lists agree.
        assert_eq!(gm.topology().connections, gp.topology().connections);
        for (a, b) in gm.turning_points.iter().zip(&gp.turning_points) {
            assert!((-(a.conj()) - b).norm() < 1e-9);
        }
    }

    #[test]
    fn degenerate_graph_at_phi_zero() {
        // φ = 0, A = 8/27: λ_{1,3} is a double turning point with four
        // Stokes curves; the graph still closes with ray asymptotics.
        let opts = TraceOptions::default();
        let g = stokes_graph(0.0, crate::num::c(8.0 / 27.0, 0.0), &opts).unwrap();
        // Curves from the cluster at λ_{1,3}: traced once per cluster.
        let from_double: Vec<_> = g
            .curves
            .iter()
            .filter(|c| c.from == 0 || c.from == 2)
            .collect();
        assert_eq!(from_double.len(), 4, "double point must emit 4 curves");
        for curve in &g.curves {
            if let TraceEnd::Ray { k, angle } = curve.end {
                assert!(angle_distance(angle, ray_angle(k)) < 1e-2);
            }
        }
    }

    #[test]
    fn coalescence_follows_half_power_law() {
        let phis: Vec<f64> = (0..8)
            .map(|k| -1e-3 * (1e-1_f64 / 1e-3).powf(k as f64 / 7.0))
            .collect();
        let slope = coalescence_exponent(&phis).unwrap();
        assert!((slope - 0.5).abs() < 0.1, "coalescence exponent {slope}");
    }
}
