//! Branch-tracked evaluation of w = √(z(z−z₁)(z−z₃)(z−z₅)).
//!
//! The branch is fixed once and for all at infinity: w/z² → 1 on the upper
//! sheet.  Any other value is obtained by numerical continuation along a
//! path that avoids the cuts [z₅, z₃] and [z₁, 0].  The complement of the
//! cuts is simply connected for w (a loop around an entire cut encircles two
//! branch points and is monodromy-trivial), so the continued value does not
//! depend on the chosen path.

use super::CurveSpec;
use crate::error::{Error, Result};
use crate::num::{dist_point_segment, dist_segment_segment, C, I};

/// Relative distance below which a target counts as sitting on a cut.
const ON_CUT_TOL: f64 = 1e-7;
/// Relative offset used to anchor shore values.
const SHORE_EPS: f64 = 1e-5;

impl CurveSpec {
    /// Anchor point far from the cuts together with the upper-sheet value
    /// of w there.
    pub fn anchor(&self) -> (C, C) {
        let z = self.rot() * (6.0 * self.scale());
        let w = z * z
            * ((1.0 - self.z1 / z).sqrt() * (1.0 - self.z3 / z).sqrt() * (1.0 - self.z5 / z).sqrt());
        (z, w)
    }

    /// Both candidate values ±√(w²(z)); the sign closer to `hint` wins.
    pub fn w_with_hint(&self, z: C, hint: C) -> C {
        let s = self.quartic(z).sqrt();
        if (s - hint).norm() <= (-s - hint).norm() {
            s
        } else {
            -s
        }
    }

    /// Upper-sheet value w₊(z) by continuation from the anchor.
    ///
    /// Points on a cut are resolved on the left shore of the oriented cut
    /// ([z₅→z₃] and [z₁→0]); the sheet on the shore is the limit from that
    /// side.
    pub fn w_upper(&self, z: C) -> Result<C> {
        let scale = self.scale();
        for b in self.branch_points() {
            if (z - b).norm() < 1e-10 * scale {
                return Err(Error::Singularity(z));
            }
        }
        let (mut target, mut hop) = (z, None);
        for (c0, c1) in self.cuts() {
            if (c1 - c0).norm() < 1e-12 * scale {
                continue;
            }
            if dist_point_segment(z, c0, c1) < ON_CUT_TOL * scale {
                let n = I * (c1 - c0) / (c1 - c0).norm();
                target = z + n * (SHORE_EPS * scale);
                hop = Some(z);
                break;
            }
        }
        let (anchor, w0) = self.anchor();
        let path = self.route(anchor, target)?;
        let mut w = continue_along(self, &path, w0)?;
        if let Some(z_final) = hop {
            w = self.w_with_hint(z_final, w);
        }
        Ok(w)
    }

    /// w on the requested sheet (+1 is the branch with w/z² → 1 at infinity).
    pub fn w_eval(&self, z: C, sheet: i8) -> Result<C> {
        let w = self.w_upper(z)?;
        Ok(if sheet >= 0 { w } else { -w })
    }

    /// dw/dz on the sheet carrying the value `w` at `z`.
    pub fn w_prime(&self, z: C, w: C) -> C {
        self.quartic_prime(z) / (w * 2.0)
    }

    /// A cut-avoiding polyline from `from` to `to`.
    pub fn route(&self, from: C, to: C) -> Result<Vec<C>> {
        if self.leg_clear(from, to) {
            return Ok(vec![from, to]);
        }
        let cands = self.detour_candidates();
        let mut best: Option<(f64, Vec<C>)> = None;
        for &w1 in &cands {
            if self.leg_clear(from, w1) && self.leg_clear(w1, to) {
                let cost = (w1 - from).norm() + (to - w1).norm();
                if best.as_ref().map_or(true, |(c0, _)| cost < *c0) {
                    best = Some((cost, vec![from, w1, to]));
                }
            }
        }
        if let Some((_, path)) = best {
            return Ok(path);
        }
        for &w1 in &cands {
            for &w2 in &cands {
                if self.leg_clear(from, w1) && self.leg_clear(w1, w2) && self.leg_clear(w2, to) {
                    let cost = (w1 - from).norm() + (w2 - w1).norm() + (to - w2).norm();
                    if best.as_ref().map_or(true, |(c0, _)| cost < *c0) {
                        best = Some((cost, vec![from, w1, w2, to]));
                    }
                }
            }
        }
        best.map(|(_, p)| p)
            .ok_or_else(|| Error::Domain(format!("no cut-avoiding route from {from} to {to}")))
    }

    fn detour_candidates(&self) -> Vec<C> {
        let scale = self.scale();
        let mut cands = Vec::new();
        for (c0, c1) in self.cuts() {
            let len = (c1 - c0).norm().max(0.3 * scale);
            let u = if (c1 - c0).norm() > 1e-12 * scale {
                (c1 - c0) / (c1 - c0).norm()
            } else {
                self.rot()
            };
            let n = I * u;
            for (end, out) in [(c0, -u), (c1, u)] {
                for k in [0.4, 0.9, 1.8] {
                    for side in [n, -n] {
                        cands.push(end + (out + side) * (k * len * 0.5));
                    }
                }
            }
        }
        cands
    }

    fn leg_clear(&self, p: C, q: C) -> bool {
        let scale = self.scale();
        let shrink = (q - p) * 1e-6;
        let (p, q) = (p + shrink, q - shrink);
        for (c0, c1) in self.cuts() {
            if (c1 - c0).norm() < 1e-12 * scale {
                // Collapsed cut: treat as a point obstacle.
                if dist_point_segment(c0, p, q) < 1e-7 * scale {
                    return false;
                }
                continue;
            }
            if dist_segment_segment(p, q, c0, c1) < 1e-7 * scale {
                return false;
            }
        }
        true
    }
}

/// Continue w along the polyline, starting from the value `w0` at `path[0]`.
pub fn continue_along(spec: &CurveSpec, path: &[C], w0: C) -> Result<C> {
    let mut w = w0;
    for leg in path.windows(2) {
        w = continue_leg(spec, leg[0], leg[1], w, 0)?;
    }
    Ok(w)
}

fn continue_leg(spec: &CurveSpec, p: C, q: C, w_p: C, depth: usize) -> Result<C> {
    // The winding rate of arg w along a leg is bounded by the inverse
    // distance to the branch points, so pick the march resolution from the
    // exact leg clearance; ambiguous sign choices still halve recursively.
    let clearance = spec
        .branch_points()
        .iter()
        .map(|&b| crate::num::dist_point_segment(b, p, q))
        .fold(f64::INFINITY, f64::min)
        .max(1e-12 * spec.scale());
    let len = (q - p).norm();
    let steps = ((len / (0.3 * clearance)).ceil() as usize).clamp(8, 20_000);
    let mut z_prev = p;
    let mut w = w_p;
    for k in 1..=steps {
        let z = p + (q - p) * (k as f64 / steps as f64);
        w = sqrt_step(spec, z_prev, z, w, depth)?;
        z_prev = z;
    }
    Ok(w)
}

fn sqrt_step(spec: &CurveSpec, z_prev: C, z: C, w_prev: C, depth: usize) -> Result<C> {
    let s = spec.quartic(z).sqrt();
    let (dk, df) = ((s - w_prev).norm(), (-s - w_prev).norm());
    let pick = if dk <= df { s } else { -s };
    if dk.min(df) <= 0.2 * (dk + df) {
        return Ok(pick);
    }
    if depth > 48 {
        return Err(Error::Singularity(z));
    }
    let mid = (z_prev + z) * 0.5;
    let w_mid = sqrt_step(spec, z_prev, mid, w_prev, depth + 1)?;
    sqrt_step(spec, mid, z, w_mid, depth + 1)
}

/// Track a continuous branch of √f along a 1-D parameter.
///
/// Given s₀ = √f(t₀) (some branch), returns the continuation to t₁.
pub fn track_sqrt<F: Fn(f64) -> C>(f: &F, t0: f64, s0: C, t1: f64, depth: usize) -> Result<C> {
    let s = f(t1).sqrt();
    let (dk, df) = ((s - s0).norm(), (-s - s0).norm());
    let pick = if dk <= df { s } else { -s };
    if dk.min(df) <= 0.2 * (dk + df) {
        return Ok(pick);
    }
    if depth > 48 {
        return Err(Error::Singularity(C::new(t1, 0.0)));
    }
    let tm = 0.5 * (t0 + t1);
    let sm = track_sqrt(f, t0, s0, tm, depth + 1)?;
    track_sqrt(f, tm, sm, t1, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c;

    #[test]
    fn sheet_normalised_at_infinity() {
        let spec = CurveSpec::new(0.25, c(0.18, 0.02));
        let z = c(1e6, 0.0);
        let w = spec.w_upper(z).unwrap();
        assert!((w / (z * z) - 1.0).norm() < 1e-5);
    }

    #[test]
    fn sheet_flip_negates() {
        let spec = CurveSpec::new(-0.4, c(0.21, -0.01));
        let z = c(0.7, 1.3);
        let wp = spec.w_eval(z, 1).unwrap();
        let wm = spec.w_eval(z, -1).unwrap();
        assert!((wp + wm).norm() < 1e-14 * wp.norm());
        assert!((wp * wp - spec.quartic(z)).norm() < 1e-12 * spec.quartic(z).norm());
    }

    #[test]
    fn continuation_is_path_independent() {
        // Same endpoint through two different detours around the cuts.
        let spec = CurveSpec::zeta(c(0.14, 0.05));
        let (anchor, w0) = spec.anchor();
        let target = c(-1.4, -0.02);
        let up = vec![anchor, c(0.0, 5.0), target];
        let down = vec![anchor, c(0.0, -5.0), c(-6.0, -3.0), target];
        let wu = continue_along(&spec, &up, w0).unwrap();
        let wd = continue_along(&spec, &down, w0).unwrap();
        assert!(
            (wu - wd).norm() < 1e-10 * wu.norm(),
            "up {wu} vs down {wd}"
        );
    }

    #[test]
    fn branch_point_input_is_singular() {
        let spec = CurveSpec::zeta(c(0.2, 0.03));
        assert!(matches!(spec.w_upper(spec.z3), Err(Error::Singularity(_))));
    }

    proptest::proptest! {
        #[test]
        fn w_squares_to_the_quartic_everywhere(
            re in -4.0f64..4.0, im in -4.0f64..4.0
        ) {
            let spec = CurveSpec::zeta(c(0.18, 0.04));
            let z = c(re, im);
            // Skip points essentially on top of a branch point.
            for b in spec.branch_points() {
                if (z - b).norm() < 1e-3 {
                    return Ok(());
                }
            }
            let w = spec.w_upper(z).unwrap();
            let q = spec.quartic(z);
            proptest::prop_assert!((w * w - q).norm() < 1e-10 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn curve_spec_serializes_branch_points_as_pairs() {
        let spec = CurveSpec::new(0.2, c(0.21, 0.03));
        let text = serde_json::to_string(&spec).unwrap();
        let back: CurveSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.z3, spec.z3);
        let p = crate::curve::periods(&spec).unwrap();
        let ptext = serde_json::to_string(&p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&ptext).unwrap();
        assert_eq!(v["omega_a"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn degenerate_curve_value_from_real_axis_continuation() {
        // φ = 0, A = 8/27, z = -1: w² = -5/27, approached from above.
        let spec = CurveSpec::new(0.0, c(8.0 / 27.0, 0.0));
        let z = c(-1.0, 0.0);
        let w = spec.w_upper(z).unwrap();
        assert!((w * w - c(-5.0 / 27.0, 0.0)).norm() < 1e-12);

        // Independent oracle: continue by hand along a path above the cuts.
        let (anchor, w0) = spec.anchor();
        let path = vec![anchor, anchor + c(0.0, 0.5), c(-1.0, 0.5), z];
        let oracle = continue_along(&spec, &path, w0).unwrap();
        assert!((w - oracle).norm() < 1e-12, "w = {w}, oracle = {oracle}");
    }
}
