//! Explicit polyline representatives of the primitive cycles a and b.
//!
//! The a-cycle is an ellipse around the cut [z₅, z₃] on the upper sheet; the
//! b-cycle crosses the cuts [z₅, z₃] and [z₁, 0] once each, running between
//! the cut midpoints above the configuration on the upper sheet and back
//! below on the lower sheet.

use super::CurveSpec;
use crate::error::Result;
use crate::num::{c_vec, dist_point_segment, C, I};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleKind {
    CycleA,
    CycleB,
    Segment,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclePath {
    #[serde(with = "c_vec")]
    pub nodes: Vec<C>,
    pub kind: CycleKind,
    /// Branch selector (±1) per node; flips exactly at declared cut crossings.
    pub sheet_signs: Vec<i8>,
    /// Node indices where the path crosses a cut.
    pub crossings: Vec<usize>,
}

impl CyclePath {
    pub fn is_closed(&self) -> bool {
        self.nodes.len() >= 2
            && (self.nodes[0] - *self.nodes.last().unwrap()).norm() < 1e-12
    }

    /// Winding number of a closed path around `p`.
    pub fn winding(&self, p: C) -> f64 {
        let mut total = 0.0;
        for leg in self.nodes.windows(2) {
            let a = leg[0] - p;
            let b = leg[1] - p;
            total += (b / a).arg();
        }
        total / (2.0 * std::f64::consts::PI)
    }

    /// Minimal distance from the path nodes to `p`, skipping crossing nodes.
    pub fn clearance_from(&self, p: C) -> f64 {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.crossings.contains(i))
            .map(|(_, z)| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cycle representatives on the upper sheet of a non-degenerate curve.
pub fn build_cycles(spec: &CurveSpec) -> Result<(CyclePath, CyclePath)> {
    spec.require_nondegenerate()?;
    Ok((cycle_a(spec, 64), cycle_b(spec, 24)))
}

/// Ellipse of `n` nodes around the segment [p, q], padded by a fraction of
/// `gap` (the distance to the nearest foreign branch point).  `ccw` selects
/// the traversal sense in the plane.
fn ellipse_nodes(p: C, q: C, gap: f64, n: usize, ccw: bool) -> Vec<C> {
    let m = (p + q) * 0.5;
    let h = (q - p) * 0.5;
    let u = h / h.norm();
    let nrm = I * u;
    let pad = 0.35 * gap;
    let ra = h.norm() + pad;
    let rb = pad;
    let sgn = if ccw { 1.0 } else { -1.0 };
    (0..=n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            m + u * (ra * t.cos()) + nrm * (sgn * rb * t.sin())
        })
        .collect()
}

fn cycle_a(spec: &CurveSpec, n: usize) -> CyclePath {
    // Clockwise: matches the collapsed-segment orientation pinned by the
    // J_a(8/27) = +4i/√3 calibration.
    let (p, q) = (spec.z5, spec.z3);
    let gap = dist_point_segment(C::new(0.0, 0.0), p, q).min(dist_point_segment(spec.z1, p, q));
    let nodes = ellipse_nodes(p, q, gap, n, false);
    let len = nodes.len();
    CyclePath {
        nodes,
        kind: CycleKind::CycleA,
        sheet_signs: vec![1; len],
        crossings: vec![],
    }
}

/// The b-cycle: a loop around the gap segment [z₃, z₁], which encloses one
/// endpoint of each cut and therefore crosses [z₅, z₃] and [z₁, 0] exactly
/// once each.
fn cycle_b(spec: &CurveSpec, n: usize) -> CyclePath {
    let (p, q) = (spec.z3, spec.z1);
    let gap = dist_point_segment(C::new(0.0, 0.0), p, q).min(dist_point_segment(spec.z5, p, q));
    let nodes = ellipse_nodes(p, q, gap, n, true);
    // Sheet bookkeeping: flip at every leg that crosses a cut.
    let mut sheet_signs = Vec::with_capacity(nodes.len());
    let mut crossings = Vec::new();
    let mut sign = 1i8;
    sheet_signs.push(sign);
    for (i, leg) in nodes.windows(2).enumerate() {
        for (c0, c1) in spec.cuts() {
            if crate::num::segments_intersect(leg[0], leg[1], c0, c1) {
                sign = -sign;
                crossings.push(i + 1);
                break;
            }
        }
        sheet_signs.push(sign);
    }
    CyclePath {
        nodes,
        kind: CycleKind::CycleB,
        sheet_signs,
        crossings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{c, segments_intersect};

    #[test]
    fn a_cycle_winds_around_its_cut_only() {
        let spec = CurveSpec::new(-0.3, c(0.2, 0.05));
        let (a, _) = build_cycles(&spec).unwrap();
        assert!(a.is_closed());
        assert!((a.winding(spec.z3) - 1.0).abs() < 1e-9 || (a.winding(spec.z3) + 1.0).abs() < 1e-9);
        assert!((a.winding(spec.z5) - a.winding(spec.z3)).abs() < 1e-9);
        assert!(a.winding(spec.z1).abs() < 1e-9);
        assert!(a.winding(c(0.0, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn b_cycle_crosses_each_cut_once() {
        let spec = CurveSpec::new(0.2, c(0.19, -0.04));
        let (_, b) = build_cycles(&spec).unwrap();
        assert!(b.is_closed());
        let count_crossings = |c0: C, c1: C| {
            b.nodes
                .windows(2)
                .filter(|leg| segments_intersect(leg[0], leg[1], c0, c1))
                .count()
        };
        assert_eq!(count_crossings(spec.z5, spec.z3), 1);
        assert_eq!(count_crossings(spec.z1, c(0.0, 0.0)), 1);
        // Sheet signs flip exactly twice around the loop.
        assert_eq!(b.crossings.len(), 2);
        assert_eq!(b.sheet_signs[0], *b.sheet_signs.last().unwrap());
    }

    #[test]
    fn degenerate_curve_is_rejected() {
        let spec = CurveSpec::new(std::f64::consts::FRAC_PI_4, c(0.0, 0.0));
        assert!(build_cycles(&spec).is_err());
    }
}
