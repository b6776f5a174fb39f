//! Branch points of w² = z⁴ + 4e^{iφ}z³ + 4e^{2iφ}z² + 4e^{3iφ}Az.
//!
//! Dividing out the root at z = 0 and substituting z = e^{iφ}ζ reduces
//! everything to the φ-independent cubic ζ³ + 4ζ² + 4ζ + 4A, whose zeros
//! ζ₅, ζ₃, ζ₁ are ordered by increasing real part.  The ordering is strict
//! exactly when A lies in D₀ = C \ ({c ≤ 0} ∪ {c ≥ 8/27}).

use crate::num::{c, cis, C};

/// Near-degeneracy threshold for the real-part tie-break.
const TIE_TOL: f64 = 1e-10;

/// Zeros (ζ₁, ζ₃, ζ₅) of ζ³ + 4ζ² + 4ζ + 4A with Re ζ₅ ≤ Re ζ₃ ≤ Re ζ₁.
///
/// Ties in the real part (within 1e-10) are broken by increasing imaginary
/// part so that labels stay deterministic through the coalescences at
/// A = 0 and A = 8/27.
pub fn zeta_roots(a: C) -> (C, C, C) {
    let mut roots = zeta_cubic(a);
    roots.sort_by(|x, y| {
        if (x.re - y.re).abs() < TIE_TOL {
            x.im.partial_cmp(&y.im).unwrap()
        } else {
            x.re.partial_cmp(&y.re).unwrap()
        }
    });
    // roots[0] has the smallest real part: that is ζ₅.
    (roots[2], roots[1], roots[0])
}

/// Zeros (z₁, z₃, z₅) of z³ + 4e^{iφ}z² + 4e^{2iφ}z + 4e^{3iφ}A, ordered by
/// Re e^{-iφ}z₅ ≤ Re e^{-iφ}z₃ ≤ Re e^{-iφ}z₁.
pub fn cubic_roots(phi: f64, a: C) -> (C, C, C) {
    let (z1, z3, z5) = zeta_roots(a);
    let rot = cis(phi);
    (z1 * rot, z3 * rot, z5 * rot)
}

/// Roots of ζ³ + 4ζ² + 4ζ + 4A.
///
/// The substitution ζ = (4/3)(ξ − 1) reduces the cubic to the Chebyshev
/// form 4ξ³ − 3ξ = c₀ with c₀ = 1 − 27A/4, solved exactly by
/// ξ_k = cos((arccos c₀ + 2πk)/3).  The trigonometric form keeps the
/// double roots at the degeneracies A ∈ {0, 8/27} exact.
fn zeta_cubic(a: C) -> [C; 3] {
    let c0 = c(1.0, 0.0) - a * (27.0 / 4.0);
    let theta = c0.acos();
    let mut roots = [C::new(0.0, 0.0); 3];
    for (k, rt) in roots.iter_mut().enumerate() {
        let xi = ((theta + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos();
        *rt = (xi - 1.0) * (4.0 / 3.0);
    }
    // Newton polish for well-separated roots; tiny steps only, so the exact
    // double roots at the degeneracies are left untouched.
    for rt in roots.iter_mut() {
        let x = *rt;
        let f = ((x + 4.0) * x + 4.0) * x + a * 4.0;
        let df = (x * 3.0 + 8.0) * x + 4.0;
        if df.norm() > 1e-8 {
            let step = f / df;
            if step.norm() < 1e-6 * (1.0 + x.norm()) {
                *rt = x - step;
            }
        }
    }
    roots
}

/// Match `fresh` roots to `prev` labels by nearest-distance assignment.
///
/// Used by continuation: labels must follow the continuous motion of the
/// roots rather than re-sorting, which would swap them at coalescences.
pub fn match_roots(prev: (C, C, C), fresh: (C, C, C)) -> (C, C, C) {
    let p = [prev.0, prev.1, prev.2];
    let f = [fresh.0, fresh.1, fresh.2];
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let best = perms
        .iter()
        .min_by(|pa, pb| {
            let cost = |perm: &[usize; 3]| -> f64 {
                (0..3).map(|i| (p[i] - f[perm[i]]).norm()).sum()
            };
            cost(pa).partial_cmp(&cost(pb)).unwrap()
        })
        .unwrap();
    (f[best[0]], f[best[1]], f[best[2]])
}
