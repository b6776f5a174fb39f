//! Small numeric helpers: complex shorthand, serde encoding of complex
//! numbers as `[re, im]` pairs, and least-squares line fits.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Shorthand used throughout the crate.
pub type C = Complex64;

/// `C::new` with less noise at call sites.
#[inline]
pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// e^{iθ} for real θ.
#[inline]
pub fn cis(theta: f64) -> C {
    C::new(theta.cos(), theta.sin())
}

pub const I: C = C::new(0.0, 1.0);

/// Serialize a complex number as the two-element array `[re, im]`.
pub fn serialize_c<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub fn deserialize_c<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(d)?;
    Ok(C::new(re, im))
}

/// Serde adapter for `Vec<Complex64>` as `[[re, im], ...]`.
pub mod c_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C::new(re, im)).collect())
    }
}

/// Least-squares fit of y = a + b·x; returns (a, b).
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "line_fit needs at least two points");
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    let b = (n * sxy - sx * sy) / det;
    let a = (sy - b * sx) / n;
    (a, b)
}

/// Distance from point `p` to the segment `[a, b]`.
pub fn dist_point_segment(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Minimal distance between segments `[a1, b1]` and `[a2, b2]`.
pub fn dist_segment_segment(a1: C, b1: C, a2: C, b2: C) -> f64 {
    if segments_intersect(a1, b1, a2, b2) {
        return 0.0;
    }
    dist_point_segment(a1, a2, b2)
        .min(dist_point_segment(b1, a2, b2))
        .min(dist_point_segment(a2, a1, b1))
        .min(dist_point_segment(b2, a1, b1))
}

fn orient(a: C, b: C, p: C) -> f64 {
    (b.re - a.re) * (p.im - a.im) - (b.im - a.im) * (p.re - a.re)
}

/// Proper or touching intersection of two closed segments.
pub fn segments_intersect(a1: C, b1: C, a2: C, b2: C) -> bool {
    let d1 = orient(a2, b2, a1);
    let d2 = orient(a2, b2, b1);
    let d3 = orient(a1, b1, a2);
    let d4 = orient(a1, b1, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: C, b: C, p: C, d: f64| {
        d == 0.0
            && p.re >= a.re.min(b.re)
            && p.re <= a.re.max(b.re)
            && p.im >= a.im.min(b.im)
            && p.im <= a.im.max(b.im)
    };
    on(a2, b2, a1, d1) || on(a2, b2, b1, d2) || on(a1, b1, a2, d3) || on(a1, b1, b2, d4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.15 * x).collect();
        let (a, b) = line_fit(&xs, &ys);
        assert!((a - 2.5).abs() < 1e-12 && (b + 0.15).abs() < 1e-12);
    }

    #[test]
    fn segment_geometry() {
        let o = c(0.0, 0.0);
        assert!(segments_intersect(c(-1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(1.0, -1.0)));
        assert!(!segments_intersect(c(0.0, 1.0), c(1.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)));
        assert!((dist_point_segment(c(0.0, 1.0), o, c(2.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_serde_round_trip() {
        #[derive(Serialize, Deserialize)]
        struct P {
            #[serde(serialize_with = "serialize_c", deserialize_with = "deserialize_c")]
            z: C,
        }
        let p = P { z: c(1.5, -2.25) };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"z":[1.5,-2.25]}"#);
        let back: P = serde_json::from_str(&s).unwrap();
        assert_eq!(back.z, p.z);
    }
}
