//! Steiner symmetrization of polygons and polyhedra.
//!
//! Along every line parallel to `θ` the chord of `P` is replaced by the
//! centred chord of the same length. Writing `u(y)` and `ℓ(y)` for the top and
//! bottom of the chord over `y ∈ θ^⊥`, the half-width `(u - ℓ)/2` is concave and
//! piecewise affine over the overlay of the projected upper and lower facet
//! complexes. The symmetral is therefore the hull of `(y, ±(u - ℓ)(y)/2)` over
//! the overlay's vertices, which are projected vertices and crossings of
//! projected edges.

use super::polytope::{convex_hull, dot, plane_basis, Polytope};
use crate::error::{Error, Result};

/// Chord `[ℓ, u]` of `p` along the line `base + λ θ`, if non-empty.
fn chord(p: &Polytope, base: &[f64], theta: &[f64]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in p.facets() {
        let a = dot(&f.normal, theta);
        let b = f.offset - dot(&f.normal, base);
        if a > 1e-14 {
            hi = hi.min(b / a);
        } else if a < -1e-14 {
            lo = lo.max(b / a);
        }
    }
    (lo.is_finite() && hi.is_finite()).then_some((lo, hi))
}

pub fn steiner_symmetrize(p: &Polytope, theta: &[f64]) -> Result<Polytope> {
    let d = p.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!("Steiner symmetrization in R^{d}")));
    }
    crate::error::check_dim(d, theta.len())?;
    if !p.is_full_dimensional() {
        return Err(Error::InvalidParameter(
            "Steiner symmetrization of a degenerate polytope".into(),
        ));
    }
    let len = dot(theta, theta).sqrt();
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("direction has norm {len}, expected 1")));
    }
    let frame = orthonormal_complement(theta);

    let project = |v: &[f64]| -> Vec<f64> { frame.iter().map(|e| dot(e, v)).collect() };
    let lift = |y: &[f64], lambda: f64| -> Vec<f64> {
        (0..d)
            .map(|k| {
                frame
                    .iter()
                    .zip(y)
                    .map(|(e, yk)| e[k] * yk)
                    .sum::<f64>()
                    + lambda * theta[k]
            })
            .collect()
    };

    let mut bases: Vec<Vec<f64>> = p.vertices().iter().map(|v| project(v)).collect();
    if d == 3 {
        let segs: Vec<(Vec<f64>, Vec<f64>)> = p
            .edges()
            .into_iter()
            .map(|(a, b)| (bases[a].clone(), bases[b].clone()))
            .collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if let Some(x) = segment_crossing(&segs[i], &segs[j]) {
                    bases.push(x);
                }
            }
        }
    }

    let mut out: Vec<Vec<f64>> = Vec::with_capacity(2 * bases.len());
    for y in &bases {
        let origin = lift(y, 0.0);
        if let Some((lo, hi)) = chord(p, &origin, theta) {
            let half = 0.5 * (hi - lo).max(0.0);
            out.push(lift(y, half));
            out.push(lift(y, -half));
        }
    }
    convex_hull(&out, d)
}

/// Orthonormal basis of `θ^⊥`.
pub(crate) fn orthonormal_complement(theta: &[f64]) -> Vec<Vec<f64>> {
    match theta.len() {
        1 => Vec::new(),
        2 => vec![vec![-theta[1], theta[0]]],
        _ => {
            let (u, w) = plane_basis(&[theta[0], theta[1], theta[2]]);
            vec![u.to_vec(), w.to_vec()]
        }
    }
}

/// Proper crossing point of two planar segments.
fn segment_crossing(s: &(Vec<f64>, Vec<f64>), t: &(Vec<f64>, Vec<f64>)) -> Option<Vec<f64>> {
    let (p, r) = (&s.0, [s.1[0] - s.0[0], s.1[1] - s.0[1]]);
    let (q, w) = (&t.0, [t.1[0] - t.0[0], t.1[1] - t.0[1]]);
    let denom = r[0] * w[1] - r[1] * w[0];
    let scale = (r[0].hypot(r[1]) * w[0].hypot(w[1])).max(f64::MIN_POSITIVE);
    if denom.abs() <= 1e-12 * scale {
        return None;
    }
    let qp = [q[0] - p[0], q[1] - p[1]];
    let a = (qp[0] * w[1] - qp[1] * w[0]) / denom;
    let b = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    let inside = |x: f64| (1e-12..=1.0 - 1e-12).contains(&x);
    (inside(a) && inside(b)).then(|| vec![p[0] + a * r[0], p[1] + a * r[1]])
}
