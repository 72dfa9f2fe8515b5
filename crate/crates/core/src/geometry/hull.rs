//! Low-level convex hull kernels in two and three dimensions.
//!
//! Inputs are rescaled per axis into `[-1, 1]` before any orientation test so
//! that the absolute tolerance [`ORIENT_EPS`] means the same thing for every
//! input scale. Per-axis scaling is affine, so the combinatorial hull is
//! unchanged. Points are processed in lexicographic order with the input index
//! as the final tie-breaker, which makes the output independent of the input
//! permutation.

use std::cmp::Ordering;
use std::collections::HashSet;

pub(crate) const ORIENT_EPS: f64 = 1e-12;

/// Per-axis affine rescaling of a point cloud into `[-1, 1]^d`.
#[derive(Clone, Debug)]
pub(crate) struct Normalizer<const D: usize> {
    center: [f64; D],
    inv_scale: [f64; D],
}

impl<const D: usize> Normalizer<D> {
    pub(crate) fn fit(points: &[[f64; D]]) -> Self {
        let mut lo = [f64::INFINITY; D];
        let mut hi = [f64::NEG_INFINITY; D];
        for p in points {
            for k in 0..D {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let mut center = [0.0; D];
        let mut inv_scale = [1.0; D];
        for k in 0..D {
            if lo[k].is_finite() {
                center[k] = 0.5 * (lo[k] + hi[k]);
                let half = 0.5 * (hi[k] - lo[k]);
                if half > f64::MIN_POSITIVE * 1e10 {
                    inv_scale[k] = 1.0 / half;
                }
            }
        }
        Self { center, inv_scale }
    }

    pub(crate) fn apply(&self, p: &[f64; D]) -> [f64; D] {
        let mut out = [0.0; D];
        for k in 0..D {
            out[k] = (p[k] - self.center[k]) * self.inv_scale[k];
        }
        out
    }
}

fn lex_cmp<const D: usize>(a: &[f64; D], b: &[f64; D]) -> Ordering {
    for k in 0..D {
        match a[k].total_cmp(&b[k]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Indices sorted lexicographically by coordinate, near-duplicates removed.
fn sorted_unique<const D: usize>(pts: &[[f64; D]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| lex_cmp(&pts[i], &pts[j]).then(i.cmp(&j)));
    let mut out: Vec<usize> = Vec::with_capacity(idx.len());
    for i in idx {
        let dup = out.last().is_some_and(|&j| {
            (0..D).all(|k| (pts[i][k] - pts[j][k]).abs() <= ORIENT_EPS)
        });
        if !dup {
            out.push(i);
        }
    }
    out
}

pub(crate) fn cross2(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Extreme points of a planar point set in counter-clockwise order, starting
/// from the lexicographically smallest point. Collinear boundary points are
/// dropped. Returns one index for a single (possibly repeated) point and the
/// two endpoints for a collinear set.
pub(crate) fn hull2_indices(points: &[[f64; 2]]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let norm = Normalizer::fit(points);
    let pts: Vec<[f64; 2]> = points.iter().map(|p| norm.apply(p)).collect();
    let order = sorted_unique(&pts);
    if order.len() <= 2 {
        return order;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && cross2(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i])
                <= ORIENT_EPS
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && cross2(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i])
                <= ORIENT_EPS
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Upper chain of a planar point set, left to right: the graph of the least
/// concave majorant of the points `(x, y)`.
pub(crate) fn upper_chain_indices(points: &[[f64; 2]]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let norm = Normalizer::fit(points);
    let pts: Vec<[f64; 2]> = points.iter().map(|p| norm.apply(p)).collect();
    // left to right, and for equal abscissae the highest point first
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        pts[i][0]
            .total_cmp(&pts[j][0])
            .then(pts[j][1].total_cmp(&pts[i][1]))
            .then(i.cmp(&j))
    });
    let mut order: Vec<usize> = Vec::with_capacity(idx.len());
    for i in idx {
        let same_x = order
            .last()
            .is_some_and(|&j| (pts[i][0] - pts[j][0]).abs() <= ORIENT_EPS);
        if !same_x {
            order.push(i);
        }
    }
    let mut chain: Vec<usize> = Vec::new();
    for &i in &order {
        while chain.len() >= 2
            && cross2(&pts[chain[chain.len() - 2]], &pts[chain[chain.len() - 1]], &pts[i])
                >= -ORIENT_EPS
        {
            chain.pop();
        }
        chain.push(i);
    }
    chain
}

pub(crate) fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn unit3(a: [f64; 3]) -> [f64; 3] {
    let n = norm3(&a);
    if n > 0.0 {
        [a[0] / n, a[1] / n, a[2] / n]
    } else {
        a
    }
}

/// Result of a three-dimensional hull, indices refer to the input slice.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Hull3 {
    Empty,
    Point(usize),
    Segment(usize, usize),
    /// Coplanar input: extreme points in counter-clockwise order when seen
    /// from the side `normal` points to (normal is in original coordinates).
    Planar { ring: Vec<usize>, normal: [f64; 3] },
    /// Outward-oriented triangles.
    Solid { faces: Vec<[usize; 3]> },
}

#[derive(Clone, Debug)]
struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
}

impl Face {
    fn new(pts: &[[f64; 3]], v: [usize; 3]) -> Self {
        let normal = unit3(cross3(
            &sub3(&pts[v[1]], &pts[v[0]]),
            &sub3(&pts[v[2]], &pts[v[0]]),
        ));
        let offset = dot3(&normal, &pts[v[0]]);
        Self {
            v,
            normal,
            offset,
            alive: true,
        }
    }

    fn height(&self, p: &[f64; 3]) -> f64 {
        dot3(&self.normal, p) - self.offset
    }

    fn flip(&mut self) {
        self.v.swap(1, 2);
        self.normal = [-self.normal[0], -self.normal[1], -self.normal[2]];
        self.offset = -self.offset;
    }
}

pub(crate) fn hull3(points: &[[f64; 3]]) -> Hull3 {
    if points.is_empty() {
        return Hull3::Empty;
    }
    let norm = Normalizer::fit(points);
    let pts: Vec<[f64; 3]> = points.iter().map(|p| norm.apply(p)).collect();
    let mut candidates = sorted_unique(&pts);
    // Incremental hulls can keep a vertex that later ends up in the relative
    // interior of a flat face or edge; such vertices are pruned and the hull
    // rebuilt from the survivors.
    for _ in 0..4 {
        let hull = hull3_normalized(&pts, &candidates);
        let Hull3::Solid { faces } = &hull else {
            return finish_planar(hull, &norm);
        };
        let keep = extreme_vertices(&pts, faces);
        if keep.len() == distinct_vertices(faces).len() {
            return hull;
        }
        candidates = keep;
        candidates.sort_by(|&i, &j| lex_cmp(&pts[i], &pts[j]).then(i.cmp(&j)));
    }
    hull3_normalized(&pts, &candidates)
}

fn finish_planar(hull: Hull3, norm: &Normalizer<3>) -> Hull3 {
    match hull {
        Hull3::Planar { ring, normal } => {
            // map the normalized-space normal back to original coordinates
            let n = unit3([
                normal[0] * norm.inv_scale[0],
                normal[1] * norm.inv_scale[1],
                normal[2] * norm.inv_scale[2],
            ]);
            Hull3::Planar { ring, normal: n }
        }
        other => other,
    }
}

fn distinct_vertices(faces: &[[usize; 3]]) -> Vec<usize> {
    let mut v: Vec<usize> = faces.iter().flatten().copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// A hull vertex is extreme iff the normals of its incident faces span R^3.
fn extreme_vertices(pts: &[[f64; 3]], faces: &[[usize; 3]]) -> Vec<usize> {
    let normals: Vec<[f64; 3]> = faces
        .iter()
        .map(|f| {
            unit3(cross3(
                &sub3(&pts[f[1]], &pts[f[0]]),
                &sub3(&pts[f[2]], &pts[f[0]]),
            ))
        })
        .collect();
    distinct_vertices(faces)
        .into_iter()
        .filter(|&v| {
            let incident: Vec<&[f64; 3]> = faces
                .iter()
                .zip(&normals)
                .filter(|(f, _)| f.contains(&v))
                .map(|(_, n)| n)
                .collect();
            normals_span_space(&incident)
        })
        .collect()
}

fn normals_span_space(normals: &[&[f64; 3]]) -> bool {
    const TOL: f64 = 1e-9;
    let Some(first) = normals.first() else {
        return false;
    };
    let Some(second) = normals
        .iter()
        .find(|n| norm3(&cross3(first, n)) > TOL)
    else {
        return false;
    };
    let c = cross3(first, second);
    normals.iter().any(|n| dot3(&c, n).abs() > TOL)
}

fn hull3_normalized(pts: &[[f64; 3]], order: &[usize]) -> Hull3 {
    let Some(&i0) = order.first() else {
        return Hull3::Empty;
    };
    let farthest = |score: &dyn Fn(&[f64; 3]) -> f64| -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &i in order {
            let s = score(&pts[i]);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        best
    };

    let p0 = pts[i0];
    let (i1, d1) = farthest(&|p| norm3(&sub3(p, &p0))).unwrap();
    if d1 <= ORIENT_EPS {
        return Hull3::Point(i0);
    }
    let axis = unit3(sub3(&pts[i1], &p0));
    let (i2, d2) = farthest(&|p| norm3(&cross3(&axis, &sub3(p, &p0)))).unwrap();
    if d2 <= ORIENT_EPS {
        // collinear: extreme points along the axis
        let (lo, _) = farthest(&|p| -dot3(&axis, &sub3(p, &p0))).unwrap();
        let (hi, _) = farthest(&|p| dot3(&axis, &sub3(p, &p0))).unwrap();
        return Hull3::Segment(lo, hi);
    }
    let plane_n = unit3(cross3(&sub3(&pts[i1], &p0), &sub3(&pts[i2], &p0)));
    let (i3, d3) = farthest(&|p| dot3(&plane_n, &sub3(p, &p0)).abs()).unwrap();
    if d3 <= ORIENT_EPS {
        return planar_hull(pts, order, &p0, &axis, &plane_n);
    }

    let mut faces: Vec<Face> = vec![
        Face::new(pts, [i0, i1, i2]),
        Face::new(pts, [i0, i3, i1]),
        Face::new(pts, [i1, i3, i2]),
        Face::new(pts, [i2, i3, i0]),
    ];
    let centroid = {
        let mut c = [0.0; 3];
        for &i in &[i0, i1, i2, i3] {
            for k in 0..3 {
                c[k] += 0.25 * pts[i][k];
            }
        }
        c
    };
    for f in &mut faces {
        if f.height(&centroid) > 0.0 {
            f.flip();
        }
    }

    let seeds = [i0, i1, i2, i3];
    for &p in order {
        if seeds.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && f.height(&pts[p]) > ORIENT_EPS)
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &k in &visible {
            let v = faces[k].v;
            for e in 0..3 {
                edges.insert((v[e], v[(e + 1) % 3]));
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &k in &visible {
            let v = faces[k].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                if !edges.contains(&(b, a)) {
                    horizon.push((a, b));
                }
            }
            faces[k].alive = false;
        }
        for (a, b) in horizon {
            faces.push(Face::new(pts, [a, b, p]));
        }
    }

    Hull3::Solid {
        faces: faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect(),
    }
}

fn planar_hull(
    pts: &[[f64; 3]],
    order: &[usize],
    origin: &[f64; 3],
    axis: &[f64; 3],
    normal: &[f64; 3],
) -> Hull3 {
    let w = cross3(normal, axis);
    let flat: Vec<[f64; 2]> = order
        .iter()
        .map(|&i| {
            let d = sub3(&pts[i], origin);
            [dot3(axis, &d), dot3(&w, &d)]
        })
        .collect();
    let ring = hull2_indices(&flat)
        .into_iter()
        .map(|k| order[k])
        .collect();
    Hull3::Planar {
        ring,
        normal: *normal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_center_drops_center() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let h = hull2_indices(&pts);
        assert_eq!(h, vec![0, 1, 2, 3]);
    }

    #[test]
    fn collinear_planar_points_give_endpoints() {
        let pts = [[0.0, 0.0], [2.0, 2.0], [1.0, 1.0], [3.0, 3.0]];
        let h = hull2_indices(&pts);
        assert_eq!(h.len(), 2);
        assert!(h.contains(&0) && h.contains(&3));
    }

    #[test]
    fn upper_chain_skips_dominated_points() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [1.0, 0.2]];
        assert_eq!(upper_chain_indices(&pts), vec![0, 1, 2]);
    }

    #[test]
    fn cube_hull_has_twelve_triangles() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]);
        }
        pts.push([0.5, 0.5, 0.5]);
        pts.push([0.5, 0.5, 1.0]); // centre of the top face
        let Hull3::Solid { faces } = hull3(&pts) else {
            panic!("cube should be solid");
        };
        assert_eq!(faces.len(), 12);
        assert_eq!(distinct_vertices(&faces).len(), 8);
    }

    #[test]
    fn coplanar_points_are_planar() {
        let pts = [
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
            [0.0, 1.0, 1.0],
            [1.0, 1.0, 1.0],
            [0.3, 0.3, 1.0],
        ];
        match hull3(&pts) {
            Hull3::Planar { ring, normal } => {
                assert_eq!(ring.len(), 4);
                assert!(normal[2].abs() > 0.999);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
