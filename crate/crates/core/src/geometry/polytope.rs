use serde::{Deserialize, Serialize};

use super::hull::{self, Hull3};
use crate::error::{Error, Result};

/// Membership slack used by [`Polytope::contains`] callers that do not care.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A supporting half-space `normal · x <= offset` of a full-dimensional polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Indices into [`Polytope::vertices`].
    pub vertices: Vec<usize>,
}

/// Affine subspace carrying a lower-dimensional polytope.
#[derive(Clone, Debug, PartialEq)]
struct Flat {
    origin: Vec<f64>,
    /// Orthonormal directions spanning the affine hull.
    basis: Vec<Vec<f64>>,
    inner: Polytope,
}

/// Convex polytope in V-representation with cached facets.
///
/// Stored vertices are the extreme points of the hull of whatever was passed
/// to [`convex_hull`]. Lower-dimensional inputs keep their vertices and carry
/// the hull of their affine span, so membership still works; their volume is 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeRepr", into = "PolytopeRepr")]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    affine_dim: usize,
    flat: Option<Box<Flat>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<PolytopeRepr> for Polytope {
    type Error = Error;

    fn try_from(r: PolytopeRepr) -> Result<Self> {
        if r.vertices.is_empty() {
            return Err(Error::Parse("polytope needs at least one vertex".into()));
        }
        convex_hull(&r.vertices, r.dim)
    }
}

impl From<Polytope> for PolytopeRepr {
    fn from(p: Polytope) -> Self {
        Self {
            dim: p.dim,
            vertices: p.vertices,
        }
    }
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Facets of a full-dimensional polytope; empty for degenerate ones.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Dimension of the affine hull of the vertices.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn volume(&self) -> f64 {
        volume(self)
    }

    /// Closed membership with absolute slack `tol`.
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        debug_assert_eq!(p.len(), self.dim);
        if let Some(flat) = &self.flat {
            let d: Vec<f64> = p.iter().zip(&flat.origin).map(|(a, b)| a - b).collect();
            let coords: Vec<f64> = flat.basis.iter().map(|b| dot(b, &d)).collect();
            let mut residual = d.clone();
            for (c, b) in coords.iter().zip(&flat.basis) {
                for (r, bk) in residual.iter_mut().zip(b) {
                    *r -= c * bk;
                }
            }
            return dot(&residual, &residual).sqrt() <= tol && flat.inner.contains(&coords, tol);
        }
        if self.affine_dim == 0 {
            let v = &self.vertices[0];
            return p
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                <= tol;
        }
        self.facets
            .iter()
            .all(|f| dot(&f.normal, p) - f.offset <= tol)
    }

    /// Signed distance to the boundary: negative inside, positive outside.
    /// Only meaningful for full-dimensional polytopes.
    pub fn boundary_distance(&self, p: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| dot(&f.normal, p) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Centroid of the vertex set (not of the volume).
    pub fn vertex_centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for (ck, vk) in c.iter_mut().zip(v) {
                *ck += vk;
            }
        }
        let k = self.vertices.len().max(1) as f64;
        c.iter_mut().for_each(|x| *x /= k);
        c
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Edges as vertex index pairs (the triangulation edges for d = 3).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        match self.dim {
            1 => {
                if self.vertices.len() == 2 {
                    out.push((0, 1));
                }
            }
            _ => {
                if self.facets.is_empty() {
                    let k = self.vertices.len();
                    if k == 2 {
                        out.push((0, 1));
                    } else if k > 2 {
                        for i in 0..k {
                            out.push((i.min((i + 1) % k), i.max((i + 1) % k)));
                        }
                    }
                } else {
                    for f in &self.facets {
                        let m = f.vertices.len();
                        for i in 0..m {
                            let (a, b) = (f.vertices[i], f.vertices[(i + 1) % m]);
                            if m == 2 && i == 1 {
                                break;
                            }
                            out.push((a.min(b), a.max(b)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Convex hull of points in `R^d`, `d <= 3`.
///
/// Deterministic under any permutation of `points`.
pub fn convex_hull(points: &[Vec<f64>], d: usize) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("convex hull of no points".into()));
    }
    if d == 0 || d > 3 {
        return Err(Error::Unsupported(format!(
            "exact convex hull in dimension {d} (supported: 1..=3)"
        )));
    }
    for p in points {
        crate::error::check_dim(d, p.len())?;
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
    }
    Ok(match d {
        1 => hull1(points),
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            polygon_from_ring(&pts, &hull::hull2_indices(&pts))
        }
        _ => {
            let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
            polyhedron(&pts)
        }
    })
}

fn hull1(points: &[Vec<f64>]) -> Polytope {
    let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    if hi - lo <= hull::ORIENT_EPS * scale {
        return Polytope {
            dim: 1,
            vertices: vec![vec![lo]],
            facets: Vec::new(),
            affine_dim: 0,
            flat: None,
        };
    }
    Polytope {
        dim: 1,
        vertices: vec![vec![lo], vec![hi]],
        facets: vec![
            Facet {
                normal: vec![-1.0],
                offset: -lo,
                vertices: vec![0],
            },
            Facet {
                normal: vec![1.0],
                offset: hi,
                vertices: vec![1],
            },
        ],
        affine_dim: 1,
        flat: None,
    }
}

fn point_polytope(dim: usize, p: Vec<f64>) -> Polytope {
    Polytope {
        dim,
        vertices: vec![p],
        facets: Vec::new(),
        affine_dim: 0,
        flat: None,
    }
}

fn segment_polytope(a: Vec<f64>, b: Vec<f64>) -> Polytope {
    let dim = a.len();
    let dir: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
    let len = dot(&dir, &dir).sqrt();
    let unit: Vec<f64> = dir.iter().map(|x| x / len).collect();
    let inner = hull1(&[vec![0.0], vec![len]]);
    Polytope {
        dim,
        vertices: vec![a.clone(), b],
        facets: Vec::new(),
        affine_dim: 1,
        flat: Some(Box::new(Flat {
            origin: a,
            basis: vec![unit],
            inner,
        })),
    }
}

fn polygon_from_ring(pts: &[[f64; 2]], ring: &[usize]) -> Polytope {
    match ring.len() {
        1 => point_polytope(2, pts[ring[0]].to_vec()),
        2 => segment_polytope(pts[ring[0]].to_vec(), pts[ring[1]].to_vec()),
        k => {
            let vertices: Vec<Vec<f64>> = ring.iter().map(|&i| pts[i].to_vec()).collect();
            let facets = (0..k)
                .map(|i| {
                    let j = (i + 1) % k;
                    let (p, q) = (&vertices[i], &vertices[j]);
                    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                    let len = dx.hypot(dy);
                    let normal = vec![dy / len, -dx / len];
                    let offset = normal[0] * p[0] + normal[1] * p[1];
                    Facet {
                        normal,
                        offset,
                        vertices: vec![i, j],
                    }
                })
                .collect();
            Polytope {
                dim: 2,
                vertices,
                facets,
                affine_dim: 2,
                flat: None,
            }
        }
    }
}

fn polyhedron(pts: &[[f64; 3]]) -> Polytope {
    match hull::hull3(pts) {
        Hull3::Empty => unreachable!("non-empty input"),
        Hull3::Point(i) => point_polytope(3, pts[i].to_vec()),
        Hull3::Segment(i, j) => segment_polytope(pts[i].to_vec(), pts[j].to_vec()),
        Hull3::Planar { ring, normal } => {
            let origin = pts[ring[0]];
            let (u, w) = plane_basis(&normal);
            let flat_pts: Vec<[f64; 2]> = ring
                .iter()
                .map(|&i| {
                    let d = hull::sub3(&pts[i], &origin);
                    [hull::dot3(&u, &d), hull::dot3(&w, &d)]
                })
                .collect();
            let order: Vec<usize> = (0..ring.len()).collect();
            let inner = polygon_from_ring(&flat_pts, &order);
            Polytope {
                dim: 3,
                vertices: ring.iter().map(|&i| pts[i].to_vec()).collect(),
                facets: Vec::new(),
                affine_dim: 2,
                flat: Some(Box::new(Flat {
                    origin: origin.to_vec(),
                    basis: vec![u.to_vec(), w.to_vec()],
                    inner,
                })),
            }
        }
        Hull3::Solid { faces } => {
            let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            let local = |g: usize| used.binary_search(&g).expect("face vertex");
            let vertices: Vec<Vec<f64>> = used.iter().map(|&i| pts[i].to_vec()).collect();
            let facets = faces
                .iter()
                .map(|f| {
                    let (a, b, c) = (&pts[f[0]], &pts[f[1]], &pts[f[2]]);
                    let n = hull::cross3(&hull::sub3(b, a), &hull::sub3(c, a));
                    let len = hull::norm3(&n);
                    let normal = vec![n[0] / len, n[1] / len, n[2] / len];
                    let offset = normal[0] * a[0] + normal[1] * a[1] + normal[2] * a[2];
                    Facet {
                        normal,
                        offset,
                        vertices: vec![local(f[0]), local(f[1]), local(f[2])],
                    }
                })
                .collect();
            Polytope {
                dim: 3,
                vertices,
                facets,
                affine_dim: 3,
                flat: None,
            }
        }
    }
}

/// Orthonormal pair spanning the plane orthogonal to `n` (unit), oriented so
/// that `u x w = n`.
pub(crate) fn plane_basis(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        [1.0, 0.0, 0.0]
    } else if n[1].abs() <= n[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let u = hull::cross3(&pick, n);
    let len = hull::norm3(&u);
    let u = [u[0] / len, u[1] / len, u[2] / len];
    let w = hull::cross3(n, &u);
    (u, w)
}

/// Lebesgue volume in the ambient dimension; 0 for degenerate polytopes.
pub fn volume(p: &Polytope) -> f64 {
    if !p.is_full_dimensional() {
        return 0.0;
    }
    match p.dim {
        1 => p.vertices[1][0] - p.vertices[0][0],
        2 => {
            let v = &p.vertices;
            let k = v.len();
            let mut twice = 0.0;
            for i in 0..k {
                let j = (i + 1) % k;
                twice += (v[i][0] - v[0][0]) * (v[j][1] - v[0][1])
                    - (v[j][0] - v[0][0]) * (v[i][1] - v[0][1]);
            }
            0.5 * twice.abs()
        }
        _ => {
            let c = p.vertex_centroid();
            let c = [c[0], c[1], c[2]];
            let mut six = 0.0;
            for f in &p.facets {
                let a = to3(&p.vertices[f.vertices[0]]);
                let b = to3(&p.vertices[f.vertices[1]]);
                let d = to3(&p.vertices[f.vertices[2]]);
                let (a, b, d) = (hull::sub3(&a, &c), hull::sub3(&b, &c), hull::sub3(&d, &c));
                six += hull::dot3(&a, &hull::cross3(&b, &d));
            }
            (six / 6.0).abs()
        }
    }
}

fn to3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_center() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ]
    }

    #[test]
    fn unit_square_plus_center() {
        let p = convex_hull(&square_with_center(), 2).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!((p.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![0.5, 1.0]];
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.affine_dim(), 1);
        assert_eq!(p.volume(), 0.0);
        assert!(p.contains(&[0.25, 0.5], 1e-12));
        assert!(!p.contains(&[0.25, 0.6], 1e-12));
        assert!(!p.contains(&[1.5, 3.0], 1e-12));
    }

    #[test]
    fn unit_cube_volume() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]);
        }
        let p = convex_hull(&pts, 3).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert!((p.volume() - 1.0).abs() < 1e-14);
        assert!(p.contains(&[0.5, 0.5, 0.5], 0.0));
        assert!(!p.contains(&[0.5, 0.5, 1.001], 1e-9));
    }

    #[test]
    fn segment_in_plane_has_zero_area() {
        let p = convex_hull(&[vec![0.0, 0.0], vec![1.0, 1.0]], 2).unwrap();
        assert_eq!(p.volume(), 0.0);
    }

    #[test]
    fn triangle_simplex_area() {
        let p = convex_hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], 2).unwrap();
        assert!((p.volume() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn planar_polytope_in_space() {
        let pts = vec![
            vec![0.0, 0.0, 2.0],
            vec![1.0, 0.0, 2.0],
            vec![0.0, 1.0, 2.0],
        ];
        let p = convex_hull(&pts, 3).unwrap();
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(p.volume(), 0.0);
        assert!(p.contains(&[0.2, 0.2, 2.0], 1e-12));
        assert!(!p.contains(&[0.2, 0.2, 2.1], 1e-12));
        assert!(!p.contains(&[0.8, 0.8, 2.0], 1e-12));
    }

    #[test]
    fn dimension_four_is_rejected() {
        let err = convex_hull(&[vec![0.0; 4]], 4).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn json_round_trip_recomputes_hull() {
        let p = convex_hull(&square_with_center(), 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: Polytope = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
