use serde::{Deserialize, Serialize};

use super::hull::{self, Hull3, Normalizer};
use super::polytope::{convex_hull, dot, Polytope};
use crate::error::{check_dim, Error, Result};
use crate::numeric;

/// One affine piece `x ↦ gradient · x + offset` of an upper envelope, valid on
/// the simplex spanned by `simplex` (n + 1 base points).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCell {
    pub simplex: Vec<Vec<f64>>,
    pub gradient: Vec<f64>,
    pub offset: f64,
}

impl EnvelopeCell {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.gradient, x) + self.offset
    }

    /// Lebesgue measure of the cell in the base space.
    pub fn measure(&self) -> f64 {
        match self.simplex.len() {
            2 => (self.simplex[1][0] - self.simplex[0][0]).abs(),
            3 => triangle_area(&self.simplex[0], &self.simplex[1], &self.simplex[2]),
            _ => 0.0,
        }
    }

    /// Whether `x` lies in the closed cell, with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self.simplex.len() {
            2 => {
                let (a, b) = (self.simplex[0][0], self.simplex[1][0]);
                x[0] >= a.min(b) - tol && x[0] <= a.max(b) + tol
            }
            3 => {
                let (a, b, c) = (&self.simplex[0], &self.simplex[1], &self.simplex[2]);
                let p = [x[0], x[1]];
                let s = signed_area(a, b, c).signum();
                [(a, b), (b, c), (c, a)].iter().all(|(u, v)| {
                    let len = ((v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2)).sqrt();
                    s * signed_area(u, v, &p) * 2.0 >= -tol * len
                })
            }
            _ => false,
        }
    }
}

fn signed_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    signed_area(a, b, c).abs()
}

/// Upper envelope of a collinear base in the plane, parametrised along the line.
#[derive(Clone, Debug, PartialEq)]
struct LineChain {
    origin: Vec<f64>,
    direction: Vec<f64>,
    /// `(t, height)` breakpoints, increasing in `t`.
    knots: Vec<(f64, f64)>,
}

impl LineChain {
    fn eval(&self, x: &[f64], tol: f64) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let t = dot(&d, &self.direction);
        let off = d
            .iter()
            .zip(&self.direction)
            .map(|(dk, uk)| (dk - t * uk).powi(2))
            .sum::<f64>()
            .sqrt();
        if off > tol {
            return f64::NEG_INFINITY;
        }
        interpolate_knots(&self.knots, t, tol)
    }
}

fn interpolate_knots(knots: &[(f64, f64)], t: f64, tol: f64) -> f64 {
    let (t0, h0) = knots[0];
    let (tn, hn) = knots[knots.len() - 1];
    if t < t0 - tol || t > tn + tol {
        return f64::NEG_INFINITY;
    }
    if t <= t0 {
        return h0;
    }
    if t >= tn {
        return hn;
    }
    let k = knots.partition_point(|&(tk, _)| tk <= t).clamp(1, knots.len() - 1);
    let (ta, ha) = knots[k - 1];
    let (tb, hb) = knots[k];
    ha + (hb - ha) * (t - ta) / (tb - ta)
}

/// Least concave majorant of finitely many lifted points `(x_i, h_i)` in
/// `R^n × R`, `n ∈ {1, 2}`, restricted to `conv{x_i}`.
///
/// Evaluation returns `-∞` off the support. On the support the envelope equals
/// both the maximum over cells containing `x` and the minimum over all cell
/// planes; the latter is what [`UpperEnvelope::eval`] uses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnvelopeRepr", into = "EnvelopeRepr")]
pub struct UpperEnvelope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<EnvelopeCell>,
    support: Polytope,
    chain: Option<LineChain>,
    tol: f64,
}

#[derive(Serialize, Deserialize)]
struct EnvelopeRepr {
    dim: usize,
    /// Lifted generating points `(x..., height)`.
    vertices: Vec<Vec<f64>>,
    /// Output only; recomputed from `vertices` when reading.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cells: Vec<EnvelopeCell>,
}

impl TryFrom<EnvelopeRepr> for UpperEnvelope {
    type Error = Error;

    fn try_from(r: EnvelopeRepr) -> Result<Self> {
        upper_envelope(&r.vertices, r.dim)
    }
}

impl From<UpperEnvelope> for EnvelopeRepr {
    fn from(e: UpperEnvelope) -> Self {
        Self {
            dim: e.dim,
            vertices: e.vertices,
            cells: e.cells,
        }
    }
}

impl UpperEnvelope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme lifted points; these generate the hypograph.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[EnvelopeCell] {
        &self.cells
    }

    /// `conv{x_i}` in the base space.
    pub fn support(&self) -> &Polytope {
        &self.support
    }

    /// True when the support has zero Lebesgue measure.
    pub fn is_degenerate(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_height(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[self.dim])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support_measure(&self) -> f64 {
        self.cells.iter().map(EnvelopeCell::measure).sum()
    }

    /// Envelope value at `x`, `-∞` outside the support.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        if let Some(chain) = &self.chain {
            return chain.eval(x, self.tol);
        }
        if self.cells.is_empty() {
            // single point
            let v = &self.vertices[0];
            let d2: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            return if d2.sqrt() <= self.tol {
                v[self.dim]
            } else {
                f64::NEG_INFINITY
            };
        }
        if !self.support.contains(x, self.tol) {
            return f64::NEG_INFINITY;
        }
        self.cells
            .iter()
            .map(|c| c.eval(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Maximum over the cells containing `x` (the cell-wise definition).
    pub fn eval_by_cells(&self, x: &[f64]) -> f64 {
        if self.cells.is_empty() {
            return self.eval(x);
        }
        self.cells
            .iter()
            .filter(|c| c.contains(x, self.tol))
            .map(|c| c.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `∫ exp(envelope)` over the support.
    pub fn integral_exp(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| match self.dim {
                1 => {
                    let (a, b) = (c.simplex[0][0], c.simplex[1][0]);
                    numeric::integrate_exp_affine_segment(a.min(b), a.max(b), c.gradient[0], c.offset)
                }
                _ => {
                    let l = [c.eval(&c.simplex[0]), c.eval(&c.simplex[1]), c.eval(&c.simplex[2])];
                    numeric::integrate_exp_affine_triangle(c.measure(), l)
                }
            })
            .sum()
    }

    /// `∫ (envelope)_+^k` over the support; used for `s`-concave bodies whose
    /// radius profile is this envelope.
    pub fn integral_power(&self, k: u32) -> f64 {
        self.cells
            .iter()
            .map(|c| {
                let r: Vec<f64> = c.simplex.iter().map(|p| c.eval(p).max(0.0)).collect();
                match self.dim {
                    1 => numeric::integrate_affine_power_segment(c.measure(), r[0], r[1], k),
                    _ => numeric::integrate_affine_power_triangle(c.measure(), [r[0], r[1], r[2]], k),
                }
            })
            .sum()
    }

    /// Measure of `{x : envelope(x) > level}`.
    pub fn superlevel_measure(&self, level: f64) -> f64 {
        self.cells
            .iter()
            .map(|c| {
                let vals: Vec<f64> = c.simplex.iter().map(|p| c.eval(p) - level).collect();
                match self.dim {
                    1 => {
                        let len = c.measure();
                        let (a, b) = (vals[0], vals[1]);
                        if a > 0.0 && b > 0.0 {
                            len
                        } else if a <= 0.0 && b <= 0.0 {
                            0.0
                        } else {
                            len * a.max(b) / (a - b).abs()
                        }
                    }
                    _ => clipped_triangle_area(&c.simplex, &vals),
                }
            })
            .sum()
    }

    /// Tolerance used for support membership.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }
}

/// Area of the part of a triangle where the affine function with vertex
/// values `vals` is positive.
fn clipped_triangle_area(tri: &[Vec<f64>], vals: &[f64]) -> f64 {
    let mut poly: Vec<[f64; 2]> = Vec::with_capacity(4);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (p, q) = (&tri[i], &tri[j]);
        let (a, b) = (vals[i], vals[j]);
        if a > 0.0 {
            poly.push([p[0], p[1]]);
        }
        if (a > 0.0) != (b > 0.0) {
            let t = a / (a - b);
            poly.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    if poly.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        twice += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1];
    }
    0.5 * twice.abs()
}

/// Upper envelope (least concave majorant) of lifted points `(x_i, h_i)`.
///
/// Degenerate bases (a single point, or collinear points for `n = 2`) give an
/// envelope with zero-measure support and zero integral rather than an error.
pub fn upper_envelope(lifted: &[Vec<f64>], n: usize) -> Result<UpperEnvelope> {
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("upper envelope over R^{n}")));
    }
    if lifted.is_empty() {
        return Err(Error::InvalidParameter("upper envelope of no points".into()));
    }
    for p in lifted {
        check_dim(n + 1, p.len())?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite lifted point".into()));
        }
    }
    let scale = lifted
        .iter()
        .flat_map(|p| p[..n].iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    match n {
        1 => Ok(envelope_1d(lifted, tol)),
        _ => envelope_2d(lifted, tol),
    }
}

fn envelope_1d(lifted: &[Vec<f64>], tol: f64) -> UpperEnvelope {
    let pts: Vec<[f64; 2]> = lifted.iter().map(|p| [p[0], p[1]]).collect();
    let chain = hull::upper_chain_indices(&pts);
    let vertices: Vec<Vec<f64>> = chain.iter().map(|&i| pts[i].to_vec()).collect();
    let cells: Vec<EnvelopeCell> = vertices
        .windows(2)
        .map(|w| {
            let g = (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]);
            EnvelopeCell {
                simplex: vec![vec![w[0][0]], vec![w[1][0]]],
                gradient: vec![g],
                offset: w[0][1] - g * w[0][0],
            }
        })
        .collect();
    let base: Vec<Vec<f64>> = vertices.iter().map(|v| vec![v[0]]).collect();
    let support = convex_hull(&base, 1).expect("1-d hull");
    UpperEnvelope {
        dim: 1,
        vertices,
        cells,
        support,
        chain: None,
        tol,
    }
}

fn envelope_2d(lifted: &[Vec<f64>], tol: f64) -> Result<UpperEnvelope> {
    let pts: Vec<[f64; 3]> = lifted.iter().map(|p| [p[0], p[1], p[2]]).collect();
    let norm = Normalizer::fit(&pts);
    match hull::hull3(&pts) {
        Hull3::Empty => unreachable!("non-empty input"),
        Hull3::Point(i) => Ok(point_envelope(pts[i].to_vec(), tol)),
        Hull3::Segment(i, j) => {
            let (a, b) = (&pts[i], &pts[j]);
            if (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol {
                let top = if a[2] >= b[2] { a } else { b };
                Ok(point_envelope(top.to_vec(), tol))
            } else {
                Ok(chain_envelope(&pts, &[i, j], tol))
            }
        }
        Hull3::Planar { ring, normal } => {
            let nn = unit_normal_normalized(&norm, &normal);
            if nn[2].abs() <= 1e-9 {
                let members: Vec<usize> = (0..pts.len()).collect();
                Ok(chain_envelope(&pts, &members, tol))
            } else {
                Ok(planar_envelope(&pts, &ring, tol))
            }
        }
        Hull3::Solid { faces } => Ok(solid_envelope(&pts, &norm, &faces, tol)),
    }
}

fn unit_normal_normalized(norm: &Normalizer<3>, n: &[f64; 3]) -> [f64; 3] {
    // a normal transforms with the inverse of the (diagonal) point map
    let o = norm.apply(&[0.0; 3]);
    let e = [
        norm.apply(&[1.0, 0.0, 0.0])[0] - o[0],
        norm.apply(&[0.0, 1.0, 0.0])[1] - o[1],
        norm.apply(&[0.0, 0.0, 1.0])[2] - o[2],
    ];
    let m = [n[0] / e[0], n[1] / e[1], n[2] / e[2]];
    let len = hull::norm3(&m);
    [m[0] / len, m[1] / len, m[2] / len]
}

fn point_envelope(p: Vec<f64>, tol: f64) -> UpperEnvelope {
    let base = p[..2].to_vec();
    UpperEnvelope {
        dim: 2,
        support: convex_hull(&[base], 2).expect("point hull"),
        vertices: vec![p],
        cells: Vec::new(),
        chain: None,
        tol,
    }
}

fn chain_envelope(pts: &[[f64; 3]], members: &[usize], tol: f64) -> UpperEnvelope {
    // direction of the base line through the two most distant base points
    let (mut ia, mut ib, mut best) = (members[0], members[0], -1.0);
    for &i in members {
        for &j in members {
            let d = (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
            if d > best {
                (ia, ib, best) = (i, j, d);
            }
        }
    }
    let origin = vec![pts[ia][0], pts[ia][1]];
    let direction = vec![(pts[ib][0] - pts[ia][0]) / best, (pts[ib][1] - pts[ia][1]) / best];
    let flat: Vec<[f64; 2]> = members
        .iter()
        .map(|&i| {
            let t = (pts[i][0] - origin[0]) * direction[0] + (pts[i][1] - origin[1]) * direction[1];
            [t, pts[i][2]]
        })
        .collect();
    let idx = hull::upper_chain_indices(&flat);
    let knots: Vec<(f64, f64)> = idx.iter().map(|&k| (flat[k][0], flat[k][1])).collect();
    let vertices: Vec<Vec<f64>> = idx.iter().map(|&k| pts[members[k]].to_vec()).collect();
    let base: Vec<Vec<f64>> = vertices.iter().map(|v| v[..2].to_vec()).collect();
    UpperEnvelope {
        dim: 2,
        support: convex_hull(&base, 2).expect("segment hull"),
        vertices,
        cells: Vec::new(),
        chain: Some(LineChain {
            origin,
            direction,
            knots,
        }),
        tol,
    }
}

fn plane_through(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> Option<(Vec<f64>, f64)> {
    let (dx1, dy1, dh1) = (b[0] - a[0], b[1] - a[1], b[2] - a[2]);
    let (dx2, dy2, dh2) = (c[0] - a[0], c[1] - a[1], c[2] - a[2]);
    let det = dx1 * dy2 - dx2 * dy1;
    if det == 0.0 {
        return None;
    }
    let gx = (dh1 * dy2 - dh2 * dy1) / det;
    let gy = (dx1 * dh2 - dx2 * dh1) / det;
    Some((vec![gx, gy], a[2] - gx * a[0] - gy * a[1]))
}

fn planar_envelope(pts: &[[f64; 3]], ring: &[usize], tol: f64) -> UpperEnvelope {
    let vertices: Vec<Vec<f64>> = ring.iter().map(|&i| pts[i].to_vec()).collect();
    // the three ring points spanning the largest base triangle fix the plane
    let mut best = (0, 1, 2, -1.0);
    for i in 0..ring.len() {
        for j in i + 1..ring.len() {
            for k in j + 1..ring.len() {
                let area = triangle_area(&vertices[i], &vertices[j], &vertices[k]);
                if area > best.3 {
                    best = (i, j, k, area);
                }
            }
        }
    }
    let (gradient, offset) = plane_through(
        &pts[ring[best.0]],
        &pts[ring[best.1]],
        &pts[ring[best.2]],
    )
    .expect("non-vertical plane");
    let cells = (1..ring.len() - 1)
        .map(|k| EnvelopeCell {
            simplex: vec![
                vertices[0][..2].to_vec(),
                vertices[k][..2].to_vec(),
                vertices[k + 1][..2].to_vec(),
            ],
            gradient: gradient.clone(),
            offset,
        })
        .collect();
    let base: Vec<Vec<f64>> = vertices.iter().map(|v| v[..2].to_vec()).collect();
    UpperEnvelope {
        dim: 2,
        support: convex_hull(&base, 2).expect("polygon hull"),
        vertices,
        cells,
        chain: None,
        tol,
    }
}

fn solid_envelope(
    pts: &[[f64; 3]],
    norm: &Normalizer<3>,
    faces: &[[usize; 3]],
    tol: f64,
) -> UpperEnvelope {
    let npts: Vec<[f64; 3]> = pts.iter().map(|p| norm.apply(p)).collect();
    let mut used: Vec<usize> = Vec::new();
    let mut cells: Vec<EnvelopeCell> = Vec::new();
    let base_area = {
        let base: Vec<Vec<f64>> = pts.iter().map(|p| vec![p[0], p[1]]).collect();
        convex_hull(&base, 2).map(|p| p.volume()).unwrap_or(0.0)
    };
    for f in faces {
        let n = hull::cross3(
            &hull::sub3(&npts[f[1]], &npts[f[0]]),
            &hull::sub3(&npts[f[2]], &npts[f[0]]),
        );
        let len = hull::norm3(&n);
        if len == 0.0 || n[2] / len <= 1e-9 {
            continue;
        }
        let (a, b, c) = (&pts[f[0]], &pts[f[1]], &pts[f[2]]);
        let area = triangle_area(a, b, c);
        if area <= 1e-15 * base_area {
            continue;
        }
        let Some((gradient, offset)) = plane_through(a, b, c) else {
            continue;
        };
        used.extend_from_slice(f);
        cells.push(EnvelopeCell {
            simplex: vec![a[..2].to_vec(), b[..2].to_vec(), c[..2].to_vec()],
            gradient,
            offset,
        });
    }
    used.sort_unstable();
    used.dedup();
    let vertices: Vec<Vec<f64>> = used.iter().map(|&i| pts[i].to_vec()).collect();
    let base: Vec<Vec<f64>> = vertices.iter().map(|v| v[..2].to_vec()).collect();
    UpperEnvelope {
        dim: 2,
        support: convex_hull(&base, 2).expect("polygon hull"),
        vertices,
        cells,
        chain: None,
        tol,
    }
}

/// Envelope whose hypograph is `λ·hypo(e) + (1-λ)·hypo(f)`.
///
/// The hypograph of an upper envelope is the hull of its vertices plus the
/// downward ray, so the weighted Minkowski combination is the upper envelope of
/// all pairwise combinations of vertices.
pub fn minkowski_combine(e: &UpperEnvelope, f: &UpperEnvelope, lambda: f64) -> Result<UpperEnvelope> {
    check_dim(e.dim, f.dim)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} not in (0, 1)")));
    }
    let mut pts = Vec::with_capacity(e.vertices.len() * f.vertices.len());
    for v in &e.vertices {
        for w in &f.vertices {
            pts.push(
                v.iter()
                    .zip(w)
                    .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                    .collect::<Vec<f64>>(),
            );
        }
    }
    upper_envelope(&pts, e.dim)
}
