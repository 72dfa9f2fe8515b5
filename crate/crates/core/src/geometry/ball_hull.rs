use serde::{Deserialize, Serialize};

use super::envelope::{upper_envelope, UpperEnvelope};
use super::polytope::{convex_hull, Polytope};
use crate::error::{check_dim, Error, Result};

/// Convex coefficient set `C` in the positive orthant of `R^N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientBody {
    /// `conv{e_1, …, e_count}`.
    Simplex { count: usize },
    /// `weights[0]·conv{e_1..e_first} + weights[1]·conv{e_{first+1}..e_{first+second}}`.
    /// With weights `(λ, 1-λ)` this is `C_N +_λ Ĉ_M`.
    Combination {
        first: usize,
        second: usize,
        weights: [f64; 2],
    },
}

impl CoefficientBody {
    pub fn lambda_sum(first: usize, second: usize, lambda: f64) -> Self {
        Self::Combination {
            first,
            second,
            weights: [lambda, 1.0 - lambda],
        }
    }

    /// Number of coordinates `N`.
    pub fn len(&self) -> usize {
        match *self {
            Self::Simplex { count } => count,
            Self::Combination { first, second, .. } => first + second,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The `C`-combination `⊕_C(B^s_{r_1}(x_1), …, B^s_{r_N}(x_N)) ⊆ R^{n+s}` of
/// `s`-dimensional balls orthogonal to `R^n`.
///
/// Because `C` lies in the positive orthant, the body equals
/// `{(Σ c_i x_i, z) : c ∈ C, |z| ≤ Σ c_i r_i}`: a body of revolution whose
/// radius over `x` is the largest `Σ c_i r_i` with `Σ c_i x_i = x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallHullBody {
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub fiber_dim: usize,
    pub coefficients: CoefficientBody,
}

impl BallHullBody {
    pub fn new(
        centers: Vec<Vec<f64>>,
        radii: Vec<f64>,
        fiber_dim: usize,
        coefficients: CoefficientBody,
    ) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("ball hull of no balls".into()));
        }
        check_dim(centers.len(), radii.len())?;
        check_dim(coefficients.len(), centers.len())?;
        let n = centers[0].len();
        for c in &centers {
            check_dim(n, c.len())?;
        }
        if radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidParameter("radii must be finite and nonnegative".into()));
        }
        if fiber_dim == 0 {
            return Err(Error::InvalidParameter("fiber dimension must be at least 1".into()));
        }
        if let CoefficientBody::Combination {
            first,
            second,
            weights,
        } = coefficients
        {
            if first == 0 || second == 0 || weights.iter().any(|w| !(*w > 0.0)) {
                return Err(Error::InvalidParameter(
                    "combination needs two non-empty simplices and positive weights".into(),
                ));
            }
        }
        Ok(Self {
            centers,
            radii,
            fiber_dim,
            coefficients,
        })
    }

    /// Convenience constructor for `conv{B^s_{r_i}(x_i)}`.
    pub fn hull_of_balls(centers: Vec<Vec<f64>>, radii: Vec<f64>, fiber_dim: usize) -> Result<Self> {
        let count = centers.len();
        Self::new(centers, radii, fiber_dim, CoefficientBody::Simplex { count })
    }

    pub fn base_dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_dim() + self.fiber_dim
    }

    /// Points `(Σ c_i x_i, Σ c_i r_i)` for the extreme points `c` of `C`.
    pub fn profile_points(&self) -> Vec<Vec<f64>> {
        let lift = |i: usize| {
            let mut p = self.centers[i].clone();
            p.push(self.radii[i]);
            p
        };
        match self.coefficients {
            CoefficientBody::Simplex { count } => (0..count).map(lift).collect(),
            CoefficientBody::Combination {
                first,
                second,
                weights,
            } => {
                let mut out = Vec::with_capacity(first * second);
                for i in 0..first {
                    let a = lift(i);
                    for j in first..first + second {
                        let b = lift(j);
                        out.push(
                            a.iter()
                                .zip(&b)
                                .map(|(u, v)| weights[0] * u + weights[1] * v)
                                .collect(),
                        );
                    }
                }
                out
            }
        }
    }

    /// Radius profile `x ↦ max{Σ c_i r_i : Σ c_i x_i = x, c ∈ C}` as an envelope.
    pub fn radius_envelope(&self) -> Result<UpperEnvelope> {
        upper_envelope(&self.profile_points(), self.base_dim())
    }

    /// For `s = 1` the body is the polytope spanned by the segment endpoints
    /// `(Σ c x, ±Σ c r)`.
    pub fn as_polytope(&self) -> Result<Polytope> {
        if self.fiber_dim != 1 {
            return Err(Error::Unsupported(format!(
                "polytope form needs fiber dimension 1, got {}",
                self.fiber_dim
            )));
        }
        let mut pts = Vec::new();
        for p in self.profile_points() {
            let n = p.len() - 1;
            let r = p[n];
            let mut up = p[..n].to_vec();
            up.push(r);
            let mut down = p[..n].to_vec();
            down.push(-r);
            pts.push(up);
            pts.push(down);
        }
        convex_hull(&pts, self.ambient_dim())
    }

    /// Largest admissible radius over `x` by enumerating basic solutions of
    /// the linear program `max Σ c_i r_i` s.t. `c ∈ C`, `Σ c_i x_i = x`.
    /// `None` when `x` is not of the form `Σ c_i x_i`.
    pub fn max_radius_lp(&self, x: &[f64]) -> Option<f64> {
        let n = self.base_dim();
        debug_assert_eq!(x.len(), n);
        // columns: one per coefficient; rows: n position rows + simplex rows
        let (groups, weights): (Vec<usize>, Vec<f64>) = match self.coefficients {
            CoefficientBody::Simplex { count } => (vec![0; count], vec![1.0]),
            CoefficientBody::Combination {
                first,
                second,
                weights,
            } => (
                (0..first + second).map(|i| usize::from(i >= first)).collect(),
                weights.to_vec(),
            ),
        };
        let n_groups = weights.len();
        let rows = n + n_groups;
        let cols = groups.len();
        let column = |j: usize| -> Vec<f64> {
            let w = weights[groups[j]];
            let mut c: Vec<f64> = self.centers[j].iter().map(|v| w * v).collect();
            for g in 0..n_groups {
                c.push(if groups[j] == g { 1.0 } else { 0.0 });
            }
            c
        };
        let cols_data: Vec<Vec<f64>> = (0..cols).map(column).collect();
        let mut rhs = x.to_vec();
        rhs.extend(std::iter::repeat_n(1.0, n_groups));
        let objective: Vec<f64> = (0..cols).map(|j| weights[groups[j]] * self.radii[j]).collect();

        let mut best: Option<f64> = None;
        let mut subset = Vec::with_capacity(rows);
        for size in 1..=rows.min(cols) {
            for_each_subset(cols, size, &mut subset, &mut |sel| {
                let a: Vec<&Vec<f64>> = sel.iter().map(|&j| &cols_data[j]).collect();
                if let Some(c) = solve_columns(&a, &rhs) {
                    if c.iter().all(|&v| v >= -1e-12) {
                        let val: f64 = sel.iter().zip(&c).map(|(&j, cj)| objective[j] * cj).sum();
                        if best.is_none_or(|b| val > b) {
                            best = Some(val);
                        }
                    }
                }
            });
        }
        best
    }

    /// Membership by the linear-feasibility characterisation.
    pub fn contains_lp(&self, p: &[f64], tol: f64) -> bool {
        let n = self.base_dim();
        let z = p[n..].iter().map(|v| v * v).sum::<f64>().sqrt();
        self.max_radius_lp(&p[..n]).is_some_and(|r| z <= r + tol)
    }

    /// Axis-aligned bounding box of the body in `R^{n+s}`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let pts = self.profile_points();
        let n = self.base_dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        let mut rmax: f64 = 0.0;
        for p in &pts {
            for k in 0..n {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
            rmax = rmax.max(p[n]);
        }
        lo.extend(std::iter::repeat_n(-rmax, self.fiber_dim));
        hi.extend(std::iter::repeat_n(rmax, self.fiber_dim));
        (lo, hi)
    }
}

fn for_each_subset(n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    cur.clear();
    rec(0, n, k, cur, f);
}

/// Solves `Σ_j c_j a_j = b` for full-column-rank `a` when the system is
/// consistent; `None` otherwise.
fn solve_columns(a: &[&Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let rows = b.len();
    let cols = a.len();
    let mut m: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            let mut r: Vec<f64> = (0..cols).map(|j| a[j][i]).collect();
            r.push(b[i]);
            r
        })
        .collect();
    let scale = m
        .iter()
        .flatten()
        .fold(1.0f64, |s, v| s.max(v.abs()));
    let tol = 1e-11 * scale;
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let (best, val) = (pivot_row..rows)
            .map(|r| (r, m[r][col].abs()))
            .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pivot_row >= rows || val <= tol {
            return None; // rank deficient: not a basic solution
        }
        m.swap(pivot_row, best);
        for r in 0..rows {
            if r != pivot_row {
                let factor = m[r][col] / m[pivot_row][col];
                if factor != 0.0 {
                    for c in col..=cols {
                        m[r][c] -= factor * m[pivot_row][c];
                    }
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    for row in m.iter().skip(pivot_row) {
        if row[cols].abs() > tol {
            return None;
        }
    }
    Some(
        (0..cols)
            .map(|j| m[pivots[j]][cols] / m[pivots[j]][j])
            .collect(),
    )
}

/// Exact volume of a ball-hull body for `n + s <= 3`.
///
/// `s = 1`: hull of the segment endpoints. `s = 2, n = 1`: body of revolution
/// `π ∫ R(x)^2 dx` over the piecewise-affine radius profile.
pub fn ball_hull_volume(body: &BallHullBody) -> Result<f64> {
    let (n, s) = (body.base_dim(), body.fiber_dim);
    match (n, s) {
        (1, 1) | (2, 1) => Ok(body.as_polytope()?.volume()),
        (1, 2) => {
            let env = body.radius_envelope()?;
            Ok(std::f64::consts::PI * env.integral_power(2))
        }
        _ => Err(Error::Unsupported(format!(
            "exact ball-hull volume for n = {n}, s = {s}; use the Monte Carlo estimator"
        ))),
    }
}
