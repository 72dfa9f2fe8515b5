//! Functions tabulated on a rotated planar grid, and Steiner symmetrization of
//! planar functions along a direction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundingBox, LogConcaveFunction};
use crate::error::{Error, Result};

/// Default number of grid lines per axis.
pub const STEINER_GRID_LINES: usize = 256;

/// A planar function tabulated at `u·φ + v·θ` with `φ = θ^⊥ = (-θ₂, θ₁)`,
/// `u = (u_start + i)·du` for `i < lines`, and `v = j·dv` for `|j| ≤ half`.
/// Values are piecewise constant on the grid cells and 0 outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    theta: [f64; 2],
    u_start: i64,
    lines: usize,
    half: usize,
    du: f64,
    dv: f64,
    values: Vec<f64>,
    #[serde(skip)]
    sorted: Vec<f64>,
}

impl GridFunction {
    fn new(theta: [f64; 2], u_start: i64, lines: usize, half: usize, du: f64, dv: f64, values: Vec<f64>) -> Self {
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        Self { theta, u_start, lines, half, du, dv, values, sorted }
    }

    fn width(&self) -> usize {
        2 * self.half + 1
    }

    pub fn theta(&self) -> [f64; 2] {
        self.theta
    }

    pub fn cell_area(&self) -> f64 {
        self.du * self.dv
    }

    /// Values along line `i`, ordered by `v` from `-half·dv` to `half·dv`.
    pub fn line(&self, i: usize) -> &[f64] {
        &self.values[i * self.width()..(i + 1) * self.width()]
    }

    pub fn line_count(&self) -> usize {
        self.lines
    }

    pub fn v_step(&self) -> f64 {
        self.dv
    }

    /// Perpendicular coordinate of line `i`.
    pub fn line_offset(&self, i: usize) -> f64 {
        (self.u_start + i as i64) as f64 * self.du
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let [t0, t1] = self.theta;
        let u = -t1 * x[0] + t0 * x[1];
        let v = t0 * x[0] + t1 * x[1];
        let i = (u / self.du).round() as i64 - self.u_start;
        let j = (v / self.dv).round() as i64 + self.half as i64;
        if i < 0 || j < 0 || i >= self.lines as i64 || j >= self.width() as i64 {
            return 0.0;
        }
        self.values[i as usize * self.width() + j as usize]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn level_set_measure(&self, t: f64) -> f64 {
        let sorted = if self.sorted.len() == self.values.len() {
            std::borrow::Cow::Borrowed(&self.sorted)
        } else {
            let mut s = self.values.clone();
            s.sort_by(|a, b| b.total_cmp(a));
            std::borrow::Cow::Owned(s)
        };
        sorted.partition_point(|v| *v > t) as f64 * self.cell_area()
    }

    pub fn support_measure(&self) -> f64 {
        self.values.iter().filter(|v| **v > 0.0).count() as f64 * self.cell_area()
    }

    pub fn bounding_box(&self) -> BoundingBox {
        let [t0, t1] = self.theta;
        let u0 = (self.u_start as f64 - 0.5) * self.du;
        let u1 = (self.u_start as f64 + self.lines as f64 - 0.5) * self.du;
        let v1 = (self.half as f64 + 0.5) * self.dv;
        let mut lo = vec![f64::INFINITY; 2];
        let mut hi = vec![f64::NEG_INFINITY; 2];
        for u in [u0, u1] {
            for v in [-v1, v1] {
                let p = [-t1 * u + t0 * v, t0 * u + t1 * v];
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
        }
        BoundingBox::new(lo, hi)
    }
}

/// Steiner symmetral of a planar function about `θ^⊥`.
///
/// `f` is sampled on `lines` lines parallel to `θ` spanning its effective
/// box; along each line the samples are sorted in decreasing order and laid
/// out at `v = 0, +dv, -dv, +2dv, …`, the discrete 1-D symmetric decreasing
/// rearrangement. Each line keeps exactly its multiset of values.
pub fn steiner_symmetrize_function(
    f: &LogConcaveFunction,
    theta: &[f64],
    lines: usize,
) -> Result<LogConcaveFunction> {
    if f.dim() != 2 || theta.len() != 2 {
        return Err(Error::Unsupported(format!(
            "function Steiner symmetrization needs n = 2, got n = {}",
            f.dim()
        )));
    }
    let len = theta[0].hypot(theta[1]);
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("direction has norm {len}, expected 1")));
    }
    if lines < 2 {
        return Err(Error::InvalidParameter("need at least two grid lines".into()));
    }
    let t = [theta[0], theta[1]];
    let b = f.effective_box();
    let (mut umin, mut umax, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for x in [b.lo[0], b.hi[0]] {
        for y in [b.lo[1], b.hi[1]] {
            let u = -t[1] * x + t[0] * y;
            let v = t[0] * x + t[1] * y;
            umin = umin.min(u);
            umax = umax.max(u);
            vmax = vmax.max(v.abs());
        }
    }
    let du = (umax - umin) / lines as f64;
    let dv = 2.0 * vmax / lines as f64;
    let u_start = (umin / du).floor() as i64;
    let count = ((umax / du).ceil() as i64 - u_start + 1) as usize;
    let half = (vmax / dv).ceil() as usize;
    let width = 2 * half + 1;

    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let u = (u_start + i as i64) as f64 * du;
            let mut line: Vec<f64> = (0..width)
                .map(|j| {
                    let v = (j as f64 - half as f64) * dv;
                    f.value_at(&[-t[1] * u + t[0] * v, t[0] * u + t[1] * v])
                })
                .collect();
            line.sort_by(|a, b| b.total_cmp(a));
            let mut out = vec![0.0; width];
            for (k, val) in line.into_iter().enumerate() {
                // 0, +1, -1, +2, -2, …
                let offset = (k + 1) / 2;
                let j = if k % 2 == 1 { half + offset } else { half - offset };
                out[j] = val;
            }
            out
        })
        .collect();
    Ok(LogConcaveFunction::Grid(GridFunction::new(t, u_start, count, half, du, dv, values)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_gaussian_is_unchanged() {
        let f = LogConcaveFunction::gaussian(vec![0.0, 0.0], 1.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = steiner_symmetrize_function(&f, &[s, s], 64).unwrap();
        let LogConcaveFunction::Grid(grid) = &g else { panic!() };
        // each line of a radial function is already symmetric decreasing
        for i in 0..grid.line_count() {
            let u = grid.line_offset(i);
            for (j, val) in grid.line(i).iter().enumerate() {
                let v = (j as f64 - grid.half as f64) * grid.v_step();
                let want = (-(u * u + v * v)).exp();
                assert!((val - want).abs() < 1e-9, "{val} vs {want}");
            }
        }
    }

    #[test]
    fn unit_square_is_centred() {
        let f = LogConcaveFunction::indicator_box(vec![0.0, 0.0], vec![1.0, 1.0], 1.0).unwrap();
        let g = steiner_symmetrize_function(&f, &[1.0, 0.0], 128).unwrap();
        assert_eq!(g.evaluate(&[0.0, 0.5]).unwrap(), 1.0);
        assert_eq!(g.evaluate(&[-0.45, 0.5]).unwrap(), 1.0);
        assert_eq!(g.evaluate(&[0.45, 0.2]).unwrap(), 1.0);
        assert_eq!(g.evaluate(&[0.6, 0.5]).unwrap(), 0.0);
        assert_eq!(g.evaluate(&[-0.6, 0.5]).unwrap(), 0.0);
        assert!((g.integral() - 1.0).abs() < 0.05);
    }

    #[test]
    fn triangle_lines_keep_their_lengths() {
        // triangle (0,0), (2,0), (0,2): chord along e1 at height y is 2 - y
        let e = crate::geometry::upper_envelope(
            &[vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]],
            2,
        )
        .unwrap();
        let f = LogConcaveFunction::envelope(e).unwrap();
        let g = steiner_symmetrize_function(&f, &[1.0, 0.0], 200).unwrap();
        let LogConcaveFunction::Grid(grid) = &g else { panic!() };
        for i in 0..grid.line_count() {
            let y = grid.line_offset(i);
            let line = grid.line(i);
            let len = line.iter().filter(|v| **v > 0.0).count() as f64 * grid.v_step();
            let want = if (0.0..=2.0).contains(&y) { 2.0 - y } else { 0.0 };
            assert!((len - want).abs() <= 2.0 * grid.v_step(), "y = {y}: {len} vs {want}");
            // centred: positive cells fill the offsets 0, +1, -1, … in order
            let c = line.iter().filter(|v| **v > 0.0).count() as i64;
            let half = grid.half as i64;
            for (j, v) in grid.line(i).iter().enumerate() {
                let off = j as i64 - half;
                let inside = c > 0 && off >= -((c - 1) / 2) && off <= c / 2;
                assert_eq!(*v > 0.0, inside, "line {i} offset {off}");
            }
        }
    }

    #[test]
    fn one_dimensional_input_unsupported() {
        let f = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        assert!(matches!(steiner_symmetrize_function(&f, &[1.0], 16), Err(Error::Unsupported(_))));
    }
}
