//! Radial profiles and the symmetric decreasing rearrangement.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::LogConcaveFunction;
use crate::error::{Error, Result};
use crate::functionals::kappa;
use crate::numeric;

/// Uniformly spaced radii across the effective support.
pub const RADIAL_BREAKPOINTS: usize = 4096;
/// Radii at which `f*` crosses uniformly spaced levels.
pub const LEVEL_BREAKPOINTS: usize = 1024;
/// Geometric radii near the origin and geometric levels in the tail.
const GEOMETRIC_RATIO: f64 = 1.01;
const GEOMETRIC_DEPTH: f64 = 1e-6;
const TAIL_LEVELS: usize = 256;
/// Relative floor below which unbounded supports are cut off.
const TAIL_FLOOR: f64 = 1e-12;

/// Nonincreasing `ρ: [0, ∞) → [0, ∞)` tabulated at sorted radii, log-affine
/// between positive neighbours and affine into zero.
///
/// A repeated radius encodes a jump. At a jump the upper value is taken,
/// i.e. superlevel sets are closed balls; beyond the last radius `ρ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr")]
pub struct RadialProfile {
    dim: usize,
    radii: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct ProfileRepr {
    dim: usize,
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<ProfileRepr> for RadialProfile {
    type Error = Error;
    fn try_from(r: ProfileRepr) -> Result<Self> {
        Self::new(r.dim, r.radii, r.values)
    }
}

impl RadialProfile {
    pub fn new(dim: usize, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Unsupported(format!("radial profile in dimension {dim}")));
        }
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidParameter(
                "profile needs equally many radii and values, at least one".into(),
            ));
        }
        if radii[0] != 0.0 {
            return Err(Error::InvalidParameter("profile must start at radius 0".into()));
        }
        if radii.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("profile entries must be finite".into()));
        }
        if radii.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("profile radii must be sorted".into()));
        }
        if values.iter().any(|v| *v < 0.0) || values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "profile values must be nonnegative and nonincreasing".into(),
            ));
        }
        Ok(Self { dim, radii, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Radius beyond which the profile vanishes.
    pub fn outer_radius(&self) -> f64 {
        match self.values.iter().position(|v| *v == 0.0) {
            Some(k) => self.radii[k],
            None => *self.radii.last().unwrap(),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        let k = self.radii.partition_point(|x| *x < r);
        if k == self.radii.len() {
            return 0.0;
        }
        if self.radii[k] == r {
            return self.values[k];
        }
        let (r0, r1) = (self.radii[k - 1], self.radii[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        let w = (r - r0) / (r1 - r0);
        if v1 > 0.0 {
            (v0.ln() + w * (v1.ln() - v0.ln())).exp()
        } else {
            v0 * (1.0 - w)
        }
    }

    /// `sup{r : ρ(r) > t}`.
    pub fn radius_above(&self, t: f64) -> f64 {
        let count = self.values.partition_point(|v| *v > t);
        if count == 0 {
            return 0.0;
        }
        let k = count - 1;
        if k + 1 == self.values.len() || self.radii[k + 1] == self.radii[k] {
            return self.radii[k];
        }
        let (r0, r1) = (self.radii[k], self.radii[k + 1]);
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        let w = if v1 > 0.0 {
            (v0.ln() - t.ln()) / (v0.ln() - v1.ln())
        } else {
            (v0 - t) / v0
        };
        r0 + w.clamp(0.0, 1.0) * (r1 - r0)
    }

    /// Volume of `{x : ρ(|x|) > t}`.
    pub fn level_set_measure(&self, t: f64) -> f64 {
        kappa(self.dim) * self.radius_above(t).powi(self.dim as i32)
    }

    /// `∫_{R^n} ρ(|x|) dx`.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for k in 1..self.radii.len() {
            let (r0, r1) = (self.radii[k - 1], self.radii[k]);
            let (v0, v1) = (self.values[k - 1], self.values[k]);
            let len = r1 - r0;
            if len <= 0.0 || v0 == 0.0 {
                continue;
            }
            total += match self.dim {
                1 => {
                    if v1 > 0.0 {
                        numeric::integrate_exp_affine_segment(0.0, len, (v1.ln() - v0.ln()) / len, v0.ln())
                    } else {
                        0.5 * len * v0
                    }
                }
                _ => {
                    let piece = |u: f64| (r0 + u) * self.value(r0 + u);
                    if v1 > 0.0 {
                        numeric::gauss_legendre(piece, 0.0, len, 1)
                    } else {
                        // ∫ (r0 + u) v0 (1 - u/len) du
                        v0 * len * (r0 / 2.0 + len / 6.0)
                    }
                }
            };
        }
        match self.dim {
            1 => 2.0 * total,
            _ => 2.0 * std::f64::consts::PI * total,
        }
    }

    /// Two-column CSV `radius,value`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["radius", "value"])?;
        for (r, v) in self.radii.iter().zip(&self.values) {
            out.write_record([format!("{r:e}"), format!("{v:e}")])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(dim: usize, r: R) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let (mut radii, mut values) = (Vec::new(), Vec::new());
        for row in reader.deserialize::<(f64, f64)>() {
            let (r, v) = row?;
            radii.push(r);
            values.push(v);
        }
        Self::new(dim, radii, values)
    }
}

/// `sup{t ∈ [0, top] : μ(t) > target}` by bisection.
fn invert_measure(mu: &impl Fn(f64) -> f64, target: f64, top: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mu(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the supremum is not attained at a jump of μ
    hi
}

/// Symmetric decreasing rearrangement `f*`.
///
/// `f*(r) = sup{t : |{f > t}| > κ_n r^n}` is evaluated by bisection at a
/// breakpoint grid made of uniform radii, geometric radii near 0, and the
/// radii where `f*` crosses a uniform (plus geometric tail) level grid. A
/// bounded support of measure `S` gives a jump to 0 at `(S/κ_n)^{1/n}`;
/// unbounded supports are cut where `f` drops below `1e-12 · max f`.
pub fn rearrange(f: &LogConcaveFunction) -> Result<RadialProfile> {
    let n = f.dim();
    let kn = kappa(n);
    let top = f.max_value();
    if !(top > 0.0) || !top.is_finite() {
        return Err(Error::EmptySupport("rearrangement of a function with zero maximum".into()));
    }
    let mu = |t: f64| f.level_set_measure_unchecked(t);
    let radius_of = |m: f64| (m / kn).powf(1.0 / n as f64);

    let (outer, edge) = match f.support_measure() {
        Some(s) if s > 0.0 && s.is_finite() => {
            // height of the cliff at the support boundary
            let (mut lo, mut hi) = (0.0, top);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if mu(mid) >= s * (1.0 - 1e-12) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (radius_of(s), hi)
        }
        Some(_) => return Err(Error::EmptySupport("support has zero measure".into())),
        None => {
            let floor = top * TAIL_FLOOR;
            (radius_of(mu(floor)), floor)
        }
    };
    if !(outer > 0.0) || !outer.is_finite() {
        return Err(Error::NonIntegrable("effective support radius is not finite".into()));
    }

    let mut radii: Vec<f64> = (0..RADIAL_BREAKPOINTS)
        .map(|k| outer * k as f64 / RADIAL_BREAKPOINTS as f64)
        .collect();
    let mut r = outer * GEOMETRIC_DEPTH;
    while r < outer {
        radii.push(r);
        r *= GEOMETRIC_RATIO;
    }
    let mut levels: Vec<f64> = (1..LEVEL_BREAKPOINTS)
        .map(|j| edge + (top - edge) * j as f64 / LEVEL_BREAKPOINTS as f64)
        .collect();
    if f.support_measure().is_none() {
        levels.extend(
            (1..=TAIL_LEVELS).map(|j| top * TAIL_FLOOR.powf(j as f64 / TAIL_LEVELS as f64)),
        );
    }
    radii.extend(
        levels
            .iter()
            .map(|&t| radius_of(mu(t)))
            .filter(|r| *r > 0.0 && *r < outer),
    );
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * outer);

    let mut values: Vec<f64> = radii
        .iter()
        .map(|&r| {
            if r == 0.0 {
                top
            } else {
                invert_measure(&mu, kn * r.powi(n as i32), top)
            }
        })
        .collect();
    for k in 1..values.len() {
        values[k] = values[k].min(values[k - 1]);
    }
    // closed ball at the outer radius, then the drop to zero
    let last = values.last().copied().unwrap_or(top);
    radii.push(outer);
    values.push(edge.min(last));
    radii.push(outer);
    values.push(0.0);
    RadialProfile::new(n, radii, values)
}
