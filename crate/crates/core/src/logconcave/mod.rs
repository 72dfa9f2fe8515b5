//! Log-concave functions on `R^n`, `n ∈ {1, 2}`: analytic families, polytopal
//! envelopes, rearrangements and the transforms built from them.

mod grid;
mod profile;
mod transforms;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::functionals::kappa;
use crate::geometry::UpperEnvelope;
use crate::numeric;

pub use grid::{steiner_symmetrize_function, GridFunction, STEINER_GRID_LINES};
pub use profile::{rearrange, RadialProfile, LEVEL_BREAKPOINTS, RADIAL_BREAKPOINTS};
pub use transforms::{epsilon_truncate, s_approx, SApprox};

/// Anything that can be evaluated pointwise on `R^n` and has a finite
/// effective support.
pub trait Density: Send + Sync {
    fn dim(&self) -> usize;

    /// Value at `x`; callers guarantee `x.len() == self.dim()`.
    fn value(&self, x: &[f64]) -> f64;

    /// Box holding all but a negligible fraction (≤ 1e-9) of the mass.
    fn support_box(&self) -> BoundingBox;

    /// Upper bound for [`Density::value`].
    fn peak(&self) -> f64;

    /// `value(x)^{1/s}`; overridden where the value itself would underflow.
    fn root(&self, x: &[f64], s: f64) -> f64 {
        self.value(x).powf(1.0 / s)
    }

    /// The underlying function when this is a plain [`LogConcaveFunction`].
    fn as_function(&self) -> Option<&LogConcaveFunction> {
        None
    }

    /// `vol(K^s)` of `{(x, y) ∈ R^n × R^s : |y| ≤ value(x)^{1/s}}` when a
    /// closed form or exact geometric route is known.
    fn exact_revolution_volume(&self, _s: usize) -> Option<f64> {
        None
    }
}

impl<T: Density + ?Sized> Density for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn support_box(&self) -> BoundingBox {
        (**self).support_box()
    }
    fn peak(&self) -> f64 {
        (**self).peak()
    }
    fn root(&self, x: &[f64], s: f64) -> f64 {
        (**self).root(x, s)
    }
    fn as_function(&self) -> Option<&LogConcaveFunction> {
        (**self).as_function()
    }
    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        (**self).exact_revolution_volume(s)
    }
}

impl<T: Density + ?Sized> Density for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn support_box(&self) -> BoundingBox {
        (**self).support_box()
    }
    fn peak(&self) -> f64 {
        (**self).peak()
    }
    fn root(&self, x: &[f64], s: f64) -> f64 {
        (**self).root(x, s)
    }
    fn as_function(&self) -> Option<&LogConcaveFunction> {
        (**self).as_function()
    }
    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        (**self).exact_revolution_volume(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a).max(0.0)).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    /// `λ·self + (1-λ)·other`.
    pub fn combine(&self, other: &Self, lambda: f64) -> Self {
        Self {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        }
    }
}

/// Mass fraction outside [`Density::support_box`] is below 1e-9 with these.
const GAUSSIAN_BOX_HALF_WIDTH: f64 = 7.0;
const EXPNORM_BOX_HALF_WIDTH: f64 = 25.0;

/// A log-concave `f: R^n → [0, ∞)`.
///
/// The analytic families are `e^{-a|x-c|^2}`, `e^{-a|x-c|}` and `h·1_box`.
/// `Envelope` is `exp` of a piecewise-affine concave function on a polytope.
/// `Radial`, `Truncated` and `Grid` are produced by rearrangement, level
/// truncation and Steiner symmetrization respectively.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub enum LogConcaveFunction {
    Gaussian { center: Vec<f64>, scale: f64 },
    ExpNorm { center: Vec<f64>, rate: f64 },
    IndicatorBox { lo: Vec<f64>, hi: Vec<f64>, height: f64 },
    Envelope(UpperEnvelope),
    Radial(RadialProfile),
    Truncated { base: Box<LogConcaveFunction>, level: f64 },
    Grid(GridFunction),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum FunctionRepr {
    Gaussian {
        center: Vec<f64>,
        #[serde(alias = "scale")]
        a: f64,
    },
    #[serde(rename = "expnorm")]
    ExpNorm {
        center: Vec<f64>,
        #[serde(alias = "a")]
        rate: f64,
    },
    IndicatorBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
        #[serde(default = "unit_height")]
        height: f64,
    },
    Envelope(UpperEnvelope),
    Radial(RadialProfile),
    Truncated {
        base: Box<LogConcaveFunction>,
        level: f64,
    },
    Grid(GridFunction),
}

fn unit_height() -> f64 {
    1.0
}

impl TryFrom<FunctionRepr> for LogConcaveFunction {
    type Error = Error;

    fn try_from(r: FunctionRepr) -> Result<Self> {
        match r {
            FunctionRepr::Gaussian { center, a } => Self::gaussian(center, a),
            FunctionRepr::ExpNorm { center, rate } => Self::exp_norm(center, rate),
            FunctionRepr::IndicatorBox { lo, hi, height } => Self::indicator_box(lo, hi, height),
            FunctionRepr::Envelope(e) => Self::envelope(e),
            FunctionRepr::Radial(p) => Ok(Self::Radial(p)),
            FunctionRepr::Truncated { base, level } => epsilon_truncate(&base, level),
            FunctionRepr::Grid(g) => Ok(Self::Grid(g)),
        }
    }
}

impl From<LogConcaveFunction> for FunctionRepr {
    fn from(f: LogConcaveFunction) -> Self {
        match f {
            LogConcaveFunction::Gaussian { center, scale } => Self::Gaussian { center, a: scale },
            LogConcaveFunction::ExpNorm { center, rate } => Self::ExpNorm { center, rate },
            LogConcaveFunction::IndicatorBox { lo, hi, height } => {
                Self::IndicatorBox { lo, hi, height }
            }
            LogConcaveFunction::Envelope(e) => Self::Envelope(e),
            LogConcaveFunction::Radial(p) => Self::Radial(p),
            LogConcaveFunction::Truncated { base, level } => Self::Truncated { base, level },
            LogConcaveFunction::Grid(g) => Self::Grid(g),
        }
    }
}

fn check_base_dim(n: usize) -> Result<()> {
    if (1..=2).contains(&n) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("dimension {n} (supported: 1, 2)")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn distance(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

impl LogConcaveFunction {
    pub fn gaussian(center: Vec<f64>, scale: f64) -> Result<Self> {
        check_base_dim(center.len())?;
        positive("gaussian scale", scale)?;
        Ok(Self::Gaussian { center, scale })
    }

    pub fn exp_norm(center: Vec<f64>, rate: f64) -> Result<Self> {
        check_base_dim(center.len())?;
        positive("rate", rate)?;
        Ok(Self::ExpNorm { center, rate })
    }

    pub fn indicator_box(lo: Vec<f64>, hi: Vec<f64>, height: f64) -> Result<Self> {
        check_base_dim(lo.len())?;
        check_dim(lo.len(), hi.len())?;
        positive("height", height)?;
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidParameter("box needs lo < hi on every axis".into()));
        }
        Ok(Self::IndicatorBox { lo, hi, height })
    }

    pub fn envelope(e: UpperEnvelope) -> Result<Self> {
        check_base_dim(e.dim())?;
        Ok(Self::Envelope(e))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian { center, .. } | Self::ExpNorm { center, .. } => center.len(),
            Self::IndicatorBox { lo, .. } => lo.len(),
            Self::Envelope(e) => e.dim(),
            Self::Radial(p) => p.dim(),
            Self::Truncated { base, .. } => base.dim(),
            Self::Grid(_) => 2,
        }
    }

    /// Checked evaluation.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.value_at(x))
    }

    fn value_at(&self, x: &[f64]) -> f64 {
        match self {
            Self::Gaussian { center, scale } => {
                let d = distance(x, center);
                (-scale * d * d).exp()
            }
            Self::ExpNorm { center, rate } => (-rate * distance(x, center)).exp(),
            Self::IndicatorBox { lo, hi, height } => {
                let inside = x
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(v, (a, b))| *v >= *a && *v <= *b);
                if inside {
                    *height
                } else {
                    0.0
                }
            }
            Self::Envelope(e) => e.eval(x).exp(),
            Self::Radial(p) => p.value(x.iter().map(|v| v * v).sum::<f64>().sqrt()),
            Self::Truncated { base, level } => {
                let v = base.value_at(x);
                if v > *level {
                    v
                } else {
                    0.0
                }
            }
            Self::Grid(g) => g.value(x),
        }
    }

    /// `log f(x)`, `-∞` off the support.
    pub fn log_value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Gaussian { center, scale } => {
                let d = distance(x, center);
                -scale * d * d
            }
            Self::ExpNorm { center, rate } => -rate * distance(x, center),
            Self::Envelope(e) => e.eval(x),
            _ => self.value_at(x).ln(),
        }
    }

    /// `∫ f`.
    pub fn integral(&self) -> f64 {
        let n = self.dim();
        match self {
            Self::Gaussian { scale, .. } => (std::f64::consts::PI / scale).powf(n as f64 / 2.0),
            Self::ExpNorm { rate, .. } => match n {
                1 => 2.0 / rate,
                _ => 2.0 * std::f64::consts::PI / (rate * rate),
            },
            Self::IndicatorBox { lo, hi, height } => {
                height * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>()
            }
            Self::Envelope(e) => e.integral_exp(),
            Self::Radial(p) => p.integral(),
            Self::Truncated { level, .. } => self.layer_cake_integral(*level),
            Self::Grid(g) => g.integral(),
        }
    }

    /// `∫ f = t0·μ(t0) + ∫_{t0}^{max} μ(t) dt` by quadrature in `u` with
    /// `t = max - u^2`, which smooths the square-root behaviour of `μ` at the top.
    fn layer_cake_integral(&self, floor: f64) -> f64 {
        let top = self.max_value();
        if top <= floor {
            return 0.0;
        }
        let head = floor * self.level_set_measure_unchecked(floor);
        let span = (top - floor).sqrt();
        head + numeric::gauss_legendre(
            |u| 2.0 * u * self.level_set_measure_unchecked(top - u * u),
            0.0,
            span,
            256,
        )
    }

    /// Lebesgue measure of `{f > t}` for `t > 0`.
    pub fn level_set_measure(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "level must be positive, got {t}: level sets at 0 may be unbounded"
            )));
        }
        Ok(self.level_set_measure_unchecked(t))
    }

    pub(crate) fn level_set_measure_unchecked(&self, t: f64) -> f64 {
        let n = self.dim();
        match self {
            Self::Gaussian { scale, .. } => {
                if t >= 1.0 {
                    0.0
                } else {
                    let r = (-t.ln() / scale).sqrt();
                    kappa(n) * r.powi(n as i32)
                }
            }
            Self::ExpNorm { rate, .. } => {
                if t >= 1.0 {
                    0.0
                } else {
                    let r = -t.ln() / rate;
                    kappa(n) * r.powi(n as i32)
                }
            }
            Self::IndicatorBox { lo, hi, height } => {
                if t < *height {
                    lo.iter().zip(hi).map(|(a, b)| b - a).product()
                } else {
                    0.0
                }
            }
            Self::Envelope(e) => e.superlevel_measure(t.ln()),
            Self::Radial(p) => p.level_set_measure(t),
            Self::Truncated { base, level } => base.level_set_measure_unchecked(t.max(*level)),
            Self::Grid(g) => g.level_set_measure(t),
        }
    }

    /// Essential supremum.
    pub fn max_value(&self) -> f64 {
        match self {
            Self::Gaussian { .. } | Self::ExpNorm { .. } => 1.0,
            Self::IndicatorBox { height, .. } => *height,
            Self::Envelope(e) => e.max_height().exp(),
            Self::Radial(p) => p.value(0.0),
            Self::Truncated { base, level } => {
                let m = base.max_value();
                if m > *level {
                    m
                } else {
                    0.0
                }
            }
            Self::Grid(g) => g.max_value(),
        }
    }

    /// Measure of the support, `None` when the support is all of `R^n`.
    pub fn support_measure(&self) -> Option<f64> {
        match self {
            Self::Gaussian { .. } | Self::ExpNorm { .. } => None,
            Self::IndicatorBox { lo, hi, .. } => {
                Some(lo.iter().zip(hi).map(|(a, b)| b - a).product())
            }
            Self::Envelope(e) => Some(e.support_measure()),
            Self::Radial(p) => Some(kappa(p.dim()) * p.outer_radius().powi(p.dim() as i32)),
            Self::Truncated { base, level } => Some(base.level_set_measure_unchecked(*level)),
            Self::Grid(g) => Some(g.support_measure()),
        }
    }

    /// Effective support box (all but ≤ 1e-9 of the mass).
    pub fn effective_box(&self) -> BoundingBox {
        match self {
            Self::Gaussian { center, scale } => {
                let w = GAUSSIAN_BOX_HALF_WIDTH / scale.sqrt();
                BoundingBox::new(
                    center.iter().map(|c| c - w).collect(),
                    center.iter().map(|c| c + w).collect(),
                )
            }
            Self::ExpNorm { center, rate } => {
                let w = EXPNORM_BOX_HALF_WIDTH / rate;
                BoundingBox::new(
                    center.iter().map(|c| c - w).collect(),
                    center.iter().map(|c| c + w).collect(),
                )
            }
            Self::IndicatorBox { lo, hi, .. } => BoundingBox::new(lo.clone(), hi.clone()),
            Self::Envelope(e) => {
                let (lo, hi) = e.support().bounding_box();
                BoundingBox::new(lo, hi)
            }
            Self::Radial(p) => {
                let r = p.outer_radius();
                BoundingBox::new(vec![-r; p.dim()], vec![r; p.dim()])
            }
            Self::Truncated { base, level } => match base.as_ref() {
                Self::Gaussian { center, scale } => {
                    let r = (-(level.min(1.0)).ln() / scale).sqrt();
                    BoundingBox::new(
                        center.iter().map(|c| c - r).collect(),
                        center.iter().map(|c| c + r).collect(),
                    )
                }
                Self::ExpNorm { center, rate } => {
                    let r = -(level.min(1.0)).ln() / rate;
                    BoundingBox::new(
                        center.iter().map(|c| c - r).collect(),
                        center.iter().map(|c| c + r).collect(),
                    )
                }
                Self::Radial(p) => {
                    let r = p.radius_above(*level);
                    BoundingBox::new(vec![-r; p.dim()], vec![r; p.dim()])
                }
                other => other.effective_box(),
            },
            Self::Grid(g) => g.bounding_box(),
        }
    }
}

impl Density for LogConcaveFunction {
    fn dim(&self) -> usize {
        LogConcaveFunction::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_at(x)
    }

    fn support_box(&self) -> BoundingBox {
        self.effective_box()
    }

    fn peak(&self) -> f64 {
        self.max_value()
    }

    fn as_function(&self) -> Option<&LogConcaveFunction> {
        Some(self)
    }

    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        match self {
            // a cylinder over the box with fibre radius h^{1/s}
            Self::IndicatorBox { lo, hi, height } => Some(
                kappa(s) * height * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>(),
            ),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::upper_envelope;
    use std::f64::consts::{E, PI};

    #[test]
    fn gaussian_at_center_is_one() {
        let f = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        assert_eq!(f.evaluate(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn box_outside_support_is_zero() {
        let f = LogConcaveFunction::indicator_box(vec![0.0], vec![1.0], 1.0).unwrap();
        assert_eq!(f.evaluate(&[2.0]).unwrap(), 0.0);
        assert_eq!(f.integral(), 1.0);
    }

    #[test]
    fn envelope_of_two_lifted_points() {
        let e = upper_envelope(&[vec![0.0, 0.0], vec![2.0, 2.0]], 1).unwrap();
        let f = LogConcaveFunction::envelope(e).unwrap();
        assert!((f.evaluate(&[1.0]).unwrap() - E).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = LogConcaveFunction::gaussian(vec![0.0, 0.0], 1.0).unwrap();
        assert!(matches!(f.evaluate(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn closed_form_integrals() {
        let e = upper_envelope(&[vec![0.0, 0.0], vec![1.0, 1.0]], 1).unwrap();
        let f = LogConcaveFunction::envelope(e).unwrap();
        assert!((f.integral() - (E - 1.0)).abs() < 1e-14);
        let g = LogConcaveFunction::gaussian(vec![3.0], 1.0).unwrap();
        assert!((g.integral() - PI.sqrt()).abs() < 1e-15);
        let g2 = LogConcaveFunction::gaussian(vec![0.0, 1.0], 2.0).unwrap();
        assert!((g2.integral() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn level_sets() {
        let f = LogConcaveFunction::exp_norm(vec![0.0], 1.0).unwrap();
        assert!((f.level_set_measure(1.0 / E).unwrap() - 2.0).abs() < 1e-14);
        let g = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let want = 2.0 * 2f64.ln().sqrt();
        assert!((g.level_set_measure(0.5).unwrap() - want).abs() < 1e-14);
        assert_eq!(g.level_set_measure(1.5).unwrap(), 0.0);
        assert!(g.level_set_measure(0.0).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(LogConcaveFunction::gaussian(vec![0.0], 0.0).is_err());
        assert!(LogConcaveFunction::gaussian(vec![0.0; 3], 1.0).is_err());
        assert!(LogConcaveFunction::indicator_box(vec![1.0], vec![0.0], 1.0).is_err());
    }

    #[test]
    fn json_families() {
        let f: LogConcaveFunction =
            serde_json::from_str(r#"{"family":"gaussian","center":[2.0],"a":1.0}"#).unwrap();
        assert_eq!(f, LogConcaveFunction::gaussian(vec![2.0], 1.0).unwrap());
        let g: LogConcaveFunction =
            serde_json::from_str(r#"{"family":"expnorm","center":[0,0],"rate":2}"#).unwrap();
        assert_eq!(g.dim(), 2);
        let b: LogConcaveFunction =
            serde_json::from_str(r#"{"family":"indicator_box","lo":[0],"hi":[1]}"#).unwrap();
        assert_eq!(b.max_value(), 1.0);
        let e: LogConcaveFunction = serde_json::from_str(
            r#"{"family":"envelope","dim":1,"vertices":[[0,0],[1,1],[2,0]]}"#,
        )
        .unwrap();
        assert!((e.evaluate(&[1.0]).unwrap() - E).abs() < 1e-14);
        let bad = serde_json::from_str::<LogConcaveFunction>(r#"{"family":"gaussian","center":[0],"a":-1}"#);
        assert!(bad.is_err());
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<LogConcaveFunction>(&s).unwrap(), f);
    }

    #[test]
    fn effective_box_holds_the_mass() {
        let g = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let b = g.effective_box();
        // Gaussian tail beyond 7: erfc(7) ≈ 4e-23
        assert_eq!(b.lo, vec![-7.0]);
        let x = LogConcaveFunction::exp_norm(vec![0.0, 0.0], 1.0).unwrap();
        let r = x.effective_box().hi[0];
        // radial tail of e^{-r} in the plane: (1 + r) e^{-r}
        assert!((1.0 + r) * (-r).exp() <= 1e-9);
    }
}
