//! The `s`-approximation `f_s = (1 + log f / s)_+^s` and the level truncation
//! `f_ε = f · 1_{f > ε}`.

use super::{BoundingBox, Density, LogConcaveFunction};
use crate::error::{Error, Result};
use crate::functionals::kappa;

/// `x ↦ (1 + log f(x) / s)_+^s`. Never exceeds `f`, and increases to `f` as
/// `s → ∞`.
#[derive(Clone, Debug)]
pub struct SApprox<F> {
    base: F,
    s: f64,
}

impl<F: Density> SApprox<F> {
    pub fn new(base: F, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
        }
        Ok(Self { base, s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// Applies the transform to a known value of the base function.
    pub fn transform(&self, v: f64) -> f64 {
        s_transform(v, self.s)
    }
}

pub(crate) fn s_transform(v: f64, s: f64) -> f64 {
    if !(v > 0.0) {
        return 0.0;
    }
    let r = 1.0 + v.ln() / s;
    if r <= 0.0 {
        0.0
    } else {
        r.powf(s)
    }
}

impl<F: Density> Density for SApprox<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.transform(self.base.value(x))
    }

    fn support_box(&self) -> BoundingBox {
        self.base.support_box()
    }

    fn peak(&self) -> f64 {
        let p = self.base.peak();
        // (1 + log p / s)^s ≤ p always, with equality at p = 1
        self.transform(p).max(p.min(1.0))
    }

    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        // (1 - a|x-c|^2/s)_+^s over R^n: (s/a)^{n/2} ∫_{|u|≤1} (1-|u|^2)^s du
        let Some(LogConcaveFunction::Gaussian { scale, .. }) = self.base.as_function() else {
            return None;
        };
        if self.s != s as f64 {
            return None;
        }
        let n = self.base.dim();
        let ball = match n {
            // ∫_{-1}^{1} (1-u^2)^s du = 2 ∏ 2k/(2k+1)
            1 => (1..=s).fold(2.0, |acc, k| acc * (2 * k) as f64 / (2 * k + 1) as f64),
            _ => std::f64::consts::PI / (s + 1) as f64,
        };
        Some(kappa(s) * (self.s / scale).powf(n as f64 / 2.0) * ball)
    }
}

pub fn s_approx(f: &LogConcaveFunction, s: f64) -> Result<SApprox<&LogConcaveFunction>> {
    SApprox::new(f, s)
}

/// `f_ε = f · 1_{f > ε}`; its support is the convex level set `{f > ε}`.
pub fn epsilon_truncate(f: &LogConcaveFunction, eps: f64) -> Result<LogConcaveFunction> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("ε must be positive, got {eps}")));
    }
    let top = f.max_value();
    if eps >= top {
        return Err(Error::EmptySupport(format!("ε = {eps} is not below max f = {top}")));
    }
    Ok(match f {
        // a box is unchanged by truncation below its height
        LogConcaveFunction::IndicatorBox { .. } => f.clone(),
        LogConcaveFunction::Truncated { base, level } => LogConcaveFunction::Truncated {
            base: base.clone(),
            level: level.max(eps),
        },
        _ => LogConcaveFunction::Truncated { base: Box::new(f.clone()), level: eps },
    })
}
