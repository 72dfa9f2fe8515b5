//! `s`-homothety `λ·_s f`, `s`-Minkowski sum `f ⊕_s g`, and their composition
//! `f ⋆_{λ,s} g = (λ·_s f) ⊕_s ((1-λ)·_s g)`.

use super::supconv::{check_lambda, Region, ORACLE_RESOLUTION};
use crate::error::{check_dim, Error, Result};
use crate::logconcave::{BoundingBox, Density};

/// `[λ·_s f](x) = λ^s f(x/λ)`; its body `K^s` is `λ K^s_f`.
#[derive(Clone, Debug)]
pub struct SHomothety<F> {
    base: F,
    lambda: f64,
    s: f64,
}

pub fn s_homothety<F: Density>(f: F, lambda: f64, s: f64) -> Result<SHomothety<F>> {
    if !(lambda > 0.0) || !(s > 0.0) || !lambda.is_finite() || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("need λ, s > 0, got λ = {lambda}, s = {s}")));
    }
    Ok(SHomothety { base: f, lambda, s })
}

impl<F: Density> Density for SHomothety<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v / self.lambda).collect();
        self.lambda.powf(self.s) * self.base.value(&y)
    }

    fn root(&self, x: &[f64], s: f64) -> f64 {
        // λ^s underflows for large s; the root does not
        let y: Vec<f64> = x.iter().map(|v| v / self.lambda).collect();
        self.lambda.powf(self.s / s) * self.base.root(&y, s)
    }

    fn support_box(&self) -> BoundingBox {
        let b = self.base.support_box();
        BoundingBox::new(
            b.lo.iter().map(|v| v * self.lambda).collect(),
            b.hi.iter().map(|v| v * self.lambda).collect(),
        )
    }

    fn peak(&self) -> f64 {
        self.lambda.powf(self.s) * self.base.peak()
    }

    fn exact_revolution_volume(&self, s: usize) -> Option<f64> {
        if self.s != s as f64 {
            return None;
        }
        let n = self.base.dim() as i32;
        self.base
            .exact_revolution_volume(s)
            .map(|v| v * self.lambda.powi(n + s as i32))
    }
}

/// `[f ⊕_s g](v) = sup{(f(x)^{1/s} + g(y)^{1/s})^s : v = x + y}`, and 0 when
/// `v ∉ supp f + supp g`. Evaluated with the grid-plus-golden oracle, which
/// is exact for `s`-concave inputs and a lower bound otherwise.
#[derive(Clone, Debug)]
pub struct SMinkowskiSum<F, G> {
    f: F,
    g: G,
    s: f64,
    resolution: usize,
}

pub fn s_minkowski_sum<F: Density, G: Density>(f: F, g: G, s: f64) -> Result<SMinkowskiSum<F, G>> {
    check_dim(f.dim(), g.dim())?;
    if !(1..=2).contains(&f.dim()) {
        return Err(Error::Unsupported(format!("s-sum in dimension {}", f.dim())));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
    }
    Ok(SMinkowskiSum { f, g, s, resolution: ORACLE_RESOLUTION })
}

/// `f ⋆_{λ,s} g`.
pub fn s_sup_convolution<F: Density, G: Density>(
    f: F,
    g: G,
    lambda: f64,
    s: f64,
) -> Result<SMinkowskiSum<SHomothety<F>, SHomothety<G>>> {
    check_lambda(lambda)?;
    s_minkowski_sum(s_homothety(f, lambda, s)?, s_homothety(g, 1.0 - lambda, s)?, s)
}

impl<F, G> SMinkowskiSum<F, G> {
    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }
}

impl<F: Density, G: Density> Density for SMinkowskiSum<F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, v: &[f64]) -> f64 {
        let (bf, bg) = (self.f.support_box(), self.g.support_box());
        let region = Region::from_box(&bf.lo, &bf.hi)
            .intersect(&Region::from_box(&bg.lo, &bg.hi).reflect(v, 1.0, 1.0));
        let Some(region) = region else {
            return 0.0;
        };
        let phi = |x: &[f64]| {
            let fx = self.f.root(x, self.s);
            if !(fx > 0.0) {
                return f64::NEG_INFINITY;
            }
            let y: Vec<f64> = v.iter().zip(x).map(|(a, b)| a - b).collect();
            let gy = self.g.root(&y, self.s);
            if !(gy > 0.0) {
                return f64::NEG_INFINITY;
            }
            fx + gy
        };
        let best = region.maximize(phi, self.resolution).1;
        if best > 0.0 {
            best.powf(self.s)
        } else {
            0.0
        }
    }

    fn support_box(&self) -> BoundingBox {
        let (a, b) = (self.f.support_box(), self.g.support_box());
        BoundingBox::new(
            a.lo.iter().zip(&b.lo).map(|(x, y)| x + y).collect(),
            a.hi.iter().zip(&b.hi).map(|(x, y)| x + y).collect(),
        )
    }

    fn peak(&self) -> f64 {
        let inv = 1.0 / self.s;
        (self.f.peak().powf(inv) + self.g.peak().powf(inv)).powf(self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logconcave::LogConcaveFunction;

    fn unit_box() -> LogConcaveFunction {
        LogConcaveFunction::indicator_box(vec![0.0], vec![1.0], 1.0).unwrap()
    }

    #[test]
    fn homothety_examples() {
        let f = unit_box();
        let same = s_homothety(&f, 1.0, 3.0).unwrap();
        assert_eq!(same.value(&[0.5]), 1.0);
        let h = s_homothety(&f, 2.0, 1.0).unwrap();
        assert_eq!(h.value(&[1.9]), 2.0);
        assert_eq!(h.value(&[2.1]), 0.0);
        assert!(s_homothety(&f, 0.0, 1.0).is_err());
    }

    #[test]
    fn constant_s_sum() {
        let f = unit_box();
        let h = s_minkowski_sum(&f, &f, 1.0).unwrap();
        for v in [0.1, 1.0, 1.9] {
            assert!((h.value(&[v]) - 2.0).abs() < 1e-12);
        }
        assert_eq!(h.value(&[2.2]), 0.0);
        assert_eq!(h.value(&[-0.2]), 0.0);
    }

    #[test]
    fn s_sup_convolution_decreases_to_sup_convolution() {
        let f = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let g = LogConcaveFunction::gaussian(vec![1.0], 2.0).unwrap();
        let lambda = 0.4;
        let h = crate::functionals::sup_convolution(&f, &g, lambda).unwrap();
        for k in 0..10 {
            let v = [-1.0 + 0.3 * k as f64];
            let target = h.value(&v);
            let mut prev = f64::INFINITY;
            for s in [10.0, 100.0, 1000.0] {
                let gap = (s_sup_convolution(&f, &g, lambda, s).unwrap().value(&v) - target).abs();
                assert!(gap < prev, "v = {v:?}, s = {s}: {gap} vs {prev}");
                prev = gap;
            }
        }
    }
}
