//! Volumes of bodies of revolution `K^s_f`, and the Groemer and M-addition
//! functionals.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ball_hull_volume, convex_hull, BallHullBody, CoefficientBody};
use crate::logconcave::Density;
use crate::stochastic::{stream_rng, Lane};

pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
const MC_BLOCK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self { samples: DEFAULT_MC_SAMPLES, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum RevolutionVolume {
    Exact { volume: f64 },
    MonteCarlo { volume: f64, std_error: f64, samples: u64 },
}

impl RevolutionVolume {
    pub fn volume(&self) -> f64 {
        match *self {
            Self::Exact { volume } | Self::MonteCarlo { volume, .. } => volume,
        }
    }

    /// Zero on exact paths.
    pub fn std_error(&self) -> f64 {
        match *self {
            Self::Exact { .. } => 0.0,
            Self::MonteCarlo { std_error, .. } => std_error,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact { .. })
    }
}

/// Hit-or-miss estimate of `vol(K)` inside `[lo, hi]`: uniform points in the
/// box, counted in fixed-size blocks with one random stream per block so the
/// result does not depend on the thread count.
fn hit_or_miss(lo: &[f64], hi: &[f64], mc: &MonteCarloConfig, inside: impl Fn(&[f64]) -> bool + Sync) -> RevolutionVolume {
    let blocks = mc.samples.div_ceil(MC_BLOCK);
    let total = blocks * MC_BLOCK;
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(mc.seed, Lane::Aux, b);
            let mut p = vec![0.0; lo.len()];
            let mut count = 0u64;
            for _ in 0..MC_BLOCK {
                for (k, pk) in p.iter_mut().enumerate() {
                    *pk = lo[k] + (hi[k] - lo[k]) * rng.gen::<f64>();
                }
                count += u64::from(inside(&p));
            }
            count
        })
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();
    let cell: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let p = hits as f64 / total as f64;
    RevolutionVolume::MonteCarlo {
        volume: cell * p,
        std_error: cell * (p * (1.0 - p) / total as f64).sqrt(),
        samples: total,
    }
}

/// Monte Carlo `vol(K^s_f)` in the cylinder `box(f) × [-R, R]^s` with
/// `R = (max f)^{1/s}`.
pub fn monte_carlo_revolution_volume<D: Density + ?Sized>(f: &D, s: usize, mc: &MonteCarloConfig) -> Result<RevolutionVolume> {
    if s == 0 {
        return Err(Error::InvalidParameter("fiber dimension must be at least 1".into()));
    }
    let n = f.dim();
    let b = f.support_box();
    let r = f.peak().powf(1.0 / s as f64);
    if !r.is_finite() {
        return Err(Error::NonIntegrable("unbounded function".into()));
    }
    let mut lo = b.lo.clone();
    let mut hi = b.hi.clone();
    lo.extend(std::iter::repeat_n(-r, s));
    hi.extend(std::iter::repeat_n(r, s));
    let inv = 1.0 / s as f64;
    Ok(hit_or_miss(&lo, &hi, mc, |p| {
        let y2: f64 = p[n..].iter().map(|v| v * v).sum();
        let v = f.value(&p[..n]);
        v > 0.0 && y2.sqrt() <= v.powf(inv)
    }))
}

/// `vol(K^s_f)` with `K^s_f = {(x, y) ∈ R^n × R^s : |y| ≤ f(x)^{1/s}}`, so that
/// `∫f = vol(K^s_f) / κ_s`. Exact when `f` knows its body (boxes, `s`-envelopes
/// with `n + s ≤ 3`, `s`-approximations of Gaussians); Monte Carlo otherwise.
pub fn body_of_revolution_volume<D: Density + ?Sized>(f: &D, s: usize, mc: &MonteCarloConfig) -> Result<RevolutionVolume> {
    if s == 0 {
        return Err(Error::InvalidParameter("fiber dimension must be at least 1".into()));
    }
    match f.exact_revolution_volume(s) {
        Some(volume) => Ok(RevolutionVolume::Exact { volume }),
        None => monte_carlo_revolution_volume(f, s, mc),
    }
}

/// `vol(conv{x_1, …, x_N})` for points in `R^n`, `n ≤ 3`.
pub fn groemer_functional(points: &[Vec<f64>]) -> Result<f64> {
    let n = points
        .first()
        .ok_or_else(|| Error::InvalidParameter("Groemer functional of no points".into()))?
        .len();
    Ok(convex_hull(points, n)?.volume())
}

/// `vol ⊕_C(B^s_{ρ_1}(x_1), …, B^s_{ρ_N}(x_N))`; exact when `n + s ≤ 3`,
/// otherwise hit-or-miss with the linear-feasibility membership test.
pub fn m_addition_functional(
    centers: &[Vec<f64>],
    radii: &[f64],
    s: usize,
    coefficients: CoefficientBody,
    mc: &MonteCarloConfig,
) -> Result<RevolutionVolume> {
    let body = BallHullBody::new(centers.to_vec(), radii.to_vec(), s, coefficients)?;
    match ball_hull_volume(&body) {
        Ok(volume) => Ok(RevolutionVolume::Exact { volume }),
        Err(Error::Unsupported(_)) => {
            let (lo, hi) = body.bounding_box();
            if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
                return Ok(RevolutionVolume::Exact { volume: 0.0 });
            }
            Ok(hit_or_miss(&lo, &hi, mc, |p| body.contains_lp(p, 0.0)))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::kappa;
    use crate::logconcave::{s_approx, LogConcaveFunction};
    use crate::numeric::gauss_legendre;

    #[test]
    fn box_cylinder() {
        let f = LogConcaveFunction::indicator_box(vec![0.0], vec![1.0], 1.0).unwrap();
        let v = body_of_revolution_volume(&f, 1, &MonteCarloConfig::default()).unwrap();
        assert_eq!(v, RevolutionVolume::Exact { volume: 2.0 });
    }

    #[test]
    fn parabola_body() {
        let g = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let f = s_approx(&g, 1.0).unwrap();
        let v = body_of_revolution_volume(&f, 1, &MonteCarloConfig::default()).unwrap();
        assert!(v.is_exact());
        assert!((v.volume() - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_matches_within_three_errors() {
        let g = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
        let f = s_approx(&g, 2.0).unwrap();
        let mc = monte_carlo_revolution_volume(&f, 2, &MonteCarloConfig { samples: 1 << 20, seed: 4 }).unwrap();
        let integral = gauss_legendre(|x| f.value(&[x]), -2.0f64.sqrt(), 2.0f64.sqrt(), 64);
        let want = kappa(2) * integral;
        assert!((mc.volume() - want).abs() <= 3.0 * mc.std_error(), "{mc:?} vs {want}");
        // and the closed form agrees with quadrature
        let exact = body_of_revolution_volume(&f, 2, &MonteCarloConfig::default()).unwrap();
        assert!((exact.volume() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn groemer_examples() {
        assert_eq!(groemer_functional(&[vec![0.0], vec![3.0]]).unwrap(), 3.0);
        let tri = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!((groemer_functional(&tri).unwrap() - 0.5).abs() < 1e-15);
        let rev: Vec<Vec<f64>> = tri.iter().rev().cloned().collect();
        assert_eq!(groemer_functional(&rev).unwrap(), groemer_functional(&tri).unwrap());
    }

    #[test]
    fn m_addition_examples() {
        let mc = MonteCarloConfig::default();
        let c = CoefficientBody::Simplex { count: 2 };
        let v = m_addition_functional(&[vec![0.0], vec![1.0]], &[1.0, 1.0], 1, c, &mc).unwrap();
        assert!((v.volume() - 2.0).abs() < 1e-14);
        let shifted = m_addition_functional(&[vec![5.0], vec![6.0]], &[1.0, 1.0], 1, c, &mc).unwrap();
        assert!((shifted.volume() - v.volume()).abs() < 1e-12);
        let flat = m_addition_functional(&[vec![0.0], vec![1.0]], &[0.0, 0.0], 1, c, &mc).unwrap();
        assert_eq!(flat.volume(), 0.0);
    }

    #[test]
    fn m_addition_monte_carlo_fallback() {
        // three unit discs over a triangle in R^{2+2}: triangle × disc
        let mc = MonteCarloConfig { samples: 1 << 18, seed: 1 };
        let c = CoefficientBody::Simplex { count: 3 };
        let centers = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = m_addition_functional(&centers, &[1.0; 3], 2, c, &mc).unwrap();
        assert!(!v.is_exact());
        let want = 0.5 * std::f64::consts::PI;
        assert!((v.volume() - want).abs() <= 3.0 * v.std_error(), "{v:?}");
    }
}
