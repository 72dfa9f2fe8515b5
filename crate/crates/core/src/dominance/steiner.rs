use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{groemer_functional, m_addition_functional, MonteCarloConfig};
use crate::geometry::{orthonormal_complement, CoefficientBody};

/// Relative tolerance of the evenness and midpoint checks.
pub const STEINER_TOLERANCE: f64 = 1e-9;

/// A functional `F(x_1, …, x_N)` of `N` points in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SteinerFunctional {
    /// `vol conv{x_i}`.
    Groemer,
    /// `vol ⊕_C(B^s_{ρ_i}(x_i))` with fixed radii drawn per instance.
    /// `lambda` switches `C` from the simplex to `C_first +_λ Ĉ_{N-first}`.
    MAddition {
        s: usize,
        #[serde(default)]
        split: Option<(usize, f64)>,
    },
    Constant { value: f64 },
    /// `-vol conv{x_i}`: a negative control that is even but concave along
    /// each direction, so the midpoint check must reject it.
    NegatedGroemer,
}

impl SteinerFunctional {
    fn evaluate(&self, points: &[Vec<f64>], radii: &[f64]) -> Result<f64> {
        match self {
            Self::Groemer => groemer_functional(points),
            Self::MAddition { s, split } => {
                let c = match *split {
                    None => CoefficientBody::Simplex { count: points.len() },
                    Some((first, lambda)) => CoefficientBody::lambda_sum(first, points.len() - first, lambda),
                };
                let v = m_addition_functional(points, radii, *s, c, &MonteCarloConfig::default())?;
                if !v.is_exact() {
                    return Err(Error::Unsupported(format!(
                        "M-addition functional has no exact path for n = {}, s = {s}",
                        points[0].len()
                    )));
                }
                Ok(v.volume())
            }
            Self::Constant { value } => Ok(*value),
            Self::NegatedGroemer => Ok(-groemer_functional(points)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerConvexityReport {
    pub functional: SteinerFunctional,
    pub dim: usize,
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    pub evenness_failures: usize,
    pub convexity_failures: usize,
    /// Largest `|F(t) - F(-t)| / (1 + F(t))`.
    pub max_evenness_gap: f64,
    /// Largest `(F((t+r)/2) - (F(t)+F(r))/2) / (1 + (F(t)+F(r))/2)`.
    pub max_convexity_excess: f64,
}

impl SteinerConvexityReport {
    pub fn passed(&self) -> bool {
        self.evenness_failures == 0 && self.convexity_failures == 0
    }
}

fn unit_vector(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-3 && len <= 1.0 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// Random-instance tester for Steiner convexity of `F`: for a random
/// direction `θ`, base points `y_i ⊥ θ` and heights `t, r ∈ R^N`, with
/// `F_Y(t) = F(y_1 + t_1θ, …, y_N + t_Nθ)`, checks that `F_Y` is even and
/// midpoint convex.
pub fn check_steiner_convexity(
    functional: &SteinerFunctional,
    n: usize,
    count: usize,
    trials: usize,
    seed: u64,
) -> Result<SteinerConvexityReport> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter("need n ≥ 1 and N ≥ 1".into()));
    }
    if let SteinerFunctional::MAddition { s, split } = functional {
        if n + s > 3 {
            return Err(Error::Unsupported(format!("M-addition tester needs n + s ≤ 3, got n = {n}, s = {s}")));
        }
        if let Some((first, lambda)) = split {
            if *first == 0 || *first >= count || !(*lambda > 0.0 && *lambda < 1.0) {
                return Err(Error::InvalidParameter(format!("bad coefficient split ({first}, {lambda})")));
            }
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut report = SteinerConvexityReport {
        functional: functional.clone(),
        dim: n,
        points: count,
        trials,
        seed,
        evenness_failures: 0,
        convexity_failures: 0,
        max_evenness_gap: 0.0,
        max_convexity_excess: f64::NEG_INFINITY,
    };
    for _ in 0..trials {
        let theta = unit_vector(&mut rng, n);
        let basis = orthonormal_complement(&theta);
        let base: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                let mut y = vec![0.0; n];
                for b in &basis {
                    let c = rng.gen_range(-1.0..1.0);
                    for k in 0..n {
                        y[k] += c * b[k];
                    }
                }
                y
            })
            .collect();
        let radii: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
        let t: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lift = |h: &[f64]| -> Vec<Vec<f64>> {
            base.iter()
                .zip(h)
                .map(|(y, hi)| y.iter().zip(&theta).map(|(a, b)| a + hi * b).collect())
                .collect()
        };
        let eval = |h: &[f64]| functional.evaluate(&lift(h), &radii);
        let ft = eval(&t)?;
        let fr = eval(&r)?;
        let neg: Vec<f64> = t.iter().map(|x| -x).collect();
        let fneg = eval(&neg)?;
        let mid: Vec<f64> = t.iter().zip(&r).map(|(a, b)| 0.5 * (a + b)).collect();
        let fmid = eval(&mid)?;

        let gap = (ft - fneg).abs() / (1.0 + ft.abs());
        report.max_evenness_gap = report.max_evenness_gap.max(gap);
        if gap > STEINER_TOLERANCE {
            report.evenness_failures += 1;
        }
        let avg = 0.5 * (ft + fr);
        let excess = (fmid - avg) / (1.0 + avg.abs());
        report.max_convexity_excess = report.max_convexity_excess.max(excess);
        if excess > STEINER_TOLERANCE {
            report.convexity_failures += 1;
        }
    }
    Ok(report)
}
