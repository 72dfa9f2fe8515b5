use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{DominanceReport, PlViolations, ReportMetadata};
use super::survival::EmpiricalDistribution;
use crate::error::{check_dim, Error, Result};
use crate::geometry::minkowski_combine;
use crate::logconcave::{rearrange, LogConcaveFunction};
use crate::stochastic::{random_envelope, stream_rng, Lane, DEFAULT_MAX_ATTEMPTS};
use crate::stochastic::sample_with_rng;

/// Slack of the per-trial Prékopa–Leindler check.
pub const PL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    /// `m`, the number of trials per side.
    pub trials: usize,
    pub delta: f64,
    pub grid_points: usize,
    pub seed: u64,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        Self { trials: 2000, delta: 0.05, grid_points: 200, seed: 0 }
    }
}

impl ExperimentSettings {
    fn validate(&self) -> Result<()> {
        if self.trials < 100 {
            return Err(Error::Precondition(format!("need m ≥ 100 trials, got {}", self.trials)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("δ = {} not in (0, 1)", self.delta)));
        }
        if self.grid_points == 0 {
            return Err(Error::InvalidParameter("α-grid needs at least one point".into()));
        }
        Ok(())
    }
}

fn check_count(name: &str, count: usize, n: usize) -> Result<()> {
    if count > n + 1 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} = {count} must exceed n + 1 = {}", n + 1)))
    }
}

/// `∫[f]_N` for trial `index` on `lane`.
pub fn envelope_integral(f: &LogConcaveFunction, count: usize, seed: u64, lane: Lane, index: u64) -> Result<f64> {
    Ok(trial_envelope(f, count, seed, lane, index)?.integral())
}

fn trial_envelope(f: &LogConcaveFunction, count: usize, seed: u64, lane: Lane, index: u64) -> Result<LogConcaveFunction> {
    let mut rng = stream_rng(seed, lane, index);
    let samples = sample_with_rng(f, count, None, DEFAULT_MAX_ATTEMPTS, &mut rng)?;
    random_envelope(&samples)
}

/// Stochastic Groemer: per trial `∫[f]_N` against `∫[f*]_N` from independent
/// streams, then the dominance report of the first over the second.
pub fn run_groemer_experiment(f: &LogConcaveFunction, n_samples: usize, settings: &ExperimentSettings) -> Result<DominanceReport> {
    settings.validate()?;
    let n = f.dim();
    check_count("N", n_samples, n)?;
    let star = LogConcaveFunction::Radial(rearrange(f)?);
    let seed = settings.seed;
    let run = |g: &LogConcaveFunction, lane: Lane| -> Result<Vec<f64>> {
        (0..settings.trials as u64)
            .into_par_iter()
            .map(|i| envelope_integral(g, n_samples, seed, lane, i))
            .collect()
    };
    let original = EmpiricalDistribution::new(run(f, Lane::F)?, seed)?;
    let rearranged = EmpiricalDistribution::new(run(&star, Lane::FStar)?, seed)?;
    let metadata = ReportMetadata {
        dim: n,
        n_samples,
        m_samples: None,
        lambda: None,
        s_mode: "log".into(),
        seed,
        f: f.clone(),
        g: None,
    };
    DominanceReport::from_distributions("groemer", metadata, &original, &rearranged, settings.delta, settings.grid_points)
}

/// One Prékopa–Leindler trial: `(∫[f]_N ⋆_λ [g]_M, PL holds)`.
pub fn pl_trial(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    n_samples: usize,
    m_samples: usize,
    lambda: f64,
    seed: u64,
    lanes: (Lane, Lane),
    index: u64,
) -> Result<(f64, bool)> {
    let a = trial_envelope(f, n_samples, seed, lanes.0, index)?;
    let b = trial_envelope(g, m_samples, seed, lanes.1, index)?;
    let (LogConcaveFunction::Envelope(ea), LogConcaveFunction::Envelope(eb)) = (&a, &b) else {
        unreachable!("random envelopes are polytopal");
    };
    let h = minkowski_combine(ea, eb, lambda)?.integral_exp();
    let bound = a.integral().powf(lambda) * b.integral().powf(1.0 - lambda);
    Ok((h, h >= bound - PL_TOLERANCE))
}

/// Stochastic Prékopa–Leindler: per trial `∫([f]_N ⋆_λ [g]_M)` with the exact
/// Minkowski combination, paired with the same for `f*`, `g*`.
pub fn run_pl_experiment(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    n_samples: usize,
    m_samples: usize,
    lambda: f64,
    settings: &ExperimentSettings,
) -> Result<DominanceReport> {
    settings.validate()?;
    check_dim(f.dim(), g.dim())?;
    let n = f.dim();
    check_count("N", n_samples, n)?;
    check_count("M", m_samples, n)?;
    crate::functionals::check_lambda(lambda)?;
    let fs = LogConcaveFunction::Radial(rearrange(f)?);
    let gs = LogConcaveFunction::Radial(rearrange(g)?);
    let seed = settings.seed;
    let run = |a: &LogConcaveFunction, b: &LogConcaveFunction, lanes: (Lane, Lane)| -> Result<(Vec<f64>, u64)> {
        let out: Vec<(f64, bool)> = (0..settings.trials as u64)
            .into_par_iter()
            .map(|i| pl_trial(a, b, n_samples, m_samples, lambda, seed, lanes, i))
            .collect::<Result<_>>()?;
        let violations = out.iter().filter(|(_, ok)| !ok).count() as u64;
        Ok((out.into_iter().map(|(v, _)| v).collect(), violations))
    };
    let (values, bad) = run(f, g, (Lane::F, Lane::G))?;
    let (values_star, bad_star) = run(&fs, &gs, (Lane::FStar, Lane::GStar))?;
    let original = EmpiricalDistribution::new(values, seed)?;
    let rearranged = EmpiricalDistribution::new(values_star, seed)?;
    let metadata = ReportMetadata {
        dim: n,
        n_samples,
        m_samples: Some(m_samples),
        lambda: Some(lambda),
        s_mode: "log".into(),
        seed,
        f: f.clone(),
        g: Some(g.clone()),
    };
    let mut report =
        DominanceReport::from_distributions("pl", metadata, &original, &rearranged, settings.delta, settings.grid_points)?;
    report.pl_violations = Some(PlViolations { original: bad, rearranged: bad_star });
    Ok(report)
}
