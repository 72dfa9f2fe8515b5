//! Deterministic identity checks on a list of functions: revolution volume
//! against the integral, and rearrangement equimeasurability.

use serde::{Deserialize, Serialize};
use stochpl::dominance::Verdict;
use stochpl::functionals::{body_of_revolution_volume, kappa, MonteCarloConfig};
use stochpl::logconcave::{rearrange, LogConcaveFunction};

const EXACT_TOL: f64 = 1e-9;
const MC_STD_ERRORS: f64 = 3.0;
const EQUIMEASURE_TOL: f64 = 1e-4;
const INTEGRAL_TOL: f64 = 1e-3;
const LEVELS: usize = 32;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub function: usize,
    pub check: String,
    /// Relative error, or error in standard errors for Monte Carlo volumes.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub experiment: String,
    pub seed: u64,
    pub functions: Vec<LogConcaveFunction>,
    pub checks: Vec<IdentityCheck>,
    pub verdict: Verdict,
}

pub fn run_identity_suite(
    functions: &[LogConcaveFunction],
    s_values: &[usize],
    mc_samples: usize,
    seed: u64,
) -> stochpl::Result<IdentityReport> {
    let mut checks = Vec::new();
    for (k, f) in functions.iter().enumerate() {
        let integral = f.integral();
        for (j, &s) in s_values.iter().enumerate() {
            let mc = MonteCarloConfig { samples: mc_samples as u64, seed: seed.wrapping_add((k * s_values.len() + j) as u64) };
            let v = body_of_revolution_volume(f, s, &mc)?;
            let est = v.volume() / kappa(s);
            let (error, tolerance) = if v.is_exact() {
                ((est - integral).abs() / integral, EXACT_TOL)
            } else {
                ((est - integral).abs() / (v.std_error() / kappa(s)), MC_STD_ERRORS)
            };
            checks.push(IdentityCheck {
                function: k,
                check: format!("revolution-volume s={s}{}", if v.is_exact() { "" } else { " (monte carlo)" }),
                error,
                tolerance,
                pass: error <= tolerance,
            });
        }
        let star = rearrange(f)?;
        let top = f.max_value();
        let mut worst = 0.0f64;
        for l in 1..=LEVELS {
            let t = top * l as f64 / (LEVELS + 1) as f64;
            let a = f.level_set_measure(t)?;
            worst = worst.max((star.level_set_measure(t) - a).abs() / a.max(1e-300));
        }
        checks.push(IdentityCheck {
            function: k,
            check: "equimeasurability".into(),
            error: worst,
            tolerance: EQUIMEASURE_TOL,
            pass: worst <= EQUIMEASURE_TOL,
        });
        let error = (star.integral() - integral).abs() / integral;
        checks.push(IdentityCheck {
            function: k,
            check: "rearranged-integral".into(),
            error,
            tolerance: INTEGRAL_TOL,
            pass: error <= INTEGRAL_TOL,
        });
    }
    let verdict = if checks.iter().all(|c| c.pass) { Verdict::Pass } else { Verdict::Fail };
    Ok(IdentityReport { experiment: "identity-suite".into(), seed, functions: functions.to_vec(), checks, verdict })
}
