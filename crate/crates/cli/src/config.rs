use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use stochpl::dominance::{ExperimentSettings, SteinerFunctional};
use stochpl::logconcave::LogConcaveFunction;

fn default_trials() -> usize {
    2000
}

fn default_delta() -> f64 {
    0.05
}

fn default_grid() -> usize {
    200
}

fn default_steiner_trials() -> usize {
    1000
}

fn default_s() -> Vec<usize> {
    vec![1, 2]
}

fn default_mc() -> usize {
    1_000_000
}

/// Fields shared by the dominance experiments.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Banding {
    #[serde(default = "default_trials")]
    pub m: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    Groemer {
        f: LogConcaveFunction,
        #[serde(rename = "N")]
        n: usize,
        #[serde(flatten)]
        banding: Banding,
    },
    Pl {
        f: LogConcaveFunction,
        g: LogConcaveFunction,
        #[serde(rename = "N")]
        n: usize,
        #[serde(rename = "M")]
        m_samples: usize,
        lambda: f64,
        #[serde(flatten)]
        banding: Banding,
    },
    SteinerConvexity {
        functional: SteinerFunctional,
        n: usize,
        #[serde(rename = "N")]
        points: usize,
        #[serde(default = "default_steiner_trials")]
        trials: usize,
    },
    IdentitySuite {
        functions: Vec<LogConcaveFunction>,
        #[serde(default = "default_s")]
        s: Vec<usize>,
        #[serde(default = "default_mc")]
        mc_samples: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn kind(&self) -> &'static str {
        match self.experiment {
            Experiment::Groemer { .. } => "groemer",
            Experiment::Pl { .. } => "pl",
            Experiment::SteinerConvexity { .. } => "steiner-convexity",
            Experiment::IdentitySuite { .. } => "identity-suite",
        }
    }

    pub fn settings(&self, banding: &Banding) -> ExperimentSettings {
        ExperimentSettings { trials: banding.m, delta: banding.delta, grid_points: banding.grid_points, seed: self.seed }
    }

    /// Kind-specific checks that serde cannot express.
    pub fn validate(&self) -> anyhow::Result<()> {
        let need = |name: &str, count: usize, f: &LogConcaveFunction| {
            anyhow::ensure!(
                count > f.dim() + 1,
                "config: {name} = {count} must exceed n + 1 = {}",
                f.dim() + 1
            );
            Ok(())
        };
        match &self.experiment {
            Experiment::Groemer { f, n, .. } => need("N", *n, f),
            Experiment::Pl { f, g, n, m_samples, lambda, .. } => {
                anyhow::ensure!(f.dim() == g.dim(), "config: f has n = {}, g has n = {}", f.dim(), g.dim());
                anyhow::ensure!(*lambda > 0.0 && *lambda < 1.0, "config: lambda = {lambda} not in (0, 1)");
                need("N", *n, f)?;
                need("M", *m_samples, g)
            }
            Experiment::SteinerConvexity { trials, .. } => {
                anyhow::ensure!(*trials > 0, "config: trials must be positive");
                Ok(())
            }
            Experiment::IdentitySuite { functions, s, .. } => {
                anyhow::ensure!(!functions.is_empty(), "config: identity-suite needs at least one function");
                anyhow::ensure!(s.iter().all(|v| *v >= 1), "config: s values must be ≥ 1");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_groemer_with_defaults() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"kind": "groemer", "f": {"family": "gaussian", "center": [2.0], "a": 1.0}, "N": 5, "seed": 7}"#,
        )
        .unwrap();
        c.validate().unwrap();
        let Experiment::Groemer { banding, .. } = &c.experiment else { panic!() };
        assert_eq!((banding.m, banding.delta, banding.grid_points), (2000, 0.05, 200));
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn missing_field_is_line_anchored() {
        let text = "{\n  \"kind\": \"pl\",\n  \"f\": {\"family\": \"gaussian\", \"center\": [0.0], \"a\": 1.0}\n}";
        let err = serde_json::from_str::<ExperimentConfig>(text).unwrap_err();
        assert!(err.line() > 0);
        assert!(err.to_string().contains("missing field"), "{err}");
    }

    #[test]
    fn small_n_rejected() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"kind": "groemer", "f": {"family": "gaussian", "center": [0.0, 0.0], "a": 1.0}, "N": 3}"#,
        )
        .unwrap();
        assert!(c.validate().is_err());
    }
}
