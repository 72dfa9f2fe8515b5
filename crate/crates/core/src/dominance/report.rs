use std::io::Write;

use serde::{Deserialize, Serialize};

use super::survival::{alpha_grid, dkw_band, EmpiricalDistribution};
use crate::error::Result;
use crate::logconcave::LogConcaveFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Parameters of the run that produced a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub dim: usize,
    /// `N`, samples per envelope of `f`.
    pub n_samples: usize,
    /// `M`, samples per envelope of `g` (Prékopa–Leindler runs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Envelope construction: `log` is `[f]_N` itself.
    pub s_mode: String,
    pub seed: u64,
    pub f: LogConcaveFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<LogConcaveFunction>,
}

/// Per-trial Prékopa–Leindler violations, `∫(a ⋆_λ b) < (∫a)^λ (∫b)^{1-λ} - 1e-9`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlViolations {
    pub original: u64,
    pub rearranged: u64,
}

/// Paired survival functions `S` (original) and `S*` (rearranged) with a
/// DKW band; the verdict is `pass` iff `S - S* + 2ε ≥ 0` on the whole grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub experiment: String,
    pub metadata: ReportMetadata,
    pub trials: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: Vec<f64>,
    pub survival: Vec<f64>,
    pub survival_star: Vec<f64>,
    pub margin: Vec<f64>,
    pub min_margin: f64,
    /// `max(S* - S) - 2ε`; positive means the rearranged side dominates
    /// beyond the band somewhere.
    pub reverse_excess: f64,
    /// Fraction of grid points with `S ≥ S*` without any band.
    pub strict_fraction: f64,
    pub mean: f64,
    pub mean_star: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pl_violations: Option<PlViolations>,
    pub verdict: Verdict,
}

impl DominanceReport {
    pub fn from_distributions(
        experiment: &str,
        metadata: ReportMetadata,
        original: &EmpiricalDistribution,
        rearranged: &EmpiricalDistribution,
        delta: f64,
        grid_points: usize,
    ) -> Result<Self> {
        let m = original.len().min(rearranged.len());
        let epsilon = dkw_band(m, delta)?;
        let alpha = alpha_grid(original, rearranged, grid_points);
        let survival: Vec<f64> = alpha.iter().map(|&a| original.survival(a)).collect();
        let survival_star: Vec<f64> = alpha.iter().map(|&a| rearranged.survival(a)).collect();
        let margin: Vec<f64> = survival
            .iter()
            .zip(&survival_star)
            .map(|(s, t)| s - t + 2.0 * epsilon)
            .collect();
        let min_margin = margin.iter().copied().fold(f64::INFINITY, f64::min);
        let reverse_excess = survival
            .iter()
            .zip(&survival_star)
            .map(|(s, t)| t - s)
            .fold(f64::NEG_INFINITY, f64::max)
            - 2.0 * epsilon;
        let strict_fraction = survival.iter().zip(&survival_star).filter(|(s, t)| s >= t).count() as f64
            / alpha.len().max(1) as f64;
        let verdict = if margin.iter().all(|m| *m >= 0.0) { Verdict::Pass } else { Verdict::Fail };
        Ok(Self {
            experiment: experiment.to_string(),
            metadata,
            trials: m,
            delta,
            epsilon,
            alpha,
            survival,
            survival_star,
            margin,
            min_margin,
            reverse_excess,
            strict_fraction,
            mean: original.mean(),
            mean_star: rearranged.mean(),
            pl_violations: None,
            verdict,
        })
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `|S - S*| ≤ 2ε` everywhere: no dominance either way beyond the band.
    pub fn within_band(&self) -> bool {
        self.survival
            .iter()
            .zip(&self.survival_star)
            .all(|(s, t)| (s - t).abs() <= 2.0 * self.epsilon)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Columns `alpha, S, S_star, margin`, one row per grid point.
    pub fn write_survival_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["alpha", "S", "S_star", "margin"])?;
        for k in 0..self.alpha.len() {
            out.write_record([
                self.alpha[k].to_string(),
                self.survival[k].to_string(),
                self.survival_star[k].to_string(),
                self.margin[k].to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> ReportMetadata {
        ReportMetadata {
            dim: 1,
            n_samples: 5,
            m_samples: None,
            lambda: None,
            s_mode: "log".into(),
            seed: 0,
            f: LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap(),
            g: None,
        }
    }

    #[test]
    fn shifted_values_fail_and_pass() {
        let low = EmpiricalDistribution::new((0..500).map(|k| k as f64).collect(), 0).unwrap();
        let high = EmpiricalDistribution::new((0..500).map(|k| k as f64 + 100.0).collect(), 0).unwrap();
        let up = DominanceReport::from_distributions("t", meta(), &high, &low, 0.05, 200).unwrap();
        assert_eq!(up.verdict, Verdict::Pass);
        assert!(!up.within_band());
        let down = DominanceReport::from_distributions("t", meta(), &low, &high, 0.05, 200).unwrap();
        assert_eq!(down.verdict, Verdict::Fail);
        let mut buf = Vec::new();
        up.write_survival_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 201);
    }
}
