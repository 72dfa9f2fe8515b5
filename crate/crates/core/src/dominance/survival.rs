use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted per-trial values of a functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    seed: u64,
}

impl EmpiricalDistribution {
    pub fn new(mut values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empirical distribution of no values".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("NaN trial value".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, seed })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `#{v > α} / m`.
    pub fn survival(&self, alpha: f64) -> f64 {
        let at_most = self.values.partition_point(|v| *v <= alpha);
        (self.values.len() - at_most) as f64 / self.values.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Linear-interpolated quantile, `p ∈ [0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        quantile_sorted(&self.values, p)
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let k = pos.floor() as usize;
    let w = pos - k as f64;
    if k + 1 < sorted.len() {
        sorted[k] + w * (sorted[k + 1] - sorted[k])
    } else {
        sorted[k]
    }
}

/// `S(α) = #{v > α} / m` on each grid point.
pub fn empirical_survival(values: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let d = EmpiricalDistribution::new(values.to_vec(), 0)?;
    Ok(grid.iter().map(|&a| d.survival(a)).collect())
}

/// Dvoretzky–Kiefer–Wolfowitz half-width `sqrt(ln(2/δ) / (2m))`.
pub fn dkw_band(m: usize, delta: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("DKW band needs m ≥ 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} not in (0, 1)")));
    }
    Ok(((2.0 / delta).ln() / (2.0 * m as f64)).sqrt())
}

/// `points` equally spaced values between the pooled 0.5th and 99.5th
/// percentiles of both samples.
pub fn alpha_grid(a: &EmpiricalDistribution, b: &EmpiricalDistribution, points: usize) -> Vec<f64> {
    let mut pooled: Vec<f64> = a.values.iter().chain(&b.values).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let lo = quantile_sorted(&pooled, 0.005);
    let hi = quantile_sorted(&pooled, 0.995);
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_examples() {
        let s = empirical_survival(&[1.0, 2.0, 3.0], &[2.0, 0.0, 5.0]).unwrap();
        assert_eq!(s, vec![1.0 / 3.0, 1.0, 0.0]);
    }

    #[test]
    fn dkw_examples() {
        let e = dkw_band(2000, 0.05).unwrap();
        assert!((e - 0.030_37).abs() < 5e-5, "{e}");
        assert!((dkw_band(8000, 0.05).unwrap() - e / 2.0).abs() < 1e-15);
        assert!(dkw_band(10, 2.0).is_err());
        assert!(dkw_band(0, 0.5).is_err());
    }

    #[test]
    fn grid_spans_pooled_percentiles() {
        let a = EmpiricalDistribution::new((0..1000).map(f64::from).collect(), 0).unwrap();
        let b = EmpiricalDistribution::new((1000..2000).map(f64::from).collect(), 0).unwrap();
        let g = alpha_grid(&a, &b, 200);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 9.995).abs() < 1e-9 && (g[199] - 1989.005).abs() < 1e-9);
    }
}
