//! Volumes of unit balls, `κ_s = π^{s/2} / Γ(s/2 + 1)`.

use serde::{Deserialize, Serialize};

/// `κ_s` for integer `s ≥ 0` via `κ_s = κ_{s-2} · 2π / s`, seeded with
/// `κ_0 = 1`, `κ_1 = 2`. Exact at `s = 1, 2`.
pub fn kappa(s: usize) -> f64 {
    match s {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => kappa(s - 2) * 2.0 * std::f64::consts::PI / s as f64,
    }
}

/// Precomputed `κ_1 ..= κ_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaTable {
    values: Vec<f64>,
}

impl KappaTable {
    pub fn new(max: usize) -> Self {
        Self { values: (0..=max).map(kappa).collect() }
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }

    /// `None` beyond the tabulated range.
    pub fn get(&self, s: usize) -> Option<f64> {
        self.values.get(s).copied()
    }
}
