//! Monte Carlo dominance experiments: paired survival functions with DKW
//! bands, and the Steiner-convexity property tester.

mod experiments;
mod report;
mod steiner;
mod survival;

pub use experiments::{
    envelope_integral, pl_trial, run_groemer_experiment, run_pl_experiment, ExperimentSettings, PL_TOLERANCE,
};
pub use report::{DominanceReport, PlViolations, ReportMetadata, Verdict};
pub use steiner::{check_steiner_convexity, SteinerConvexityReport, SteinerFunctional, STEINER_TOLERANCE};
pub use survival::{alpha_grid, dkw_band, empirical_survival, EmpiricalDistribution};
