//! Random log-concave envelopes built from uniform samples under a graph,
//! exact sup-convolutions and rearrangements for polytopal envelopes, and
//! Monte Carlo experiments comparing a function with its symmetric decreasing
//! rearrangement.

pub mod dominance;
pub mod error;
pub mod functionals;
pub mod geometry;
pub mod logconcave;
pub mod numeric;
pub mod stochastic;

pub use error::{Error, Result};
