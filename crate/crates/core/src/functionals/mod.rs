//! Functional operations: sup-convolutions, s-homotheties and s-sums, bodies
//! of revolution, and the Groemer and M-addition functionals.

mod kappa;
mod ops;
mod optimize;
mod supconv;
mod volume;

pub(crate) use supconv::check_lambda;
pub use kappa::{kappa, KappaTable};
pub use supconv::{
    polytopal_envelope, sup_convolution, sup_convolution_oracle, ORACLE_RESOLUTION,
    SUPCONV_NODES_1D, SUPCONV_NODES_2D,
};
pub use ops::{s_homothety, s_minkowski_sum, s_sup_convolution, SHomothety, SMinkowskiSum};
pub use volume::{
    body_of_revolution_volume, groemer_functional, m_addition_functional,
    monte_carlo_revolution_volume, MonteCarloConfig, RevolutionVolume, DEFAULT_MC_SAMPLES,
};
