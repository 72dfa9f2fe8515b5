//! The stochastic model: uniform samples under the graph of `f` and the
//! random envelopes `[f]_N` and `[f]_{N,s}` built from them.

mod envelope;
mod sampler;

pub(crate) use sampler::sample_with_rng;

pub use envelope::{random_envelope, random_envelope_s, SEnvelope};
pub use sampler::{
    read_samples_csv, sample_under_graph, stream_rng, write_samples_csv, GraphSample, Lane,
    SampleConfig, DEFAULT_MAX_ATTEMPTS, MIN_ACCEPTANCE,
};
