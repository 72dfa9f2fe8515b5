//! Exact low-dimensional convex geometry: hulls, upper envelopes, Minkowski
//! combinations, Steiner symmetrization and ball-hull bodies.

mod ball_hull;
mod envelope;
pub(crate) mod hull;
mod polytope;
mod steiner;

pub use ball_hull::{ball_hull_volume, BallHullBody, CoefficientBody};
pub use envelope::{minkowski_combine, upper_envelope, EnvelopeCell, UpperEnvelope};
pub use polytope::{convex_hull, volume, Facet, Polytope, MEMBERSHIP_TOL};
pub use steiner::steiner_symmetrize;

pub(crate) use steiner::orthonormal_complement;
