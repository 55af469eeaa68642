//! Generic Mamdani fuzzy-inference core.
//!
//! The pipeline is fuzzify, fire, aggregate, defuzzify. Every stage is a
//! free function so it can be exercised on its own; [`infer`] composes them
//! and keeps the intermediates in an [`InferenceTrace`].

mod error;
mod inference;
mod membership;
mod model;

pub use error::EngineError;
pub use inference::{aggregate, defuzzify_centroid, firing_strength, infer, InferenceTrace};
pub use membership::{fuzzify, gaussian_membership, FuzzyVariable, GaussianTerm};
pub(crate) use model::linspace;
pub use model::{FuzzyModel, Rule, DEFAULT_GRID_POINTS};
