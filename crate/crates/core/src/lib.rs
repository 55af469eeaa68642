//! Mamdani fuzzy inference for opportunistic spectrum access.
//!
//! The [`engine`] module is a small, application-agnostic Mamdani core
//! (Gaussian terms, min implication, max aggregation, centroid
//! defuzzification) generic over the floating-point scalar. The
//! [`radio`] module builds the four-input spectrum-management model on top
//! of it, [`arbitration`] picks one secondary user out of a contending
//! batch, and [`sweep`] produces two-axis decision surfaces.
//!
//! Most callers want the `f64` aliases exported at the crate root.

// `!(a < b)` is used on purpose where NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arbitration;
pub mod candidates;
pub mod cli;
pub mod document;
pub mod engine;
pub mod radio;
pub mod sweep;

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the engine can run on: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal, panicking only for unrepresentable values.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub use arbitration::{admit, arbitrate, ArbitrationError};
pub use engine::{
    aggregate, defuzzify_centroid, firing_strength, fuzzify, gaussian_membership, infer,
    EngineError,
};
pub use radio::{
    decision_possibility, default_model, validate_model, CandidateError, DecisionError,
    ValidationReport,
};
pub use sweep::{figure_preset, run_sweep, SweepError};

pub type GaussianTerm = engine::GaussianTerm<f64>;
pub type FuzzyVariable = engine::FuzzyVariable<f64>;
pub type Rule = engine::Rule<f64>;
pub type FuzzyModel = engine::FuzzyModel<f64>;
pub type InferenceTrace = engine::InferenceTrace<f64>;
pub type Candidate = radio::Candidate<f64>;
pub type DecisionResult = radio::DecisionResult<f64>;
pub type ArbitrationOutcome = arbitration::ArbitrationOutcome<f64>;
pub type SweepSpec = sweep::SweepSpec<f64>;
pub type SweepResult = sweep::SweepResult<f64>;
