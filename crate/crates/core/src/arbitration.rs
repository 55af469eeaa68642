//! Picks the one secondary user that gets the vacant spectrum.
//!
//! Candidates are ranked by possibility (descending), then by distance to
//! the primary user (ascending), then by id. The head of the ranking wins if
//! it reaches the admission threshold; otherwise nobody does.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::FuzzyModel;
use crate::radio::{decision_possibility, Candidate, DecisionError, DecisionResult};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArbitrationError {
    #[error("no candidates submitted")]
    Empty,
    #[error("duplicate candidate id `{0}`")]
    DuplicateId(String),
    #[error("threshold {0} outside [0, 1]")]
    Threshold(String),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranked<T> {
    pub id: String,
    pub possibility: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArbitrationOutcome<T> {
    pub winner_id: Option<String>,
    pub ranking: Vec<Ranked<T>>,
    pub threshold: T,
}

/// Inclusive: a possibility equal to the threshold is admitted.
pub fn admit<T: Scalar>(result: &DecisionResult<T>, threshold: T) -> bool {
    result.possibility >= threshold
}

pub fn arbitrate<T: Scalar>(
    candidates: &[Candidate<T>],
    model: &FuzzyModel<T>,
    threshold: T,
) -> Result<ArbitrationOutcome<T>, ArbitrationError> {
    if !(threshold >= T::zero() && threshold <= T::one()) {
        return Err(ArbitrationError::Threshold(threshold.to_string()));
    }
    if candidates.is_empty() {
        return Err(ArbitrationError::Empty);
    }
    let mut ids = HashSet::new();
    for c in candidates {
        if !ids.insert(c.id.as_str()) {
            return Err(ArbitrationError::DuplicateId(c.id.clone()));
        }
    }

    let results = candidates
        .par_iter()
        .map(|c| decision_possibility(c, model, threshold, false).map(|r| (c, r)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut scored: Vec<(&Candidate<T>, DecisionResult<T>)> = results;
    scored.sort_by(|(ca, ra), (cb, rb)| {
        rb.possibility
            .partial_cmp(&ra.possibility)
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                ca.distance_m
                    .partial_cmp(&cb.distance_m)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| ca.id.cmp(&cb.id))
    });

    let winner_id = scored
        .first()
        .filter(|(_, r)| admit(r, threshold))
        .map(|(c, _)| c.id.clone());
    let ranking = scored
        .into_iter()
        .map(|(c, r)| Ranked {
            id: c.id.clone(),
            possibility: r.possibility,
        })
        .collect();
    Ok(ArbitrationOutcome {
        winner_id,
        ranking,
        threshold,
    })
}
