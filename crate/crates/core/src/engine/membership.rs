use std::collections::HashSet;

use super::EngineError;
use crate::Scalar;

/// One linguistic term with a Gaussian membership function.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTerm<T> {
    name: String,
    center: T,
    sigma: T,
}

impl<T: Scalar> GaussianTerm<T> {
    pub fn new(name: impl Into<String>, center: T, sigma: T) -> Result<Self, EngineError> {
        let name = name.into();
        if !center.is_finite() {
            return Err(EngineError::InvalidTerm {
                term: name,
                reason: "center must be finite".into(),
            });
        }
        if !sigma.is_finite() || sigma <= T::zero() {
            return Err(EngineError::InvalidTerm {
                term: name,
                reason: format!("sigma must be finite and positive, got {sigma}"),
            });
        }
        Ok(Self {
            name,
            center,
            sigma,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn membership(&self, x: T) -> T {
        gaussian_membership(x, self)
    }
}

/// `exp(-(x - center)^2 / (2 sigma^2))`.
///
/// Depends on `x` only through the squared offset, so mirrored offsets give
/// bit-identical degrees.
pub fn gaussian_membership<T: Scalar>(x: T, term: &GaussianTerm<T>) -> T {
    let d = x - term.center;
    let two = T::one() + T::one();
    (-(d * d) / (two * term.sigma * term.sigma)).exp()
}

/// A named variable over a bounded universe with ordered terms.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable<T> {
    name: String,
    lo: T,
    hi: T,
    terms: Vec<GaussianTerm<T>>,
}

impl<T: Scalar> FuzzyVariable<T> {
    /// Checks the universe is non-degenerate and the terms are non-empty,
    /// uniquely named, inside the universe, and strictly increasing by center.
    pub fn new(
        name: impl Into<String>,
        lo: T,
        hi: T,
        terms: Vec<GaussianTerm<T>>,
    ) -> Result<Self, EngineError> {
        let name = name.into();
        let fail = |reason: String| EngineError::InvalidVariable {
            variable: name.clone(),
            reason,
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(fail(format!("universe [{lo}, {hi}] is degenerate")));
        }
        if terms.is_empty() {
            return Err(fail("no terms".into()));
        }
        let mut seen = HashSet::new();
        for term in &terms {
            if !seen.insert(term.name()) {
                return Err(fail(format!("duplicate term name `{}`", term.name())));
            }
            if term.center < lo || term.center > hi {
                return Err(fail(format!(
                    "term `{}` center {} lies outside [{lo}, {hi}]",
                    term.name(),
                    term.center
                )));
            }
        }
        for pair in terms.windows(2) {
            if pair[1].center <= pair[0].center {
                return Err(fail(format!(
                    "term centers not strictly increasing at `{}`",
                    pair[1].name()
                )));
            }
        }
        Ok(Self {
            name,
            lo,
            hi,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn terms(&self) -> &[GaussianTerm<T>] {
        &self.terms
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name() == name)
    }

    pub fn clamp(&self, x: T) -> T {
        x.max(self.lo).min(self.hi)
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Degree of every term of `var` at `x`, in term order.
///
/// Does not clamp; [`super::infer`] clamps before calling this.
pub fn fuzzify<T: Scalar>(var: &FuzzyVariable<T>, x: T) -> Result<Vec<T>, EngineError> {
    if !x.is_finite() {
        return Err(EngineError::InvalidInput(format!(
            "value {x} for `{}` is not finite",
            var.name
        )));
    }
    Ok(var
        .terms
        .iter()
        .map(|t| gaussian_membership(x, t))
        .collect())
}
