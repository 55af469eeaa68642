//! The four-input spectrum-access model: Gaussian Low/Medium/High terms
//! over signal strength, velocity, spectrum ratio and distance, and the
//! 81-row rule base.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::engine::{
    infer, EngineError, FuzzyModel, FuzzyVariable, GaussianTerm, InferenceTrace, Rule,
};
use crate::Scalar;

pub const SIGNAL: &str = "signal_dbm";
pub const VELOCITY: &str = "velocity_kmh";
pub const RATIO: &str = "spectrum_ratio";
pub const DISTANCE: &str = "distance_m";
pub const DECISION: &str = "decision";

/// Input variable names in rule-column order.
pub const INPUT_NAMES: [&str; 4] = [SIGNAL, VELOCITY, RATIO, DISTANCE];

/// Universe bounds `(lo, hi)` for each input, in [`INPUT_NAMES`] order.
pub const INPUT_UNIVERSES: [(f64, f64); 4] =
    [(-100.0, -20.0), (0.0, 100.0), (0.0, 1.0), (0.0, 100.0)];
pub const DECISION_UNIVERSE: (f64, f64) = (0.0, 1.0);

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Low => "Low",
            Level::Medium => "Medium",
            Level::High => "High",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use Level::{High as H, Low as L, Medium as M};

/// Signal, velocity, spectrum ratio, distance, then decision. Row `i` of the
/// table is `RULE_TABLE[i - 1]`.
#[rustfmt::skip]
pub const RULE_TABLE: [[Level; 5]; 81] = [
    [L, L, L, L, H], // 1
    [L, L, L, M, H], // 2
    [L, L, L, H, M], // 3
    [L, L, M, L, H], // 4
    [L, L, M, M, H], // 5
    [L, L, M, H, M], // 6
    [L, L, H, L, M], // 7
    [L, L, H, M, M], // 8
    [L, L, H, H, L], // 9
    [L, M, L, L, H], // 10
    [L, M, L, M, H], // 11
    [L, M, L, H, L], // 12
    [L, M, M, L, H], // 13
    [L, M, M, M, H], // 14
    [L, M, M, H, M], // 15
    [L, M, H, L, M], // 16
    [L, M, H, M, L], // 17
    [L, M, H, H, L], // 18
    [L, H, L, L, H], // 19
    [L, H, L, M, H], // 20
    [L, H, L, H, H], // 21
    [L, H, M, L, H], // 22
    [L, H, M, M, H], // 23
    [L, H, M, H, H], // 24
    [L, H, H, L, H], // 25
    [L, H, H, M, M], // 26
    [L, H, H, H, M], // 27
    [M, L, L, L, H], // 28
    [M, L, L, M, M], // 29
    [M, L, L, H, M], // 30
    [M, L, M, L, M], // 31
    [M, L, M, M, M], // 32
    [M, L, M, H, M], // 33
    [M, L, H, L, M], // 34
    [M, L, H, M, M], // 35
    [M, L, H, H, M], // 36
    [M, M, L, L, M], // 37
    [M, M, L, M, M], // 38
    [M, M, L, H, M], // 39
    [M, M, M, L, M], // 40
    [M, M, M, M, M], // 41
    [M, M, M, H, M], // 42
    [M, M, H, L, M], // 43
    [M, M, H, M, M], // 44
    [M, M, H, H, M], // 45
    [M, H, L, L, H], // 46
    [M, H, L, M, H], // 47
    [M, H, L, H, M], // 48
    [M, H, M, L, H], // 49
    [M, H, M, M, H], // 50
    [M, H, M, H, M], // 51
    [M, H, H, L, M], // 52
    [M, H, H, M, M], // 53
    [M, H, H, H, M], // 54
    [H, L, L, L, L], // 55
    [H, L, L, M, L], // 56
    [H, L, L, H, L], // 57
    [H, L, M, L, L], // 58
    [H, L, M, M, L], // 59
    [H, L, M, H, L], // 60
    [H, L, H, L, L], // 61
    [H, L, H, M, L], // 62
    [H, L, H, H, L], // 63
    [H, M, L, L, L], // 64
    [H, M, L, M, L], // 65
    [H, M, L, H, L], // 66
    [H, M, M, L, L], // 67
    [H, M, M, M, L], // 68
    [H, M, M, H, L], // 69
    [H, M, H, L, L], // 70
    [H, M, H, M, L], // 71
    [H, M, H, H, L], // 72
    [H, H, L, L, L], // 73
    [H, H, L, M, L], // 74
    [H, H, L, H, L], // 75
    [H, H, M, L, L], // 76
    [H, H, M, M, L], // 77
    [H, H, M, H, L], // 78
    [H, H, H, L, L], // 79
    [H, H, H, M, L], // 80
    [H, H, H, H, L], // 81
];

/// Sigma that makes neighbouring terms `spacing` apart cross at exactly 0.5.
pub fn half_crossing_sigma<T: Scalar>(spacing: T) -> T {
    let two = T::lit(2.0);
    spacing / (two * (two * two.ln()).sqrt())
}

fn three_term_variable<T: Scalar>(name: &str, lo: f64, hi: f64) -> FuzzyVariable<T> {
    let (lo, hi) = (T::lit(lo), T::lit(hi));
    let mid = (lo + hi) / T::lit(2.0);
    let sigma = half_crossing_sigma(mid - lo);
    let terms = [lo, mid, hi]
        .into_iter()
        .zip(Level::ALL)
        .map(|(c, level)| GaussianTerm::new(level.name(), c, sigma).expect("positive sigma"))
        .collect();
    FuzzyVariable::new(name, lo, hi, terms).expect("well-formed default variable")
}

/// The spectrum-access model with every rule weight at 1.
pub fn default_model<T: Scalar>() -> FuzzyModel<T> {
    let inputs = INPUT_NAMES
        .iter()
        .zip(INPUT_UNIVERSES)
        .map(|(name, (lo, hi))| three_term_variable(name, lo, hi))
        .collect();
    let output = three_term_variable(DECISION, DECISION_UNIVERSE.0, DECISION_UNIVERSE.1);
    let rules = RULE_TABLE
        .iter()
        .map(|row| {
            Rule::new(
                row[..4].iter().map(|l| l.index()).collect(),
                row[4].index(),
                T::one(),
            )
        })
        .collect();
    FuzzyModel::new(inputs, output, rules, crate::engine::DEFAULT_GRID_POINTS)
        .expect("well-formed default model")
}

/// `"Medium, High, Low, Low → High"` for a rule of `model`.
pub fn rule_label<T: Scalar>(model: &FuzzyModel<T>, rule: &Rule<T>) -> String {
    let ante: Vec<&str> = model
        .inputs()
        .iter()
        .zip(&rule.antecedents)
        .map(|(v, &t)| v.terms()[t].name())
        .collect();
    format!(
        "{} → {}",
        ante.join(", "),
        model.output().terms()[rule.consequent].name()
    )
}

/// One secondary user's measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub id: String,
    pub signal_dbm: T,
    pub velocity_kmh: T,
    pub spectrum_ratio: T,
    pub distance_m: T,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CandidateError {
    #[error("candidate id is empty")]
    EmptyId,
    #[error("candidate `{id}`: {field} = {value} is not finite")]
    NonFinite {
        id: String,
        field: &'static str,
        value: String,
    },
    #[error("candidate `{id}`: {field} = {value} must be non-negative")]
    Negative {
        id: String,
        field: &'static str,
        value: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Candidate(#[from] CandidateError),
    #[error("model has no input variable `{0}`")]
    MissingVariable(&'static str),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl<T: Scalar> Candidate<T> {
    pub fn new(
        id: impl Into<String>,
        signal_dbm: T,
        velocity_kmh: T,
        spectrum_ratio: T,
        distance_m: T,
    ) -> Self {
        Self {
            id: id.into(),
            signal_dbm,
            velocity_kmh,
            spectrum_ratio,
            distance_m,
        }
    }

    /// Values in [`INPUT_NAMES`] order.
    pub fn values(&self) -> [T; 4] {
        [
            self.signal_dbm,
            self.velocity_kmh,
            self.spectrum_ratio,
            self.distance_m,
        ]
    }

    pub fn validate(&self) -> Result<(), CandidateError> {
        if self.id.is_empty() {
            return Err(CandidateError::EmptyId);
        }
        for (field, value) in INPUT_NAMES.iter().zip(self.values()) {
            if !value.is_finite() {
                return Err(CandidateError::NonFinite {
                    id: self.id.clone(),
                    field,
                    value: value.to_string(),
                });
            }
            if *field != SIGNAL && value < T::zero() {
                return Err(CandidateError::Negative {
                    id: self.id.clone(),
                    field,
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionResult<T> {
    pub candidate_id: String,
    pub possibility: T,
    pub admitted: bool,
    pub trace: Option<InferenceTrace<T>>,
}

/// Places the candidate's values at the positions of the named inputs of
/// `model`, so models that list the variables in another order still work.
pub fn model_inputs<T: Scalar>(
    model: &FuzzyModel<T>,
    candidate: &Candidate<T>,
) -> Result<Vec<T>, DecisionError> {
    if model.inputs().len() != INPUT_NAMES.len() {
        return Err(EngineError::InvalidInput(format!(
            "spectrum model needs {} inputs, model has {}",
            INPUT_NAMES.len(),
            model.inputs().len()
        ))
        .into());
    }
    let mut out = vec![T::zero(); INPUT_NAMES.len()];
    for (name, value) in INPUT_NAMES.iter().zip(candidate.values()) {
        let idx = model
            .input_index(name)
            .ok_or(DecisionError::MissingVariable(name))?;
        out[idx] = value;
    }
    Ok(out)
}

/// Crisp access possibility for one candidate, admitted when it reaches
/// `threshold`.
pub fn decision_possibility<T: Scalar>(
    candidate: &Candidate<T>,
    model: &FuzzyModel<T>,
    threshold: T,
    with_trace: bool,
) -> Result<DecisionResult<T>, DecisionError> {
    candidate.validate()?;
    let trace = infer(model, &model_inputs(model, candidate)?)?;
    let possibility = trace.crisp_output;
    Ok(DecisionResult {
        candidate_id: candidate.id.clone(),
        possibility,
        admitted: possibility >= threshold,
        trace: with_trace.then_some(trace),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationFailure {
    RuleCount {
        expected: usize,
        found: usize,
    },
    DuplicateCombination {
        combination: String,
        rows: Vec<usize>,
    },
    MissingCombination {
        combination: String,
    },
    Weight {
        row: usize,
        weight: f64,
    },
    CenterOrder {
        variable: String,
    },
    DegenerateUniverse {
        variable: String,
    },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RuleCount { expected, found } => {
                write!(
                    f,
                    "rule count {found}, expected {expected} (one per antecedent combination)"
                )
            }
            Self::DuplicateCombination { combination, rows } => {
                let rows: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
                write!(
                    f,
                    "duplicate combination ({combination}) at rules {}",
                    rows.join(", ")
                )
            }
            Self::MissingCombination { combination } => {
                write!(f, "missing combination ({combination})")
            }
            Self::Weight { row, weight } => write!(f, "rule {row}: weight {weight} differs from 1"),
            Self::CenterOrder { variable } => write!(
                f,
                "variable `{variable}`: term centers not strictly increasing"
            ),
            Self::DegenerateUniverse { variable } => {
                write!(f, "variable `{variable}`: degenerate universe")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub rule_count: usize,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the rule base is a complete, weight-1 table over every antecedent
/// combination and that each variable is well ordered.
pub fn validate_model<T: Scalar>(model: &FuzzyModel<T>) -> ValidationReport {
    let mut failures = Vec::new();
    for var in model.inputs().iter().chain(std::iter::once(model.output())) {
        if !(var.lo() < var.hi()) {
            failures.push(ValidationFailure::DegenerateUniverse {
                variable: var.name().into(),
            });
        }
        if var
            .terms()
            .windows(2)
            .any(|w| !(w[0].center() < w[1].center()))
        {
            failures.push(ValidationFailure::CenterOrder {
                variable: var.name().into(),
            });
        }
    }

    let expected: usize = model.inputs().iter().map(|v| v.terms().len()).product();
    let found = model.rules().len();
    if found != expected {
        failures.push(ValidationFailure::RuleCount { expected, found });
    }

    let label = |combo: &[usize]| -> String {
        model
            .inputs()
            .iter()
            .zip(combo)
            .map(|(v, &t)| v.terms()[t].name())
            .collect::<Vec<_>>()
            .join(", ")
    };

    let mut rows_by_combo: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
    for (i, rule) in model.rules().iter().enumerate() {
        rows_by_combo
            .entry(&rule.antecedents)
            .or_default()
            .push(i + 1);
    }
    for (combo, rows) in &rows_by_combo {
        if rows.len() > 1 {
            failures.push(ValidationFailure::DuplicateCombination {
                combination: label(combo),
                rows: rows.clone(),
            });
        }
    }

    let radices: Vec<usize> = model.inputs().iter().map(|v| v.terms().len()).collect();
    let mut combo = vec![0usize; radices.len()];
    for _ in 0..expected {
        if !rows_by_combo.contains_key(combo.as_slice()) {
            failures.push(ValidationFailure::MissingCombination {
                combination: label(&combo),
            });
        }
        for pos in (0..combo.len()).rev() {
            combo[pos] += 1;
            if combo[pos] < radices[pos] {
                break;
            }
            combo[pos] = 0;
        }
    }

    for (i, rule) in model.rules().iter().enumerate() {
        if rule.weight != T::one() {
            failures.push(ValidationFailure::Weight {
                row: i + 1,
                weight: rule.weight.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    ValidationReport {
        rule_count: found,
        failures,
    }
}
