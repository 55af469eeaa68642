use super::{EngineError, FuzzyVariable};
use crate::Scalar;

/// Output-universe samples used for defuzzification unless overridden.
pub const DEFAULT_GRID_POINTS: usize = 1001;

/// One rule: an antecedent term index per input variable and a consequent
/// term index into the output variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub antecedents: Vec<usize>,
    pub consequent: usize,
    pub weight: T,
}

impl<T: Scalar> Rule<T> {
    pub fn new(antecedents: Vec<usize>, consequent: usize, weight: T) -> Self {
        Self {
            antecedents,
            consequent,
            weight,
        }
    }
}

/// Immutable Mamdani model: inputs, output, rule base and output grid size.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyModel<T> {
    inputs: Vec<FuzzyVariable<T>>,
    output: FuzzyVariable<T>,
    rules: Vec<Rule<T>>,
    grid_points: usize,
}

impl<T: Scalar> FuzzyModel<T> {
    pub fn new(
        inputs: Vec<FuzzyVariable<T>>,
        output: FuzzyVariable<T>,
        rules: Vec<Rule<T>>,
        grid_points: usize,
    ) -> Result<Self, EngineError> {
        if inputs.is_empty() {
            return Err(EngineError::ModelIntegrity(
                "model has no input variables".into(),
            ));
        }
        if grid_points < 2 {
            return Err(EngineError::ModelIntegrity(format!(
                "grid_points must be at least 2, got {grid_points}"
            )));
        }
        for (i, rule) in rules.iter().enumerate() {
            check_rule(i, rule, &inputs, &output)?;
        }
        Ok(Self {
            inputs,
            output,
            rules,
            grid_points,
        })
    }

    pub fn inputs(&self) -> &[FuzzyVariable<T>] {
        &self.inputs
    }

    pub fn output(&self) -> &FuzzyVariable<T> {
        &self.output
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|v| v.name() == name)
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Result<Self, EngineError> {
        if grid_points < 2 {
            return Err(EngineError::ModelIntegrity(format!(
                "grid_points must be at least 2, got {grid_points}"
            )));
        }
        self.grid_points = grid_points;
        Ok(self)
    }

    pub fn with_rules(self, rules: Vec<Rule<T>>) -> Result<Self, EngineError> {
        Self::new(self.inputs, self.output, rules, self.grid_points)
    }

    /// Equally spaced output samples over `[output.lo, output.hi]`, both ends
    /// inclusive. The last sample is pinned to `hi`.
    pub fn output_grid(&self) -> Vec<T> {
        linspace(self.output.lo(), self.output.hi(), self.grid_points)
    }
}

pub(crate) fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_usize(n - 1).expect("grid size fits scalar");
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + step * T::from_usize(i).expect("grid index fits scalar")
            }
        })
        .collect()
}

fn check_rule<T: Scalar>(
    index: usize,
    rule: &Rule<T>,
    inputs: &[FuzzyVariable<T>],
    output: &FuzzyVariable<T>,
) -> Result<(), EngineError> {
    let row = index + 1;
    if rule.antecedents.len() != inputs.len() {
        return Err(EngineError::ModelIntegrity(format!(
            "rule {row} has {} antecedents, model has {} inputs",
            rule.antecedents.len(),
            inputs.len()
        )));
    }
    for (var, &term) in inputs.iter().zip(&rule.antecedents) {
        if term >= var.terms().len() {
            return Err(EngineError::ModelIntegrity(format!(
                "rule {row}: term index {term} out of range for `{}`",
                var.name()
            )));
        }
    }
    if rule.consequent >= output.terms().len() {
        return Err(EngineError::ModelIntegrity(format!(
            "rule {row}: consequent index {} out of range for `{}`",
            rule.consequent,
            output.name()
        )));
    }
    if !(rule.weight >= T::zero() && rule.weight <= T::one()) {
        return Err(EngineError::ModelIntegrity(format!(
            "rule {row}: weight {} outside [0, 1]",
            rule.weight
        )));
    }
    Ok(())
}
