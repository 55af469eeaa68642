//! JSON model document and the rule-table CSV.
//!
//! The document carries the variables, the rule base by term name, and the
//! inference settings, so an alternative rule base is a data change.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{EngineError, FuzzyModel, FuzzyVariable, GaussianTerm, Rule};
use crate::radio::DEFAULT_THRESHOLD;

pub const SCHEMA_VERSION: u32 = 1;

pub const RULES_CSV_ROW_HEADER: &str = "row";
pub const RULES_CSV_WEIGHT_HEADER: &str = "weight";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {found}, expected {SCHEMA_VERSION}")]
    SchemaVersion { found: u32 },
    #[error("rule {row}: unknown term `{term}` for variable `{variable}`")]
    UnknownTerm {
        row: usize,
        variable: String,
        term: String,
    },
    #[error("rule {row}: {found} antecedents, model has {expected} inputs")]
    Arity {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("settings.threshold {0} outside [0, 1]")]
    Threshold(f64),
    #[error("rules csv line {line}: {reason}")]
    RulesCsv { line: usize, reason: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema_version: u32,
    pub variables: VariablesDoc,
    pub rules: Vec<RuleDoc>,
    pub settings: SettingsDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariablesDoc {
    pub inputs: Vec<VariableDoc>,
    pub output: VariableDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub name: String,
    pub center: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub antecedents: Vec<String>,
    pub consequent: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsDoc {
    pub grid_points: usize,
    pub threshold: f64,
}

/// A model plus the admission threshold it was shipped with.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedModel {
    pub model: FuzzyModel<f64>,
    pub threshold: f64,
}

impl LoadedModel {
    pub fn with_default_threshold(model: FuzzyModel<f64>) -> Self {
        Self {
            model,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

fn variable_doc(var: &FuzzyVariable<f64>) -> VariableDoc {
    VariableDoc {
        name: var.name().to_string(),
        lo: var.lo(),
        hi: var.hi(),
        terms: var
            .terms()
            .iter()
            .map(|t| TermDoc {
                name: t.name().to_string(),
                center: t.center(),
                sigma: t.sigma(),
            })
            .collect(),
    }
}

fn build_variable(doc: &VariableDoc) -> Result<FuzzyVariable<f64>, EngineError> {
    let terms = doc
        .terms
        .iter()
        .map(|t| GaussianTerm::new(t.name.clone(), t.center, t.sigma))
        .collect::<Result<Vec<_>, _>>()?;
    FuzzyVariable::new(doc.name.clone(), doc.lo, doc.hi, terms)
}

fn term_index(var: &FuzzyVariable<f64>, row: usize, name: &str) -> Result<usize, DocumentError> {
    var.term_index(name)
        .ok_or_else(|| DocumentError::UnknownTerm {
            row,
            variable: var.name().to_string(),
            term: name.to_string(),
        })
}

impl ModelDocument {
    pub fn from_model(model: &FuzzyModel<f64>, threshold: f64) -> Self {
        let rules = model
            .rules()
            .iter()
            .map(|r| RuleDoc {
                antecedents: model
                    .inputs()
                    .iter()
                    .zip(&r.antecedents)
                    .map(|(v, &t)| v.terms()[t].name().to_string())
                    .collect(),
                consequent: model.output().terms()[r.consequent].name().to_string(),
                weight: r.weight,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            variables: VariablesDoc {
                inputs: model.inputs().iter().map(variable_doc).collect(),
                output: variable_doc(model.output()),
            },
            rules,
            settings: SettingsDoc {
                grid_points: model.grid_points(),
                threshold,
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn into_model(self) -> Result<LoadedModel, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::SchemaVersion {
                found: self.schema_version,
            });
        }
        let threshold = self.settings.threshold;
        if !(0.0..=1.0).contains(&threshold) {
            return Err(DocumentError::Threshold(threshold));
        }
        let inputs = self
            .variables
            .inputs
            .iter()
            .map(build_variable)
            .collect::<Result<Vec<_>, _>>()?;
        let output = build_variable(&self.variables.output)?;
        let mut rules = Vec::with_capacity(self.rules.len());
        for (i, r) in self.rules.iter().enumerate() {
            let row = i + 1;
            if r.antecedents.len() != inputs.len() {
                return Err(DocumentError::Arity {
                    row,
                    found: r.antecedents.len(),
                    expected: inputs.len(),
                });
            }
            let antecedents = inputs
                .iter()
                .zip(&r.antecedents)
                .map(|(v, name)| term_index(v, row, name))
                .collect::<Result<Vec<_>, _>>()?;
            let consequent = term_index(&output, row, &r.consequent)?;
            rules.push(Rule::new(antecedents, consequent, r.weight));
        }
        let model = FuzzyModel::new(inputs, output, rules, self.settings.grid_points)?;
        Ok(LoadedModel { model, threshold })
    }
}

pub fn load_model(text: &str) -> Result<LoadedModel, DocumentError> {
    ModelDocument::parse(text)?.into_model()
}

/// `row,<input names...>,<output name>,weight` followed by one line per rule.
pub fn rules_to_csv(model: &FuzzyModel<f64>) -> String {
    let mut out = String::from(RULES_CSV_ROW_HEADER);
    for v in model.inputs().iter().chain([model.output()]) {
        out.push(',');
        out.push_str(v.name());
    }
    out.push(',');
    out.push_str(RULES_CSV_WEIGHT_HEADER);
    out.push('\n');
    for (i, r) in model.rules().iter().enumerate() {
        out.push_str(&(i + 1).to_string());
        for (v, &t) in model.inputs().iter().zip(&r.antecedents) {
            out.push(',');
            out.push_str(v.terms()[t].name());
        }
        out.push(',');
        out.push_str(model.output().terms()[r.consequent].name());
        out.push_str(&format!(",{:.6}\n", r.weight));
    }
    out
}

/// Reads a rule table written by [`rules_to_csv`] against the variables of
/// `model`. Rows must be numbered 1, 2, 3, ... in order.
pub fn rules_from_csv(
    text: &str,
    model: &FuzzyModel<f64>,
) -> Result<Vec<Rule<f64>>, DocumentError> {
    let err = |line: usize, reason: String| DocumentError::RulesCsv { line, reason };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let expected_header = rules_to_csv_header(model);
    match lines.next() {
        Some((_, h)) if h == expected_header => {}
        Some((n, h)) => {
            return Err(err(
                n,
                format!("header `{h}`, expected `{expected_header}`"),
            ))
        }
        None => return Err(err(1, "missing header".into())),
    }
    let mut rules = Vec::new();
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let want = model.inputs().len() + 3;
        if cells.len() != want {
            return Err(err(n, format!("{} fields, expected {want}", cells.len())));
        }
        let row: usize = cells[0]
            .parse()
            .map_err(|_| err(n, format!("row number `{}` is not an integer", cells[0])))?;
        if row != rules.len() + 1 {
            return Err(err(n, format!("row {row} out of sequence")));
        }
        let antecedents = model
            .inputs()
            .iter()
            .zip(&cells[1..=model.inputs().len()])
            .map(|(v, name)| term_index(v, row, name))
            .collect::<Result<Vec<_>, _>>()?;
        let consequent = term_index(model.output(), row, cells[want - 2])?;
        let weight: f64 = cells[want - 1]
            .parse()
            .map_err(|_| err(n, format!("weight `{}` is not a number", cells[want - 1])))?;
        rules.push(Rule::new(antecedents, consequent, weight));
    }
    Ok(rules)
}

fn rules_to_csv_header(model: &FuzzyModel<f64>) -> String {
    let mut cols = vec![RULES_CSV_ROW_HEADER.to_string()];
    cols.extend(
        model
            .inputs()
            .iter()
            .chain([model.output()])
            .map(|v| v.name().to_string()),
    );
    cols.push(RULES_CSV_WEIGHT_HEADER.into());
    cols.join(",")
}
