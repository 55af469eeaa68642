//! Two-axis decision surfaces with the remaining inputs held fixed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{infer, EngineError, FuzzyModel};
use crate::radio::{DISTANCE, INPUT_NAMES, INPUT_UNIVERSES, RATIO, SIGNAL, VELOCITY};
use crate::Scalar;

pub const PRESET_STEPS: usize = 41;
pub const FIGURES: [u8; 5] = [7, 8, 9, 10, 11];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("axis `{name}` range [{lo}, {hi}] leaves the universe [{ulo}, {uhi}]")]
    OutOfUniverse {
        name: String,
        lo: String,
        hi: String,
        ulo: String,
        uhi: String,
    },
    #[error("fixed value {value} for `{name}` leaves the universe [{ulo}, {uhi}]")]
    FixedOutOfUniverse {
        name: String,
        value: String,
        ulo: String,
        uhi: String,
    },
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("no preset for figure {0}; expected one of 7, 8, 9, 10, 11")]
    UnknownFigure(u8),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis<T> {
    pub variable: String,
    pub lo: T,
    pub hi: T,
    pub steps: usize,
}

impl<T: Scalar> Axis<T> {
    pub fn new(variable: impl Into<String>, lo: T, hi: T, steps: usize) -> Self {
        Self {
            variable: variable.into(),
            lo,
            hi,
            steps,
        }
    }

    /// Equally spaced samples, endpoints inclusive.
    pub fn samples(&self) -> Vec<T> {
        crate::engine::linspace(self.lo, self.hi, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub axis1: Axis<T>,
    pub axis2: Axis<T>,
    pub fixed: BTreeMap<String, T>,
}

impl<T: Scalar> SweepSpec<T> {
    pub fn with_steps(mut self, steps: usize) -> Self {
        self.axis1.steps = steps;
        self.axis2.steps = steps;
        self
    }

    /// Checks the spec against `model` and returns, per model input, where
    /// its value comes from.
    fn resolve(&self, model: &FuzzyModel<T>) -> Result<Vec<Source<T>>, SweepError> {
        if self.axis1.variable == self.axis2.variable {
            return Err(SweepError::Invalid(format!(
                "both axes sweep `{}`",
                self.axis1.variable
            )));
        }
        let mut sources: Vec<Option<Source<T>>> = vec![None; model.inputs().len()];
        for (which, axis) in [(0, &self.axis1), (1, &self.axis2)] {
            if axis.steps < 2 {
                return Err(SweepError::Invalid(format!(
                    "axis `{}` needs at least 2 steps, got {}",
                    axis.variable, axis.steps
                )));
            }
            let idx = model
                .input_index(&axis.variable)
                .ok_or_else(|| SweepError::UnknownVariable(axis.variable.clone()))?;
            let var = &model.inputs()[idx];
            if !(axis.lo.is_finite()
                && axis.hi.is_finite()
                && var.contains(axis.lo)
                && var.contains(axis.hi))
            {
                return Err(SweepError::OutOfUniverse {
                    name: axis.variable.clone(),
                    lo: axis.lo.to_string(),
                    hi: axis.hi.to_string(),
                    ulo: var.lo().to_string(),
                    uhi: var.hi().to_string(),
                });
            }
            sources[idx] = Some(Source::Axis(which));
        }
        for (name, &value) in &self.fixed {
            let idx = model
                .input_index(name)
                .ok_or_else(|| SweepError::UnknownVariable(name.clone()))?;
            if sources[idx].is_some() {
                return Err(SweepError::Invalid(format!(
                    "`{name}` is both swept and fixed"
                )));
            }
            let var = &model.inputs()[idx];
            if !(value.is_finite() && var.contains(value)) {
                return Err(SweepError::FixedOutOfUniverse {
                    name: name.clone(),
                    value: value.to_string(),
                    ulo: var.lo().to_string(),
                    uhi: var.hi().to_string(),
                });
            }
            sources[idx] = Some(Source::Fixed(value));
        }
        sources
            .into_iter()
            .zip(model.inputs())
            .map(|(s, v)| {
                s.ok_or_else(|| SweepError::Invalid(format!("no value for `{}`", v.name())))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Source<T> {
    Axis(usize),
    Fixed(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub spec: SweepSpec<T>,
    pub axis1_samples: Vec<T>,
    pub axis2_samples: Vec<T>,
    /// `grid[i][j]` is the possibility at axis-1 sample `i`, axis-2 sample `j`.
    pub grid: Vec<Vec<T>>,
}

impl<T: Scalar> SweepResult<T> {
    /// Empty corner cell, axis-2 samples across the first row, axis-1
    /// samples down the first column, six fractional digits, LF endings.
    pub fn to_csv(&self) -> String {
        let fmt = |v: T| format!("{:.6}", v.to_f64().unwrap_or(f64::NAN));
        let mut out = String::new();
        for s in &self.axis2_samples {
            out.push(',');
            out.push_str(&fmt(*s));
        }
        out.push('\n');
        for (a, row) in self.axis1_samples.iter().zip(&self.grid) {
            out.push_str(&fmt(*a));
            for v in row {
                write!(out, ",{}", fmt(*v)).expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

/// Rows are evaluated in parallel; each cell is an independent inference so
/// the grid matches a serial evaluation exactly.
pub fn run_sweep<T: Scalar>(
    spec: &SweepSpec<T>,
    model: &FuzzyModel<T>,
) -> Result<SweepResult<T>, SweepError> {
    let sources = spec.resolve(model)?;
    let axis1_samples = spec.axis1.samples();
    let axis2_samples = spec.axis2.samples();
    let grid = axis1_samples
        .par_iter()
        .map(|&a| {
            axis2_samples
                .iter()
                .map(|&b| {
                    let inputs: Vec<T> = sources
                        .iter()
                        .map(|s| match *s {
                            Source::Axis(0) => a,
                            Source::Axis(_) => b,
                            Source::Fixed(v) => v,
                        })
                        .collect();
                    infer(model, &inputs).map(|t| t.crisp_output)
                })
                .collect::<Result<Vec<T>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        axis1_samples,
        axis2_samples,
        grid,
    })
}

fn universe(name: &str) -> (f64, f64) {
    let i = INPUT_NAMES
        .iter()
        .position(|n| *n == name)
        .expect("known input");
    INPUT_UNIVERSES[i]
}

/// Sweep configuration of one of the published decision-surface figures:
/// the two captioned inputs fixed, the other two over their full universes.
pub fn figure_preset<T: Scalar>(fig: u8) -> Result<SweepSpec<T>, SweepError> {
    let (axes, fixed): ([&str; 2], [(&str, f64); 2]) = match fig {
        7 => ([SIGNAL, DISTANCE], [(VELOCITY, 50.0), (RATIO, 0.5)]),
        8 => ([VELOCITY, RATIO], [(DISTANCE, 50.0), (SIGNAL, -60.0)]),
        9 => ([SIGNAL, RATIO], [(DISTANCE, 50.0), (VELOCITY, 50.0)]),
        10 => ([VELOCITY, DISTANCE], [(RATIO, 0.5), (SIGNAL, -60.0)]),
        11 => ([SIGNAL, VELOCITY], [(DISTANCE, 50.0), (RATIO, 0.5)]),
        other => return Err(SweepError::UnknownFigure(other)),
    };
    let axis = |name: &str| {
        let (lo, hi) = universe(name);
        Axis::new(name, T::lit(lo), T::lit(hi), PRESET_STEPS)
    };
    Ok(SweepSpec {
        axis1: axis(axes[0]),
        axis2: axis(axes[1]),
        fixed: fixed
            .iter()
            .map(|&(n, v)| (n.to_string(), T::lit(v)))
            .collect(),
    })
}
