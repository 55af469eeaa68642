use super::{fuzzify, gaussian_membership, EngineError, FuzzyModel, Rule};
use crate::Scalar;

const MIN_MASS: f64 = 1e-12;

/// Every intermediate of one inference run.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceTrace<T> {
    /// Crisp inputs after clamping to each universe.
    pub inputs: Vec<T>,
    /// Per input variable, the degree of each of its terms.
    pub memberships: Vec<Vec<T>>,
    /// One strength per rule, in rule order.
    pub firing_strengths: Vec<T>,
    pub aggregated_curve: Vec<(T, T)>,
    pub crisp_output: T,
}

impl<T: Scalar> InferenceTrace<T> {
    /// Rule indices ordered by descending firing strength, ties by rule order.
    pub fn strongest_rules(&self, k: usize) -> Vec<(usize, T)> {
        let mut ranked: Vec<(usize, T)> =
            self.firing_strengths.iter().copied().enumerate().collect();
        ranked.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("finite strengths")
                .then(a.0.cmp(&b.0))
        });
        ranked.truncate(k);
        ranked
    }
}

/// `weight * min` over the rule's antecedent degrees.
pub fn firing_strength<T: Scalar>(
    rule: &Rule<T>,
    memberships: &[Vec<T>],
) -> Result<T, EngineError> {
    if rule.antecedents.len() != memberships.len() {
        return Err(EngineError::ModelIntegrity(format!(
            "rule has {} antecedents but {} membership lists were supplied",
            rule.antecedents.len(),
            memberships.len()
        )));
    }
    let mut strength = T::one();
    for (var, (&term, degrees)) in rule.antecedents.iter().zip(memberships).enumerate() {
        let degree = degrees.get(term).ok_or_else(|| {
            EngineError::ModelIntegrity(format!("antecedent {var}: term index {term} out of range"))
        })?;
        strength = strength.min(*degree);
    }
    Ok(rule.weight * strength)
}

/// Max over rules of the min-clipped consequent, sampled on the model's
/// output grid.
pub fn aggregate<T: Scalar>(
    model: &FuzzyModel<T>,
    firing_strengths: &[T],
) -> Result<Vec<(T, T)>, EngineError> {
    if firing_strengths.len() != model.rules().len() {
        return Err(EngineError::ModelIntegrity(format!(
            "{} firing strengths for {} rules",
            firing_strengths.len(),
            model.rules().len()
        )));
    }
    let terms = model.output().terms();
    // min(s, mu) is monotone in s, so only the strongest rule per consequent
    // term can contribute at any grid point.
    let mut clip = vec![T::zero(); terms.len()];
    for (rule, &s) in model.rules().iter().zip(firing_strengths) {
        clip[rule.consequent] = clip[rule.consequent].max(s);
    }
    let curve = model
        .output_grid()
        .into_iter()
        .map(|g| {
            let degree = terms
                .iter()
                .zip(&clip)
                .filter(|(_, &c)| c > T::zero())
                .fold(T::zero(), |acc, (term, &c)| {
                    acc.max(c.min(gaussian_membership(g, term)))
                });
            (g, degree)
        })
        .collect();
    Ok(curve)
}

/// Centroid of a sampled membership curve using trapezoidal weights,
/// summed left to right.
pub fn defuzzify_centroid<T: Scalar>(curve: &[(T, T)]) -> Result<T, EngineError> {
    if curve.len() < 2 {
        return Err(EngineError::InvalidCurve(format!(
            "need at least 2 samples, got {}",
            curve.len()
        )));
    }
    if curve.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(EngineError::InvalidCurve(
            "sample points must be strictly increasing".into(),
        ));
    }
    let half = T::lit(0.5);
    let last = curve.len() - 1;
    let mut moment = T::zero();
    let mut mass = T::zero();
    for i in 0..curve.len() {
        let left = if i == 0 { curve[0].0 } else { curve[i - 1].0 };
        let right = if i == last {
            curve[last].0
        } else {
            curve[i + 1].0
        };
        let w = (right - left) * half;
        let (x, mu) = curve[i];
        moment = moment + x * mu * w;
        mass = mass + mu * w;
    }
    if !(mass >= T::lit(MIN_MASS)) {
        return Err(EngineError::NoRuleFired {
            mass: mass.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((moment / mass).max(curve[0].0).min(curve[last].0))
}

/// Full pipeline. Inputs are clamped to their universes first.
///
/// With Gaussian terms and positive weights some rule always fires, so
/// [`EngineError::NoRuleFired`] only surfaces for zero-weight rule bases.
pub fn infer<T: Scalar>(
    model: &FuzzyModel<T>,
    inputs: &[T],
) -> Result<InferenceTrace<T>, EngineError> {
    if inputs.len() != model.inputs().len() {
        return Err(EngineError::InvalidInput(format!(
            "expected {} inputs, got {}",
            model.inputs().len(),
            inputs.len()
        )));
    }
    let mut clamped = Vec::with_capacity(inputs.len());
    let mut memberships = Vec::with_capacity(inputs.len());
    for (var, &x) in model.inputs().iter().zip(inputs) {
        if !x.is_finite() {
            return Err(EngineError::InvalidInput(format!(
                "value {x} for `{}` is not finite",
                var.name()
            )));
        }
        let x = var.clamp(x);
        memberships.push(fuzzify(var, x)?);
        clamped.push(x);
    }
    let firing_strengths = model
        .rules()
        .iter()
        .map(|r| firing_strength(r, &memberships))
        .collect::<Result<Vec<_>, _>>()?;
    let aggregated_curve = aggregate(model, &firing_strengths)?;
    let crisp_output = defuzzify_centroid(&aggregated_curve)?;
    Ok(InferenceTrace {
        inputs: clamped,
        memberships,
        firing_strengths,
        aggregated_curve,
        crisp_output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{FuzzyVariable, GaussianTerm};

    fn unit_var(name: &str) -> FuzzyVariable<f64> {
        FuzzyVariable::new(
            name,
            0.0,
            1.0,
            vec![
                GaussianTerm::new("Low", 0.0, 0.2).unwrap(),
                GaussianTerm::new("Medium", 0.5, 0.2).unwrap(),
                GaussianTerm::new("High", 1.0, 0.2).unwrap(),
            ],
        )
        .unwrap()
    }

    fn model(rules: Vec<Rule<f64>>) -> FuzzyModel<f64> {
        FuzzyModel::new(vec![unit_var("a")], unit_var("out"), rules, 1001).unwrap()
    }

    #[test]
    fn firing_strength_is_weighted_min() {
        let m = vec![vec![0.8], vec![0.3], vec![0.9], vec![0.5]];
        let rule = Rule::new(vec![0, 0, 0, 0], 0, 1.0);
        assert_eq!(firing_strength(&rule, &m).unwrap(), 0.3);
        let ones = vec![vec![1.0]; 4];
        assert_eq!(firing_strength(&rule, &ones).unwrap(), 1.0);
        let zero = vec![vec![1.0], vec![0.0], vec![1.0], vec![1.0]];
        assert_eq!(firing_strength(&rule, &zero).unwrap(), 0.0);
        let half = Rule::new(vec![0, 0, 0, 0], 0, 0.5);
        assert_eq!(firing_strength(&half, &ones).unwrap(), 0.5);
    }

    #[test]
    fn firing_strength_rejects_bad_index() {
        let rule = Rule::new(vec![3], 0, 1.0);
        assert!(matches!(
            firing_strength(&rule, &[vec![1.0, 1.0, 1.0]]),
            Err(EngineError::ModelIntegrity(_))
        ));
        let short = Rule::new(vec![0, 0], 0, 1.0);
        assert!(firing_strength(&short, &[vec![1.0]]).is_err());
    }

    #[test]
    fn aggregate_zero_and_single() {
        let m = model(vec![Rule::new(vec![0], 1, 1.0), Rule::new(vec![2], 2, 1.0)]);
        let zero = aggregate(&m, &[0.0, 0.0]).unwrap();
        assert!(zero.iter().all(|&(_, d)| d == 0.0));
        let single = aggregate(&m, &[1.0, 0.0]).unwrap();
        let medium = &m.output().terms()[1];
        for &(g, d) in &single {
            assert_eq!(d, gaussian_membership(g, medium));
        }
        assert!(aggregate(&m, &[1.0]).is_err());
    }

    #[test]
    fn aggregate_two_rules_spot_check() {
        // hand-evaluated clipped Gaussians: Low clipped at 0.4, High at 0.7
        let m = model(vec![Rule::new(vec![0], 0, 1.0), Rule::new(vec![2], 2, 1.0)]);
        let curve = aggregate(&m, &[0.4, 0.7]).unwrap();
        let g = |x: f64, c: f64| (-(x - c) * (x - c) / (2.0 * 0.04)).exp();
        for &i in &[0usize, 250, 500, 750, 1000] {
            let (x, d) = curve[i];
            let want = (0.4f64.min(g(x, 0.0))).max(0.7f64.min(g(x, 1.0)));
            assert!((d - want).abs() < 1e-15, "i={i}: {d} vs {want}");
        }
        assert_eq!(curve[0].1, 0.4);
        assert_eq!(curve[1000].1, 0.7);
    }

    #[test]
    fn centroid_symmetric_and_uniform() {
        let t = GaussianTerm::new("m", 0.5, 0.1).unwrap();
        let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        let curve: Vec<_> = grid
            .iter()
            .map(|&x| (x, gaussian_membership(x, &t)))
            .collect();
        assert!((defuzzify_centroid(&curve).unwrap() - 0.5).abs() < 1e-12);
        let flat: Vec<_> = grid.iter().map(|&x| (x, 0.3)).collect();
        assert!((defuzzify_centroid(&flat).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn centroid_errors() {
        assert!(matches!(
            defuzzify_centroid::<f64>(&[]),
            Err(EngineError::InvalidCurve(_))
        ));
        assert!(defuzzify_centroid(&[(0.0, 1.0)]).is_err());
        assert!(defuzzify_centroid(&[(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(matches!(
            defuzzify_centroid(&[(0.0, 0.0), (1.0, 0.0)]),
            Err(EngineError::NoRuleFired { .. })
        ));
    }

    #[test]
    fn zero_weight_rules_fire_nothing() {
        let m = model(vec![Rule::new(vec![1], 1, 0.0)]);
        assert!(matches!(
            infer(&m, &[0.5]),
            Err(EngineError::NoRuleFired { .. })
        ));
    }

    #[test]
    fn infer_single_symmetric_consequent() {
        let m = model(vec![
            Rule::new(vec![0], 1, 1.0),
            Rule::new(vec![1], 1, 1.0),
            Rule::new(vec![2], 1, 1.0),
        ]);
        let trace = infer(&m, &[0.5]).unwrap();
        assert!((trace.crisp_output - 0.5).abs() < 1e-3);
    }

    #[test]
    fn infer_clamps_and_checks_inputs() {
        let m = model(vec![Rule::new(vec![0], 0, 1.0), Rule::new(vec![2], 2, 1.0)]);
        let high = infer(&m, &[7.0]).unwrap();
        assert_eq!(high.inputs, vec![1.0]);
        assert_eq!(high.crisp_output, infer(&m, &[1.0]).unwrap().crisp_output);
        assert!(infer(&m, &[f64::NAN]).is_err());
        assert!(infer(&m, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn strongest_rules_orders_ties_by_index() {
        let trace = InferenceTrace {
            inputs: vec![],
            memberships: vec![],
            firing_strengths: vec![0.2, 0.9, 0.2, 0.9],
            aggregated_curve: vec![],
            crisp_output: 0.0,
        };
        let top: Vec<usize> = trace
            .strongest_rules(3)
            .into_iter()
            .map(|(i, _)| i)
            .collect();
        assert_eq!(top, vec![1, 3, 0]);
    }
}
