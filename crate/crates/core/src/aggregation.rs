//! Option utilities and rankings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_problem, Aggregation, DecisionProblem, DisplayScale};
use crate::scaling::{build_location_matrix, weights_from_importance, LocationMatrix, Weights};

/// Canonical utilities closer than this are ranked as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

const PROBABILITY_TOLERANCE: f64 = 1e-9;

fn check_lengths(weights: &Weights, locations: &[f64]) -> Result<()> {
    if weights.len() != locations.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            found: locations.len(),
        });
    }
    if weights.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Weighted sum `sum(w_i * u_i)`.
pub fn additive_utility(weights: &Weights, locations: &[f64]) -> Result<f64> {
    check_lengths(weights, locations)?;
    let sum: f64 = weights.iter().zip(locations).map(|(w, u)| w * u).sum();
    Ok(sum.clamp(0.0, 1.0))
}

/// Weighted geometric mean `prod(u_i ^ w_i)`. A zero-weight factor
/// contributes 1 even when its location is 0.
pub fn multiplicative_utility(weights: &Weights, locations: &[f64]) -> Result<f64> {
    check_lengths(weights, locations)?;
    let mut product = 1.0;
    for (&w, &u) in weights.iter().zip(locations) {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfDomain {
                value: u,
                domain: "[0, 1]",
            });
        }
        if w > 0.0 {
            product *= u.powf(w);
        }
    }
    Ok(product.clamp(0.0, 1.0))
}

/// Probability-weighted mean of `(probability, utility)` pairs.
pub fn expected_utility(scenarios: &[(f64, f64)]) -> Result<f64> {
    if scenarios.is_empty() {
        return Err(Error::Empty);
    }
    let mut total_p = 0.0;
    let mut sum = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(p, u) in scenarios {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        total_p += p;
        sum += p * u;
        lo = lo.min(u);
        hi = hi.max(u);
    }
    if (total_p - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::ProbabilitySum(total_p));
    }
    Ok(sum.clamp(lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedAttribute {
    pub name: String,
    pub importance: f64,
    pub weight: f64,
}

/// `weight * location` for one attribute. For multi-scenario options the
/// location is the probability-weighted mean location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub attribute: String,
    pub location: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvaluation {
    pub probability: f64,
    pub utility: f64,
    pub locations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionEvaluation {
    pub name: String,
    /// Canonical utility in `[0, 1]`.
    pub utility: f64,
    /// Utility on the problem's display scale.
    pub display_utility: f64,
    /// Present in additive mode; sums to `utility`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<Contribution>>,
    /// Present when the option has more than one scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<Vec<ScenarioEvaluation>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub problem: String,
    pub display_scale: DisplayScale,
    pub aggregation: Aggregation,
    pub attributes: Vec<WeightedAttribute>,
    pub options: Vec<OptionEvaluation>,
}

impl EvaluationResult {
    pub fn utilities(&self) -> Vec<f64> {
        self.options.iter().map(|o| o.utility).collect()
    }

    pub fn option(&self, name: &str) -> Option<&OptionEvaluation> {
        self.options.iter().find(|o| o.name == name)
    }
}

/// Validate, weight, locate and aggregate a problem.
pub fn evaluate_problem(problem: &DecisionProblem) -> Result<EvaluationResult> {
    check_valid(problem)?;
    let weights = weights_from_importance(&problem.importances())?;
    let locations = build_location_matrix(problem)?;
    evaluate_located(problem, &weights, &locations)
}

/// Evaluate with an explicit weight vector in place of the problem's
/// importance-derived weights.
pub fn evaluate_with_weights(
    problem: &DecisionProblem,
    weights: &Weights,
) -> Result<EvaluationResult> {
    check_valid(problem)?;
    if weights.len() != problem.attributes.len() {
        return Err(Error::LengthMismatch {
            expected: problem.attributes.len(),
            found: weights.len(),
        });
    }
    let locations = build_location_matrix(problem)?;
    evaluate_located(problem, weights, &locations)
}

pub(crate) fn check_valid(problem: &DecisionProblem) -> Result<()> {
    let report = validate_problem(problem);
    if report.ok {
        Ok(())
    } else {
        Err(Error::Invalid(report))
    }
}

/// Aggregate precomputed locations. The problem must already be valid.
pub(crate) fn evaluate_located(
    problem: &DecisionProblem,
    weights: &Weights,
    locations: &LocationMatrix,
) -> Result<EvaluationResult> {
    let aggregate = match problem.aggregation {
        Aggregation::Additive => additive_utility,
        Aggregation::Multiplicative => multiplicative_utility,
    };
    let scale = problem.display_scale;

    let mut options = Vec::with_capacity(problem.options.len());
    for (j, option) in problem.options.iter().enumerate() {
        let rows = locations.option(j);
        let mut per_scenario = Vec::with_capacity(rows.len());
        for (scenario, row) in option.scenarios.iter().zip(rows) {
            per_scenario.push((scenario.probability, aggregate(weights, row)?));
        }
        let utility = expected_utility(&per_scenario)?;

        let contributions = (problem.aggregation == Aggregation::Additive).then(|| {
            problem
                .attributes
                .iter()
                .enumerate()
                .map(|(i, attr)| {
                    let location: f64 = option
                        .scenarios
                        .iter()
                        .zip(rows)
                        .map(|(s, row)| s.probability * row[i])
                        .sum();
                    Contribution {
                        attribute: attr.name.clone(),
                        location,
                        contribution: weights[i] * location,
                    }
                })
                .collect()
        });

        let scenarios = (rows.len() > 1).then(|| {
            per_scenario
                .iter()
                .zip(rows)
                .map(|(&(probability, utility), row)| ScenarioEvaluation {
                    probability,
                    utility,
                    locations: row.clone(),
                })
                .collect()
        });

        options.push(OptionEvaluation {
            name: option.name.clone(),
            utility,
            display_utility: scale.display(utility),
            contributions,
            scenarios,
        });
    }

    Ok(EvaluationResult {
        problem: problem.name.clone(),
        display_scale: scale,
        aggregation: problem.aggregation,
        attributes: problem
            .attributes
            .iter()
            .zip(weights.iter())
            .map(|(a, &weight)| WeightedAttribute {
                name: a.name.clone(),
                importance: a.importance,
                weight,
            })
            .collect(),
        options,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedOption {
    pub name: String,
    pub utility: f64,
    /// 1-based; tied options share the smallest rank of their group.
    pub rank: usize,
    pub tied: bool,
}

/// Options sorted by utility, best first. Options within [`TIE_TOLERANCE`] of
/// their group's best share a rank and keep their input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking {
    pub entries: Vec<RankedOption>,
}

impl Ranking {
    /// First-listed option of the best group.
    ///
    /// # Panics
    /// On an empty ranking.
    pub fn top(&self) -> &RankedOption {
        &self.entries[0]
    }

    /// All options sharing rank 1.
    pub fn winners(&self) -> impl Iterator<Item = &RankedOption> {
        self.entries.iter().take_while(|e| e.rank == 1)
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.rank)
    }
}

pub fn rank_options(result: &EvaluationResult) -> Ranking {
    rank_utilities(result.options.iter().map(|o| (o.name.as_str(), o.utility)))
}

pub(crate) fn rank_utilities<'a>(items: impl IntoIterator<Item = (&'a str, f64)>) -> Ranking {
    let items: Vec<(&str, f64)> = items.into_iter().collect();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].1.total_cmp(&items[a].1).then(a.cmp(&b)));

    let mut entries = Vec::with_capacity(items.len());
    let mut start = 0;
    while start < order.len() {
        let leader = items[order[start]].1;
        let mut end = start + 1;
        while end < order.len() && leader - items[order[end]].1 <= TIE_TOLERANCE {
            end += 1;
        }
        let group = &mut order[start..end];
        group.sort_unstable();
        let tied = group.len() > 1;
        for &i in group.iter() {
            entries.push(RankedOption {
                name: items[i].0.to_owned(),
                utility: items[i].1,
                rank: start + 1,
                tied,
            });
        }
        start = end;
    }
    Ranking { entries }
}
