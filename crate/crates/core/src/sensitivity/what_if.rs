use serde::{Deserialize, Serialize};

use crate::aggregation::{evaluate_problem, rank_options, EvaluationResult, Ranking};
use crate::error::{Error, Result};
use crate::model::DecisionProblem;

/// A single change applied on top of a baseline problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Override {
    /// Replace an option's raw value; `scenario: None` changes every scenario.
    Value {
        option: String,
        attribute: String,
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scenario: Option<usize>,
    },
    Importance {
        attribute: String,
        importance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionDelta {
    pub name: String,
    pub before: f64,
    pub after: f64,
    pub delta: f64,
    pub rank_before: usize,
    pub rank_after: usize,
    /// Positive when the option moved up.
    pub rank_change: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfDelta {
    pub overrides: Vec<Override>,
    pub before: EvaluationResult,
    pub after: EvaluationResult,
    pub before_ranking: Ranking,
    pub after_ranking: Ranking,
    /// In problem option order.
    pub deltas: Vec<OptionDelta>,
}

/// Return a copy of `problem` with the overrides applied. Does not validate.
pub fn apply_overrides(
    problem: &DecisionProblem,
    overrides: &[Override],
) -> Result<DecisionProblem> {
    let mut changed = problem.clone();
    for change in overrides {
        match change {
            Override::Importance {
                attribute,
                importance,
            } => {
                let i = changed
                    .attribute_index(attribute)
                    .ok_or_else(|| Error::UnknownAttribute(attribute.clone()))?;
                changed.attributes[i].importance = *importance;
            }
            Override::Value {
                option,
                attribute,
                value,
                scenario,
            } => {
                if changed.attribute_index(attribute).is_none() {
                    return Err(Error::UnknownAttribute(attribute.clone()));
                }
                let j = changed
                    .option_index(option)
                    .ok_or_else(|| Error::UnknownOption(option.clone()))?;
                let record = &mut changed.options[j];
                let targets = match scenario {
                    Some(k) if *k >= record.scenarios.len() => {
                        return Err(Error::UnknownScenario {
                            option: option.clone(),
                            index: *k,
                        })
                    }
                    Some(k) => &mut record.scenarios[*k..=*k],
                    None => &mut record.scenarios[..],
                };
                for s in targets {
                    s.values.insert(attribute.clone(), *value);
                }
            }
        }
    }
    Ok(changed)
}

/// Evaluate the problem before and after the overrides and report per-option
/// utility and rank movements. The baseline is left untouched.
pub fn what_if(problem: &DecisionProblem, overrides: &[Override]) -> Result<WhatIfDelta> {
    let before = evaluate_problem(problem)?;
    let changed = apply_overrides(problem, overrides)?;
    let after = evaluate_problem(&changed)?;
    let before_ranking = rank_options(&before);
    let after_ranking = rank_options(&after);

    let deltas = before
        .options
        .iter()
        .zip(&after.options)
        .map(|(b, a)| {
            let rank_before = before_ranking.rank_of(&b.name).expect("ranked");
            let rank_after = after_ranking.rank_of(&a.name).expect("ranked");
            OptionDelta {
                name: b.name.clone(),
                before: b.utility,
                after: a.utility,
                delta: a.utility - b.utility,
                rank_before,
                rank_after,
                rank_change: rank_before as i64 - rank_after as i64,
            }
        })
        .collect();

    Ok(WhatIfDelta {
        overrides: overrides.to_vec(),
        before,
        after,
        before_ranking,
        after_ranking,
        deltas,
    })
}
