use super::{
    top_index, AttributeSensitivity, Breakpoint, SensitivityReport, SweepMethod, SweepPoint,
};
use crate::aggregation::{additive_utility, check_valid, evaluate_located, rank_options};
use crate::error::{Error, Result};
use crate::model::{Aggregation, DecisionProblem};
use crate::scaling::{build_location_matrix, weights_from_importance, Weights};

/// Breakpoints closer than this to either end of `[0, 1]` are dropped.
const EDGE_TOLERANCE: f64 = 1e-9;
/// Line intersections closer than this are treated as one point.
const MERGE_TOLERANCE: f64 = 1e-12;

fn swept_weights(base: &Weights, swept: usize, t: f64) -> Weights {
    let n = base.len();
    let rest: f64 = base
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != swept)
        .map(|(_, w)| w)
        .sum();
    let weights = base
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            if i == swept {
                t
            } else if rest > 0.0 {
                w * (1.0 - t) / rest
            } else {
                (1.0 - t) / (n - 1) as f64
            }
        })
        .collect();
    Weights::new_unchecked(weights)
}

fn swept_attribute(problem: &DecisionProblem, attribute: &str) -> Result<usize> {
    check_valid(problem)?;
    let index = problem
        .attribute_index(attribute)
        .ok_or_else(|| Error::UnknownAttribute(attribute.to_owned()))?;
    if problem.attributes.len() < 2 {
        return Err(Error::NothingToRescale);
    }
    Ok(index)
}

/// Re-evaluate and rank the problem on a uniform grid of `samples` values of
/// the swept attribute's weight, from 0 to 1 inclusive.
pub fn sweep_weight(
    problem: &DecisionProblem,
    attribute: &str,
    samples: usize,
) -> Result<Vec<SweepPoint>> {
    let swept = swept_attribute(problem, attribute)?;
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let base = weights_from_importance(&problem.importances())?;
    let locations = build_location_matrix(problem)?;
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let t = i as f64 / last;
            let weights = swept_weights(&base, swept, t);
            let result = evaluate_located(problem, &weights, &locations)?;
            Ok(SweepPoint {
                t,
                utilities: result.utilities(),
                ranking: rank_options(&result),
                weights: weights.into_inner(),
            })
        })
        .collect()
}

/// Exact weights at which the top option changes while sweeping `attribute`.
///
/// Requires additive aggregation and single-scenario options, where each
/// option's utility is a line `a + (c - a) t` with `a` its utility at `t = 0`
/// and `c` its location on the swept attribute.
pub fn critical_weights(
    problem: &DecisionProblem,
    attribute: &str,
) -> Result<AttributeSensitivity> {
    let swept = swept_attribute(problem, attribute)?;
    if problem.aggregation != Aggregation::Additive {
        return Err(Error::Unsupported(
            "critical weights need additive aggregation",
        ));
    }
    if !problem.options.iter().all(|o| o.is_single()) {
        return Err(Error::Unsupported(
            "critical weights need single-scenario options",
        ));
    }

    let base = weights_from_importance(&problem.importances())?;
    let locations = build_location_matrix(problem)?;
    let at_zero = swept_weights(&base, swept, 0.0);
    let mut lines = Vec::with_capacity(problem.options.len());
    for row in locations.iter() {
        let row = &row[0];
        let intercept = additive_utility(&at_zero, row)?;
        lines.push((intercept, row[swept] - intercept));
    }
    let values_at = |t: f64| -> Vec<f64> { lines.iter().map(|(a, s)| a + s * t).collect() };

    let mut cuts = Vec::new();
    for (i, (a_i, s_i)) in lines.iter().enumerate() {
        for (a_j, s_j) in &lines[i + 1..] {
            let slope_gap = s_i - s_j;
            if slope_gap == 0.0 {
                continue;
            }
            let t = (a_j - a_i) / slope_gap;
            if t > EDGE_TOLERANCE && t < 1.0 - EDGE_TOLERANCE {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| *b - *a <= MERGE_TOLERANCE);

    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(0.0);
    bounds.extend_from_slice(&cuts);
    bounds.push(1.0);
    let segment_tops: Vec<usize> = bounds
        .windows(2)
        .map(|w| top_index(&values_at(0.5 * (w[0] + w[1]))))
        .collect();

    let name = |i: usize| problem.options[i].name.clone();
    let breakpoints = segment_tops
        .windows(2)
        .zip(&cuts)
        .filter(|(pair, _)| pair[0] != pair[1])
        .map(|(pair, &t)| Breakpoint {
            t,
            before: name(pair[0]),
            after: name(pair[1]),
        })
        .collect();

    Ok(AttributeSensitivity {
        attribute: attribute.to_owned(),
        method: SweepMethod::Critical,
        top_at_zero: name(top_index(&values_at(0.0))),
        top_at_one: name(top_index(&values_at(1.0))),
        breakpoints,
        sweep: None,
    })
}

fn sampled_sensitivity(
    problem: &DecisionProblem,
    attribute: &str,
    samples: usize,
) -> Result<AttributeSensitivity> {
    let points = sweep_weight(problem, attribute, samples)?;
    let tops: Vec<usize> = points.iter().map(|p| top_index(&p.utilities)).collect();
    let name = |i: usize| problem.options[i].name.clone();
    let breakpoints = points
        .windows(2)
        .zip(tops.windows(2))
        .filter(|(_, pair)| pair[0] != pair[1])
        .map(|(cell, pair)| Breakpoint {
            t: 0.5 * (cell[0].t + cell[1].t),
            before: name(pair[0]),
            after: name(pair[1]),
        })
        .collect();
    Ok(AttributeSensitivity {
        attribute: attribute.to_owned(),
        method: SweepMethod::Sweep { samples },
        top_at_zero: name(tops[0]),
        top_at_one: name(*tops.last().expect("at least two samples")),
        breakpoints,
        sweep: Some(points),
    })
}

/// Sensitivity of one attribute, or of every attribute when `attribute` is
/// `None`.
pub fn sensitivity_report(
    problem: &DecisionProblem,
    attribute: Option<&str>,
    method: SweepMethod,
) -> Result<SensitivityReport> {
    let names: Vec<&str> = match attribute {
        Some(name) => vec![name],
        None => problem.attributes.iter().map(|a| a.name.as_str()).collect(),
    };
    let attributes = names
        .into_iter()
        .map(|name| match method {
            SweepMethod::Critical => critical_weights(problem, name),
            SweepMethod::Sweep { samples } => sampled_sensitivity(problem, name, samples),
        })
        .collect::<Result<_>>()?;
    Ok(SensitivityReport {
        problem: problem.name.clone(),
        attributes,
    })
}
