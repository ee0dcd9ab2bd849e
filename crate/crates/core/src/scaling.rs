//! Importance scores to weights, raw values to canonical locations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeKind, CurveSpec, DecisionProblem, Direction};
use crate::Attribute;

/// Tolerance on `sum(weights) == 1`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Attribute weights aligned with the problem's attribute order. Each weight
/// lies in `[0, 1]` and they sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weights(Vec<f64>);

impl Weights {
    /// Wrap an explicit weight vector, checking that it lies on the simplex.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::OutOfDomain {
                value: w,
                domain: "[0, 1]",
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotSimplex(sum));
        }
        Ok(Weights(weights))
    }

    pub(crate) fn new_unchecked(weights: Vec<f64>) -> Self {
        Weights(weights)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for Weights {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

/// Divide each importance score by the total.
pub fn weights_from_importance(scores: &[f64]) -> Result<Weights> {
    if scores.is_empty() {
        return Err(Error::Empty);
    }
    if let Some((index, &value)) = scores
        .iter()
        .enumerate()
        .find(|(_, s)| !s.is_finite() || **s < 0.0)
    {
        return Err(Error::InvalidImportance { index, value });
    }
    let total: f64 = scores.iter().sum();
    if total <= 0.0 {
        return Err(Error::NoPositiveImportance);
    }
    if !total.is_finite() {
        return Err(Error::OutOfDomain {
            value: total,
            domain: "finite importance sum",
        });
    }
    Ok(Weights(scores.iter().map(|s| s / total).collect()))
}

/// Pool several respondents' importance scores: each respondent is
/// normalized separately, then the weight vectors are averaged.
pub fn group_weights<S: AsRef<[f64]>>(respondents: &[S]) -> Result<Weights> {
    let Some(first) = respondents.first() else {
        return Err(Error::Empty);
    };
    let n = first.as_ref().len();
    let mut mean = vec![0.0; n];
    for (index, scores) in respondents.iter().enumerate() {
        let scores = scores.as_ref();
        if scores.len() != n {
            return Err(Error::Respondent {
                index,
                source: Box::new(Error::LengthMismatch {
                    expected: n,
                    found: scores.len(),
                }),
            });
        }
        let weights = weights_from_importance(scores).map_err(|e| Error::Respondent {
            index,
            source: Box::new(e),
        })?;
        for (acc, w) in mean.iter_mut().zip(weights.iter()) {
            *acc += w;
        }
    }
    let count = respondents.len() as f64;
    for acc in &mut mean {
        *acc /= count;
    }
    weights_from_importance(&mean)
}

/// Min-max normalize `x` against anchors `[low, high]`, clamping first.
/// `LowerBetter` flips the result so that 1 is always the desirable end.
pub fn normalize_value(x: f64, low: f64, high: f64, direction: Direction) -> Result<f64> {
    if low.is_nan() || high.is_nan() || low >= high || !(high - low).is_finite() {
        return Err(Error::DegenerateRange { low, high });
    }
    if x.is_nan() {
        return Err(Error::OutOfDomain {
            value: x,
            domain: "real numbers",
        });
    }
    let fraction = (x.clamp(low, high) - low) / (high - low);
    Ok(match direction {
        Direction::HigherBetter => fraction,
        Direction::LowerBetter => 1.0 - fraction,
    })
}

/// Shape a normalized value. Every curve fixes 0 and 1 and is non-decreasing.
pub fn apply_curve(t: f64, curve: &CurveSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain {
            value: t,
            domain: "[0, 1]",
        });
    }
    Ok(match *curve {
        CurveSpec::Linear => t,
        CurveSpec::Power { gamma } => {
            if !gamma.is_finite() || gamma <= 0.0 {
                return Err(Error::InvalidGamma(gamma));
            }
            t.powf(gamma)
        }
        CurveSpec::SShape => t * t * (3.0 - 2.0 * t),
    })
}

/// Canonical location of a raw value on an attribute.
pub fn locate(raw: f64, attribute: &Attribute) -> Result<f64> {
    match &attribute.kind {
        AttributeKind::Direct => {
            if !(0.0..=100.0).contains(&raw) {
                return Err(Error::OutOfDomain {
                    value: raw,
                    domain: "[0, 100]",
                });
            }
            Ok(raw / 100.0)
        }
        AttributeKind::Derived(scale) => {
            let t = normalize_value(raw, scale.range_low, scale.range_high, scale.direction)?;
            Ok(apply_curve(t, &scale.curve)?.clamp(0.0, 1.0))
        }
    }
}

/// Locations indexed by option, scenario, then attribute (problem order).
#[derive(Debug, Clone, PartialEq)]
pub struct LocationMatrix {
    options: Vec<Vec<Vec<f64>>>,
}

impl LocationMatrix {
    /// Scenario rows of one option.
    pub fn option(&self, option: usize) -> &[Vec<f64>] {
        &self.options[option]
    }

    pub fn get(&self, option: usize, scenario: usize, attribute: usize) -> f64 {
        self.options[option][scenario][attribute]
    }

    pub fn option_count(&self) -> usize {
        self.options.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Vec<f64>]> {
        self.options.iter().map(Vec::as_slice)
    }
}

pub fn build_location_matrix(problem: &DecisionProblem) -> Result<LocationMatrix> {
    let options = problem
        .options
        .iter()
        .map(|option| {
            option
                .scenarios
                .iter()
                .map(|scenario| {
                    problem
                        .attributes
                        .iter()
                        .map(|attr| {
                            let raw = scenario.values.get(&attr.name).ok_or_else(|| {
                                Error::MissingValue {
                                    option: option.name.clone(),
                                    attribute: attr.name.clone(),
                                }
                            })?;
                            locate(*raw, attr)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocationMatrix { options })
}
