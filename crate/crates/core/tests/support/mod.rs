//! Strategies and independent oracles shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use maua_core::{
    Aggregation, Attribute, AttributeKind, CurveSpec, DecisionProblem, Direction, DisplayScale,
    OptionRecord, Scenario,
};
use proptest::collection::vec;
use proptest::prelude::*;

pub fn curve() -> impl Strategy<Value = CurveSpec> {
    prop_oneof![
        Just(CurveSpec::Linear),
        (0.1f64..5.0).prop_map(|gamma| CurveSpec::Power { gamma }),
        Just(CurveSpec::SShape),
    ]
}

pub fn importance() -> impl Strategy<Value = f64> {
    prop_oneof![4 => 0.01f64..10.0, 1 => Just(0.0)]
}

pub fn attribute(index: usize) -> BoxedStrategy<Attribute> {
    let name = format!("attr {index}");
    let direct = {
        let name = name.clone();
        importance().prop_map(move |imp| Attribute::direct(name.clone(), imp))
    };
    let derived = (
        importance(),
        any::<bool>(),
        -1000.0f64..1000.0,
        0.5f64..5000.0,
        curve(),
    )
        .prop_map(move |(imp, higher, low, width, curve)| {
            let direction = if higher {
                Direction::HigherBetter
            } else {
                Direction::LowerBetter
            };
            Attribute::derived(name.clone(), imp, direction, low, low + width, curve)
        });
    prop_oneof![direct, derived].boxed()
}

/// Shape of the problems to generate.
#[derive(Clone, Copy)]
pub struct Shape {
    pub attributes: (usize, usize),
    pub options: (usize, usize),
    pub max_scenarios: usize,
    pub multiplicative: bool,
}

impl Shape {
    /// Additive, single-scenario, up to 4 attributes and 4 options.
    pub const SMALL: Shape = Shape {
        attributes: (1, 4),
        options: (1, 4),
        max_scenarios: 1,
        multiplicative: false,
    };
}

fn raw_value(attr: &Attribute, fraction: f64) -> f64 {
    match attr.kind {
        AttributeKind::Direct => fraction.clamp(0.0, 1.0) * 100.0,
        AttributeKind::Derived(s) => s.range_low + fraction * (s.range_high - s.range_low),
    }
}

/// Valid problems of the given shape. Derived values may fall slightly
/// outside their anchors to exercise clamping.
pub fn problem(shape: Shape) -> BoxedStrategy<DecisionProblem> {
    let (a_lo, a_hi) = shape.attributes;
    let (o_lo, o_hi) = shape.options;
    (a_lo..=a_hi, o_lo..=o_hi)
        .prop_flat_map(move |(n, m)| {
            let attrs: Vec<_> = (0..n).map(attribute).collect();
            let options = vec(
                vec((0.1f64..1.0, vec(-0.1f64..1.1, n)), 1..=shape.max_scenarios),
                m,
            );
            let aggregation = if shape.multiplicative {
                prop_oneof![
                    Just(Aggregation::Additive),
                    Just(Aggregation::Multiplicative)
                ]
                .boxed()
            } else {
                Just(Aggregation::Additive).boxed()
            };
            (attrs, options, aggregation, any::<bool>())
        })
        .prop_map(|(mut attributes, options, aggregation, percent)| {
            if attributes.iter().all(|a| a.importance == 0.0) {
                attributes[0].importance = 1.0;
            }
            let options = options
                .into_iter()
                .enumerate()
                .map(|(j, scenarios)| {
                    let total: f64 = scenarios.iter().map(|(r, _)| r).sum();
                    let single = scenarios.len() == 1;
                    OptionRecord {
                        name: format!("option {j}"),
                        scenarios: scenarios
                            .into_iter()
                            .map(|(r, fractions)| Scenario {
                                probability: if single { 1.0 } else { r / total },
                                values: attributes
                                    .iter()
                                    .zip(fractions)
                                    .map(|(a, f)| (a.name.clone(), raw_value(a, f)))
                                    .collect::<BTreeMap<_, _>>(),
                            })
                            .collect(),
                    }
                })
                .collect();
            DecisionProblem {
                display_scale: if percent {
                    DisplayScale::Percent
                } else {
                    DisplayScale::Unit
                },
                aggregation,
                attributes,
                options,
                ..DecisionProblem::new("generated")
            }
        })
        .boxed()
}

/// Straight-loop additive utility, written without the engine's helpers.
pub fn naive_additive(problem: &DecisionProblem) -> Vec<f64> {
    let mut total = 0.0;
    for a in &problem.attributes {
        total += a.importance;
    }
    let mut out = Vec::new();
    for option in &problem.options {
        let mut expected = 0.0;
        for scenario in &option.scenarios {
            let mut u = 0.0;
            for a in &problem.attributes {
                let raw = scenario.values[&a.name];
                let loc = match a.kind {
                    AttributeKind::Direct => raw / 100.0,
                    AttributeKind::Derived(s) => {
                        let x = if raw < s.range_low {
                            s.range_low
                        } else if raw > s.range_high {
                            s.range_high
                        } else {
                            raw
                        };
                        let mut t = (x - s.range_low) / (s.range_high - s.range_low);
                        if s.direction == Direction::LowerBetter {
                            t = 1.0 - t;
                        }
                        match s.curve {
                            CurveSpec::Linear => t,
                            CurveSpec::Power { gamma } => (gamma * t.ln()).exp(),
                            CurveSpec::SShape => 3.0 * t * t - 2.0 * t * t * t,
                        }
                    }
                };
                u += a.importance / total * loc;
            }
            expected += scenario.probability * u;
        }
        out.push(expected);
    }
    out
}

/// Weights after sweeping attribute `k` to `t`, computed from the importances.
pub fn naive_swept_weights(problem: &DecisionProblem, k: usize, t: f64) -> Vec<f64> {
    let total: f64 = problem.attributes.iter().map(|a| a.importance).sum();
    let rest: f64 = problem
        .attributes
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, a)| a.importance / total)
        .sum();
    let n = problem.attributes.len();
    (0..n)
        .map(|i| {
            if i == k {
                t
            } else if rest > 0.0 {
                problem.attributes[i].importance / total / rest * (1.0 - t)
            } else {
                (1.0 - t) / (n - 1) as f64
            }
        })
        .collect()
}

/// Strict argmax, first index on exact equality.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

/// A copy of the problem with attributes (and every value map, implicitly)
/// reordered by `order`.
pub fn permute_attributes(problem: &DecisionProblem, order: &[usize]) -> DecisionProblem {
    let mut p = problem.clone();
    p.attributes = order
        .iter()
        .map(|&i| problem.attributes[i].clone())
        .collect();
    p
}
