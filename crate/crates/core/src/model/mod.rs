//! Decision-problem data model.

mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use validate::{validate_problem, Issue, Severity, ValidationReport};

/// The only document schema version understood by this crate.
pub const SCHEMA_VERSION: &str = "1";

/// How utilities are reported to humans. Computation always happens on the
/// canonical `[0, 1]` scale.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplayScale {
    #[default]
    Unit,
    Percent,
}

impl DisplayScale {
    pub fn factor(self) -> f64 {
        match self {
            DisplayScale::Unit => 1.0,
            DisplayScale::Percent => 100.0,
        }
    }

    pub fn display(self, canonical: f64) -> f64 {
        canonical * self.factor()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DisplayScale::Unit => "unit",
            DisplayScale::Percent => "percent",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Weighted sum of locations.
    #[default]
    Additive,
    /// Weighted geometric mean of locations.
    Multiplicative,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::Additive => "additive",
            Aggregation::Multiplicative => "multiplicative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::HigherBetter => "higher_better",
            Direction::LowerBetter => "lower_better",
        }
    }
}

/// Monotone map from a normalized value in `[0, 1]` to a utility in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CurveSpec {
    #[default]
    Linear,
    /// `t^gamma`: concave for `gamma < 1`, convex for `gamma > 1`.
    Power { gamma: f64 },
    /// Smoothstep `3t^2 - 2t^3`.
    SShape,
}

impl CurveSpec {
    pub const CONCAVE_GAMMA: f64 = 0.5;
    pub const CONVEX_GAMMA: f64 = 2.0;

    pub fn concave() -> Self {
        CurveSpec::Power {
            gamma: Self::CONCAVE_GAMMA,
        }
    }

    pub fn convex() -> Self {
        CurveSpec::Power {
            gamma: Self::CONVEX_GAMMA,
        }
    }
}

/// Anchors, direction and curve of an attribute measured in its own units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScale {
    pub direction: Direction,
    pub range_low: f64,
    pub range_high: f64,
    pub curve: CurveSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttributeKind {
    /// Values are locator scores on the 0-100 scale.
    Direct,
    /// Values are raw measurements located through a [`DerivedScale`].
    Derived(DerivedScale),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    /// Raw importance score; weights are these scores divided by their sum.
    pub importance: f64,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn direct(name: impl Into<String>, importance: f64) -> Self {
        Attribute {
            name: name.into(),
            importance,
            kind: AttributeKind::Direct,
        }
    }

    pub fn derived(
        name: impl Into<String>,
        importance: f64,
        direction: Direction,
        range_low: f64,
        range_high: f64,
        curve: CurveSpec,
    ) -> Self {
        Attribute {
            name: name.into(),
            importance,
            kind: AttributeKind::Derived(DerivedScale {
                direction,
                range_low,
                range_high,
                curve,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub probability: f64,
    /// Raw value per attribute name.
    pub values: BTreeMap<String, f64>,
}

/// An alternative being evaluated. Certain outcomes are a single scenario
/// with probability 1.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionRecord {
    pub name: String,
    pub scenarios: Vec<Scenario>,
}

impl OptionRecord {
    pub fn single<K: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = (K, f64)>,
    ) -> Self {
        OptionRecord {
            name: name.into(),
            scenarios: vec![Scenario {
                probability: 1.0,
                values: values.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            }],
        }
    }

    pub fn is_single(&self) -> bool {
        self.scenarios.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    pub schema_version: String,
    pub name: String,
    pub display_scale: DisplayScale,
    pub aggregation: Aggregation,
    pub attributes: Vec<Attribute>,
    pub options: Vec<OptionRecord>,
}

impl DecisionProblem {
    /// An empty additive problem on the unit display scale.
    pub fn new(name: impl Into<String>) -> Self {
        DecisionProblem {
            schema_version: SCHEMA_VERSION.to_owned(),
            name: name.into(),
            display_scale: DisplayScale::default(),
            aggregation: Aggregation::default(),
            attributes: Vec::new(),
            options: Vec::new(),
        }
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn option_index(&self, name: &str) -> Option<usize> {
        self.options.iter().position(|o| o.name == name)
    }

    pub fn importances(&self) -> Vec<f64> {
        self.attributes.iter().map(|a| a.importance).collect()
    }
}
