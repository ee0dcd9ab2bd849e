//! Multi-attribute utility analysis.
//!
//! A [`DecisionProblem`] holds attributes (criteria with importance scores and
//! an optional anchored utility curve) and options (alternatives with raw
//! values, possibly spread over probability-weighted scenarios). The engine
//! turns it into weights, canonical `[0, 1]` locations, option utilities and a
//! tie-aware ranking, and answers sensitivity and what-if questions about it.
//!
//! ```
//! use maua_core::{evaluate_problem, rank_options, Attribute, DecisionProblem, OptionRecord};
//!
//! let mut problem = DecisionProblem::new("lunch");
//! problem.attributes = vec![Attribute::direct("taste", 3.0), Attribute::direct("price", 1.0)];
//! problem.options = vec![
//!     OptionRecord::single("soup", [("taste", 60.0), ("price", 90.0)]),
//!     OptionRecord::single("curry", [("taste", 90.0), ("price", 40.0)]),
//! ];
//! let result = evaluate_problem(&problem).unwrap();
//! assert_eq!(rank_options(&result).top().name, "curry");
//! ```

pub mod aggregation;
pub mod error;
pub mod io;
pub mod model;
pub mod scaling;
pub mod sensitivity;

pub use aggregation::{
    additive_utility, evaluate_problem, evaluate_with_weights, expected_utility,
    multiplicative_utility, rank_options, Contribution, EvaluationResult, OptionEvaluation,
    RankedOption, Ranking, ScenarioEvaluation, WeightedAttribute, TIE_TOLERANCE,
};
pub use error::{Error, Result};
pub use model::{
    validate_problem, Aggregation, Attribute, AttributeKind, CurveSpec, DecisionProblem,
    DerivedScale, Direction, DisplayScale, Issue, OptionRecord, Scenario, Severity,
    ValidationReport, SCHEMA_VERSION,
};
pub use scaling::{
    apply_curve, build_location_matrix, group_weights, locate, normalize_value,
    weights_from_importance, LocationMatrix, Weights,
};
pub use sensitivity::{
    critical_weights, sensitivity_report, sweep_weight, what_if, AttributeSensitivity, Breakpoint,
    OptionDelta, Override, SensitivityReport, SweepMethod, SweepPoint, WhatIfDelta,
};
