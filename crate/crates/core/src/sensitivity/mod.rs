//! How rankings respond to weight and value changes.
//!
//! Sweeping attribute `k` sets its weight to `t` and rescales the others
//! proportionally so they sum to `1 - t` (uniformly when they are all zero).
//! In additive mode every option's utility is then affine in `t`, which
//! [`critical_weights`] exploits to find exact breakpoints.
//!
//! "Top option" here means the strict argmax of the utilities, earliest
//! option on exact equality. It does not apply the ranking tie tolerance.

mod sweep;
mod what_if;

use serde::{Deserialize, Serialize};

use crate::aggregation::Ranking;

pub use sweep::{critical_weights, sensitivity_report, sweep_weight};
pub use what_if::{apply_overrides, what_if, OptionDelta, Override, WhatIfDelta};

/// One grid point of a weight sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t: f64,
    pub weights: Vec<f64>,
    /// Canonical utilities in problem option order.
    pub utilities: Vec<f64>,
    pub ranking: Ranking,
}

/// Swept weight at which the top option changes from `before` to `after`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub t: f64,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepMethod {
    /// Exact line intersections (additive, single-scenario problems only).
    Critical,
    /// Uniform grid; breakpoints are the midpoints of cells where the top
    /// option changes.
    Sweep { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSensitivity {
    pub attribute: String,
    #[serde(flatten)]
    pub method: SweepMethod,
    pub top_at_zero: String,
    pub top_at_one: String,
    /// Strictly increasing in `t`; consecutive entries chain `after` to `before`.
    pub breakpoints: Vec<Breakpoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub problem: String,
    pub attributes: Vec<AttributeSensitivity>,
}

pub(crate) fn top_index(utilities: &[f64]) -> usize {
    let mut best = 0;
    for (i, &u) in utilities.iter().enumerate().skip(1) {
        if u > utilities[best] {
            best = i;
        }
    }
    best
}
