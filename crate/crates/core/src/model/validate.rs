use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AttributeKind, CurveSpec, DecisionProblem, SCHEMA_VERSION};

/// Tolerance on the sum of scenario probabilities.
const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    /// Location of the offending field, e.g. `attributes[0].importance`.
    pub path: String,
    pub message: String,
}

/// Outcome of [`validate_problem`]. `ok` is true exactly when no issue has
/// error severity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn from_issues(issues: Vec<Issue>) -> Self {
        let ok = issues.iter().all(|i| i.severity != Severity::Error);
        ValidationReport { ok, issues }
    }

    /// A report carrying a single error, used for problems that could not be
    /// parsed far enough to validate.
    pub fn single_error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::from_issues(vec![Issue {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }])
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let errors = self.errors().count();
        let warnings = self.issues.len() - errors;
        write!(f, "{errors} error(s), {warnings} warning(s)")?;
        for issue in &self.issues {
            let tag = match issue.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            write!(f, "; {tag} at {}: {}", issue.path, issue.message)?;
        }
        Ok(())
    }
}

struct Collector(Vec<Issue>);

impl Collector {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Issue {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        });
    }

    fn warning(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Issue {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        });
    }
}

/// Check every invariant of a decision problem and report all violations.
///
/// Never fails; issues are collected in a fixed order (document order) so the
/// same input always yields an identical report. Derived raw values outside
/// their anchors are warnings because they are clamped during location.
pub fn validate_problem(problem: &DecisionProblem) -> ValidationReport {
    let mut out = Collector(Vec::new());

    if problem.schema_version != SCHEMA_VERSION {
        out.error(
            "schema_version",
            format!(
                "unsupported schema version {:?}, expected {SCHEMA_VERSION:?}",
                problem.schema_version
            ),
        );
    }

    if problem.attributes.is_empty() {
        out.error("attributes", "at least one attribute is required");
    }
    if problem.options.is_empty() {
        out.error("options", "at least one option is required");
    }

    let mut seen = HashSet::new();
    let mut importance_sum = 0.0;
    let mut any_positive = false;
    let mut importances_valid = true;
    for (i, attr) in problem.attributes.iter().enumerate() {
        let path = format!("attributes[{i}]");
        if attr.name.is_empty() {
            out.error(format!("{path}.name"), "name must not be empty");
        } else if !seen.insert(attr.name.as_str()) {
            out.error(
                format!("{path}.name"),
                format!("duplicate attribute name {:?}", attr.name),
            );
        }

        if !attr.importance.is_finite() || attr.importance < 0.0 {
            importances_valid = false;
            out.error(
                format!("{path}.importance"),
                format!(
                    "importance must be a finite non-negative number, got {}",
                    attr.importance
                ),
            );
        } else {
            importance_sum += attr.importance;
            any_positive |= attr.importance > 0.0;
        }

        if let AttributeKind::Derived(scale) = &attr.kind {
            let (low, high) = (scale.range_low, scale.range_high);
            if !low.is_finite() || !high.is_finite() {
                out.error(format!("{path}.range"), "range anchors must be finite");
            } else if low >= high {
                out.error(
                    format!("{path}.range"),
                    format!("degenerate range: low ({low}) must be strictly below high ({high})"),
                );
            } else if !(high - low).is_finite() {
                out.error(format!("{path}.range"), "range width overflows");
            }
            if let CurveSpec::Power { gamma } = scale.curve {
                if !gamma.is_finite() || gamma <= 0.0 {
                    out.error(
                        format!("{path}.curve.gamma"),
                        format!("gamma must be positive and finite, got {gamma}"),
                    );
                }
            }
        }
    }
    if importances_valid && !problem.attributes.is_empty() {
        if !any_positive {
            out.error("attributes", "no positive importance");
        } else if !importance_sum.is_finite() {
            out.error("attributes", "importance scores overflow when summed");
        }
    }

    let mut seen = HashSet::new();
    for (j, option) in problem.options.iter().enumerate() {
        let path = format!("options[{j}]");
        if option.name.is_empty() {
            out.error(format!("{path}.name"), "name must not be empty");
        } else if !seen.insert(option.name.as_str()) {
            out.error(
                format!("{path}.name"),
                format!("duplicate option name {:?}", option.name),
            );
        }

        if option.scenarios.is_empty() {
            out.error(
                format!("{path}.scenarios"),
                "at least one scenario is required",
            );
            continue;
        }

        let mut probability_sum = 0.0;
        let mut probabilities_valid = true;
        for (k, scenario) in option.scenarios.iter().enumerate() {
            let spath = format!("{path}.scenarios[{k}]");
            let p = scenario.probability;
            if !(0.0..=1.0).contains(&p) {
                probabilities_valid = false;
                out.error(
                    format!("{spath}.probability"),
                    format!("probability must lie in [0, 1], got {p}"),
                );
            } else {
                probability_sum += p;
            }

            for attr in &problem.attributes {
                let vpath = format!("{spath}.values.{}", attr.name);
                let Some(&raw) = scenario.values.get(&attr.name) else {
                    out.error(vpath, "missing value");
                    continue;
                };
                if !raw.is_finite() {
                    out.error(vpath, format!("value must be finite, got {raw}"));
                    continue;
                }
                match &attr.kind {
                    AttributeKind::Direct => {
                        if !(0.0..=100.0).contains(&raw) {
                            out.error(
                                vpath,
                                format!("direct locator score must lie in [0, 100], got {raw}"),
                            );
                        }
                    }
                    AttributeKind::Derived(scale) => {
                        if raw < scale.range_low || raw > scale.range_high {
                            out.warning(
                                vpath,
                                format!(
                                    "value {raw} outside range [{}, {}]; it will be clamped",
                                    scale.range_low, scale.range_high
                                ),
                            );
                        }
                    }
                }
            }
            for key in scenario.values.keys() {
                if problem.attribute_index(key).is_none() {
                    out.error(format!("{spath}.values.{key}"), "unknown attribute");
                }
            }
        }

        if probabilities_valid {
            if option.scenarios.len() == 1 {
                if option.scenarios[0].probability != 1.0 {
                    out.error(
                        format!("{path}.scenarios[0].probability"),
                        "a single scenario must have probability exactly 1",
                    );
                }
            } else if (probability_sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                out.error(
                    format!("{path}.scenarios"),
                    format!("scenario probabilities sum to {probability_sum}, expected 1"),
                );
            }
        }
    }

    ValidationReport::from_issues(out.0)
}
