use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::model::{
    Aggregation, Attribute, AttributeKind, CurveSpec, DecisionProblem, DerivedScale, Direction,
    DisplayScale, OptionRecord, Scenario, SCHEMA_VERSION,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported schema_version {found:?}, expected {SCHEMA_VERSION:?}")]
    UnsupportedVersion { found: String },
}

impl ParseError {
    pub fn path(&self) -> &str {
        match self {
            ParseError::Syntax { .. } => "$",
            ParseError::Schema { path, .. } => path,
            ParseError::UnsupportedVersion { .. } => "$.schema_version",
        }
    }
}

type ParseResult<T> = Result<T, ParseError>;

fn schema(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Schema {
        path: path.to_owned(),
        message: message.into(),
    }
}

/// A JSON object being read, with its path for error messages.
struct Fields<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn new(value: &'a Value, path: String) -> ParseResult<Self> {
        match value {
            Value::Object(map) => Ok(Fields { map, path }),
            _ => Err(schema(&path, "expected an object")),
        }
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn deny_unknown(&self, allowed: &[&str]) -> ParseResult<()> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(key) => Err(schema(&self.at(key), "unknown field")),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn required(&self, key: &str) -> ParseResult<&'a Value> {
        self.get(key)
            .ok_or_else(|| schema(&self.at(key), "missing required field"))
    }

    fn string(&self, key: &str) -> ParseResult<&'a str> {
        self.required(key)?
            .as_str()
            .ok_or_else(|| schema(&self.at(key), "expected a string"))
    }

    fn optional_string(&self, key: &str) -> ParseResult<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| schema(&self.at(key), "expected a string")),
        }
    }

    fn number(&self, key: &str) -> ParseResult<f64> {
        as_number(self.required(key)?, &self.at(key))
    }

    fn array(&self, key: &str) -> ParseResult<&'a Vec<Value>> {
        self.required(key)?
            .as_array()
            .ok_or_else(|| schema(&self.at(key), "expected an array"))
    }
}

fn as_number(value: &Value, path: &str) -> ParseResult<f64> {
    value
        .as_f64()
        .ok_or_else(|| schema(path, "expected a number"))
}

fn keyword<T: Copy>(value: &str, path: &str, choices: &[(&str, T)]) -> ParseResult<T> {
    choices
        .iter()
        .find(|(k, _)| *k == value)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<_> = choices.iter().map(|(k, _)| *k).collect();
            schema(path, format!("expected one of {names:?}, got {value:?}"))
        })
}

/// Parse a problem document. Only the document's shape is checked here;
/// semantic checks belong to [`validate_problem`](crate::validate_problem).
pub fn parse_problem(text: &str) -> ParseResult<DecisionProblem> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    problem_from_value(&value)
}

pub fn problem_from_value(value: &Value) -> ParseResult<DecisionProblem> {
    let top = Fields::new(value, "$".to_owned())?;
    top.deny_unknown(&[
        "schema_version",
        "name",
        "display_scale",
        "aggregation",
        "attributes",
        "options",
    ])?;

    let version = top.string("schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(ParseError::UnsupportedVersion {
            found: version.to_owned(),
        });
    }
    let name = top.string("name")?.to_owned();
    let display_scale = match top.optional_string("display_scale")? {
        None => DisplayScale::default(),
        Some(s) => keyword(
            s,
            &top.at("display_scale"),
            &[
                ("unit", DisplayScale::Unit),
                ("percent", DisplayScale::Percent),
            ],
        )?,
    };
    let aggregation = match top.optional_string("aggregation")? {
        None => Aggregation::default(),
        Some(s) => keyword(
            s,
            &top.at("aggregation"),
            &[
                ("additive", Aggregation::Additive),
                ("multiplicative", Aggregation::Multiplicative),
            ],
        )?,
    };

    let attributes = top
        .array("attributes")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_attribute(v, format!("$.attributes[{i}]")))
        .collect::<ParseResult<Vec<_>>>()?;
    let options = top
        .array("options")?
        .iter()
        .enumerate()
        .map(|(j, v)| parse_option(v, format!("$.options[{j}]")))
        .collect::<ParseResult<Vec<_>>>()?;

    Ok(DecisionProblem {
        schema_version: version.to_owned(),
        name,
        display_scale,
        aggregation,
        attributes,
        options,
    })
}

fn parse_attribute(value: &Value, path: String) -> ParseResult<Attribute> {
    let f = Fields::new(value, path)?;
    f.deny_unknown(&["name", "importance", "kind", "direction", "range", "curve"])?;
    let name = f.string("name")?.to_owned();
    let importance = f.number("importance")?;
    let kind = keyword(
        f.string("kind")?,
        &f.at("kind"),
        &[("direct", false), ("derived", true)],
    )?;

    if !kind {
        for key in ["direction", "range", "curve"] {
            if f.get(key).is_some() {
                return Err(schema(&f.at(key), "not allowed on a direct attribute"));
            }
        }
        return Ok(Attribute {
            name,
            importance,
            kind: AttributeKind::Direct,
        });
    }

    let direction = keyword(
        f.string("direction")?,
        &f.at("direction"),
        &[
            ("higher_better", Direction::HigherBetter),
            ("lower_better", Direction::LowerBetter),
        ],
    )?;
    let range_path = f.at("range");
    let range = f.array("range")?;
    if range.len() != 2 {
        return Err(schema(&range_path, "expected [low, high]"));
    }
    let range_low = as_number(&range[0], &format!("{range_path}[0]"))?;
    let range_high = as_number(&range[1], &format!("{range_path}[1]"))?;
    let curve = match f.get("curve") {
        None => CurveSpec::Linear,
        Some(v) => parse_curve(v, f.at("curve"))?,
    };

    Ok(Attribute {
        name,
        importance,
        kind: AttributeKind::Derived(DerivedScale {
            direction,
            range_low,
            range_high,
            curve,
        }),
    })
}

/// `power` and `concave` default to gamma 0.5, `convex` to 2.0.
fn parse_curve(value: &Value, path: String) -> ParseResult<CurveSpec> {
    let f = Fields::new(value, path)?;
    f.deny_unknown(&["shape", "gamma"])?;
    let shape = f.string("shape")?;
    let gamma = match f.get("gamma") {
        None => None,
        Some(v) => Some(as_number(v, &f.at("gamma"))?),
    };
    let shape_path = f.at("shape");
    let no_gamma = |curve: CurveSpec| match gamma {
        Some(_) => Err(schema(
            &f.at("gamma"),
            format!("not allowed with shape {shape:?}"),
        )),
        None => Ok(curve),
    };
    match shape {
        "linear" => no_gamma(CurveSpec::Linear),
        "s_shape" => no_gamma(CurveSpec::SShape),
        "power" => Ok(CurveSpec::Power {
            gamma: gamma.unwrap_or(CurveSpec::CONCAVE_GAMMA),
        }),
        "concave" => match gamma {
            Some(g) if g >= 1.0 => Err(schema(&f.at("gamma"), "a concave curve needs gamma < 1")),
            g => Ok(CurveSpec::Power {
                gamma: g.unwrap_or(CurveSpec::CONCAVE_GAMMA),
            }),
        },
        "convex" => match gamma {
            Some(g) if g <= 1.0 => Err(schema(&f.at("gamma"), "a convex curve needs gamma > 1")),
            g => Ok(CurveSpec::Power {
                gamma: g.unwrap_or(CurveSpec::CONVEX_GAMMA),
            }),
        },
        other => Err(schema(
            &shape_path,
            format!(
                "expected one of [\"linear\", \"power\", \"concave\", \"convex\", \"s_shape\"], got {other:?}"
            ),
        )),
    }
}

fn parse_values(value: &Value, path: &str) -> ParseResult<BTreeMap<String, f64>> {
    let map = value
        .as_object()
        .ok_or_else(|| schema(path, "expected an object of attribute values"))?;
    map.iter()
        .map(|(k, v)| Ok((k.clone(), as_number(v, &format!("{path}.{k}"))?)))
        .collect()
}

fn parse_option(value: &Value, path: String) -> ParseResult<OptionRecord> {
    let f = Fields::new(value, path)?;
    f.deny_unknown(&["name", "values", "scenarios"])?;
    let name = f.string("name")?.to_owned();
    let scenarios = match (f.get("values"), f.get("scenarios")) {
        (Some(values), None) => vec![Scenario {
            probability: 1.0,
            values: parse_values(values, &f.at("values"))?,
        }],
        (None, Some(_)) => f
            .array("scenarios")?
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let s = Fields::new(v, format!("{}[{k}]", f.at("scenarios")))?;
                s.deny_unknown(&["probability", "values"])?;
                Ok(Scenario {
                    probability: s.number("probability")?,
                    values: parse_values(s.required("values")?, &s.at("values"))?,
                })
            })
            .collect::<ParseResult<Vec<_>>>()?,
        (Some(_), Some(_)) => {
            return Err(schema(
                &f.path,
                "give either \"values\" or \"scenarios\", not both",
            ))
        }
        (None, None) => return Err(schema(&f.at("values"), "missing required field")),
    };
    Ok(OptionRecord { name, scenarios })
}

/// Integral values are written without a fractional part.
fn number(x: f64) -> Value {
    const EXACT_INT: f64 = 9_007_199_254_740_992.0;
    if x.fract() == 0.0 && x.abs() < EXACT_INT {
        Value::from(x as i64)
    } else {
        Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect(),
    )
}

fn values_to_value(problem: &DecisionProblem, values: &BTreeMap<String, f64>) -> Value {
    let mut map = Map::new();
    for attr in &problem.attributes {
        if let Some(&v) = values.get(&attr.name) {
            map.insert(attr.name.clone(), number(v));
        }
    }
    for (k, &v) in values {
        if !map.contains_key(k) {
            map.insert(k.clone(), number(v));
        }
    }
    Value::Object(map)
}

/// The canonical JSON tree of a problem: keys in schema order, attributes and
/// options in model order, curve shapes spelled out with their exponent.
pub fn problem_to_value(problem: &DecisionProblem) -> Value {
    let attributes = problem
        .attributes
        .iter()
        .map(|a| {
            let mut entries = vec![
                ("name", Value::from(a.name.as_str())),
                ("importance", number(a.importance)),
            ];
            match &a.kind {
                AttributeKind::Direct => entries.push(("kind", Value::from("direct"))),
                AttributeKind::Derived(scale) => {
                    entries.push(("kind", Value::from("derived")));
                    entries.push(("direction", Value::from(scale.direction.as_str())));
                    entries.push((
                        "range",
                        Value::Array(vec![number(scale.range_low), number(scale.range_high)]),
                    ));
                    let curve = match scale.curve {
                        CurveSpec::Linear => object([("shape", Value::from("linear"))]),
                        CurveSpec::Power { gamma } => {
                            object([("shape", Value::from("power")), ("gamma", number(gamma))])
                        }
                        CurveSpec::SShape => object([("shape", Value::from("s_shape"))]),
                    };
                    entries.push(("curve", curve));
                }
            }
            object(entries)
        })
        .collect();

    let options = problem
        .options
        .iter()
        .map(|o| match o.scenarios.as_slice() {
            [only] if only.probability == 1.0 => object([
                ("name", Value::from(o.name.as_str())),
                ("values", values_to_value(problem, &only.values)),
            ]),
            scenarios => object([
                ("name", Value::from(o.name.as_str())),
                (
                    "scenarios",
                    scenarios
                        .iter()
                        .map(|s| {
                            object([
                                ("probability", number(s.probability)),
                                ("values", values_to_value(problem, &s.values)),
                            ])
                        })
                        .collect(),
                ),
            ]),
        })
        .collect();

    object([
        (
            "schema_version",
            Value::from(problem.schema_version.as_str()),
        ),
        ("name", Value::from(problem.name.as_str())),
        ("display_scale", Value::from(problem.display_scale.as_str())),
        ("aggregation", Value::from(problem.aggregation.as_str())),
        ("attributes", Value::Array(attributes)),
        ("options", Value::Array(options)),
    ])
}

/// Canonical text form: 2-space indentation and a trailing newline.
/// Deterministic for a given problem.
pub fn serialize_problem(problem: &DecisionProblem) -> String {
    let mut text = serde_json::to_string_pretty(&problem_to_value(problem))
        .expect("a JSON tree always serializes");
    text.push('\n');
    text
}
