use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the computational operations.
///
/// A problem accepted by [`validate_problem`](crate::validate_problem) never
/// produces any of these from scaling or aggregation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("no positive importance")]
    NoPositiveImportance,
    #[error("importance at index {index} must be a finite non-negative number, got {value}")]
    InvalidImportance { index: usize, value: f64 },
    #[error("degenerate range [{low}, {high}]")]
    DegenerateRange { low: f64, high: f64 },
    #[error("value {value} outside {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
    #[error("power curve exponent must be positive and finite, got {0}")]
    InvalidGamma(f64),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("respondent {index}: {source}")]
    Respondent {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("scenario probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("weights do not form a probability simplex (sum {0})")]
    NotSimplex(f64),
    #[error("option `{option}` has no value for attribute `{attribute}`")]
    MissingValue { option: String, attribute: String },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown option `{0}`")]
    UnknownOption(String),
    #[error("option `{option}` has no scenario {index}")]
    UnknownScenario { option: String, index: usize },
    #[error("nothing to rescale: the problem has a single attribute")]
    NothingToRescale,
    #[error("at least 2 samples required, got {0}")]
    TooFewSamples(usize),
    #[error("unsupported: {0}; use a sampled sweep instead")]
    Unsupported(&'static str),
    #[error("invalid problem: {0}")]
    Invalid(ValidationReport),
}
