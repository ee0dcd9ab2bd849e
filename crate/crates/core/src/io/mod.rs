//! Problem documents, CSV option import and result export.

mod csv_import;
mod document;
mod export;

pub use csv_import::{import_csv, CsvImportError};
pub use document::{
    parse_problem, problem_from_value, problem_to_value, serialize_problem, ParseError,
};
pub use export::{export_csv, results_json, ResultsExport};

/// Fixed-point rendering used in human-readable output.
pub fn format_display(value: f64) -> String {
    format!("{value:.4}")
}
