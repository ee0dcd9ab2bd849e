use std::collections::HashSet;

use crate::model::{Attribute, OptionRecord};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CsvImportError {
    #[error("header mismatch: expected [{}], found [{}]", .expected.join(", "), .found.join(", "))]
    HeaderMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column:?}: {value:?} is not a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: duplicate option name {name:?}")]
    DuplicateOption { row: usize, name: String },
    #[error("no options")]
    NoOptions,
    #[error("malformed CSV: {0}")]
    Malformed(String),
}

/// Read options from CSV: a header `option,<attribute names in order>` and
/// one row per option. Rows are numbered from 1, not counting the header.
pub fn import_csv(
    text: &str,
    attributes: &[Attribute],
) -> Result<Vec<OptionRecord>, CsvImportError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let expected: Vec<String> = std::iter::once("option".to_owned())
        .chain(attributes.iter().map(|a| a.name.clone()))
        .collect();
    let header = match records.next() {
        Some(r) => r.map_err(|e| CsvImportError::Malformed(e.to_string()))?,
        None => csv::StringRecord::new(),
    };
    let found: Vec<String> = header.iter().map(|f| f.trim().to_owned()).collect();
    if found != expected {
        return Err(CsvImportError::HeaderMismatch { expected, found });
    }

    let mut options = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in records.enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CsvImportError::Malformed(e.to_string()))?;
        if record.len() != expected.len() {
            return Err(CsvImportError::FieldCount {
                row,
                expected: expected.len(),
                found: record.len(),
            });
        }
        let name = record[0].trim().to_owned();
        if !seen.insert(name.clone()) {
            return Err(CsvImportError::DuplicateOption { row, name });
        }
        let mut values = Vec::with_capacity(attributes.len());
        for (attr, cell) in attributes.iter().zip(record.iter().skip(1)) {
            let value = cell
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CsvImportError::NonNumeric {
                    row,
                    column: attr.name.clone(),
                    value: cell.to_owned(),
                })?;
            values.push((attr.name.clone(), value));
        }
        options.push(OptionRecord::single(name, values));
    }
    if options.is_empty() {
        return Err(CsvImportError::NoOptions);
    }
    Ok(options)
}
