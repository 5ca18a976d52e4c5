//! CSV ingestion: datasets (numeric features plus one label column) and
//! prediction files (ground truth plus one column per model).
//!
//! Plain comma-separated UTF-8 with a header row; quoting is not
//! interpreted. String labels are dictionary-encoded in first-appearance
//! order, so label ids are stable across runs and platforms.

use modeval::types::{Dataset, Matrix};

use crate::error::{CliError, CliResult};

fn read_lines(path: &str) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {path}: {e}")))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect())
}

fn split_row(line: &str) -> Vec<String> {
    line.split(',').map(|f| f.trim().to_string()).collect()
}

/// Loads a dataset. `label_column` selects by header name or zero-based
/// index; the default is the last column. All other columns must parse as
/// finite numbers.
pub fn ingest_dataset(path: &str, label_column: Option<&str>) -> CliResult<Dataset> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(CliError::Data(format!("{path}: empty file")));
    }
    let header = split_row(&lines[0]);
    if header.len() < 2 {
        return Err(CliError::Data(format!(
            "{path}: need at least one feature column and one label column"
        )));
    }
    let label_idx = match label_column {
        None => header.len() - 1,
        Some(spec) => {
            if let Some(idx) = header.iter().position(|h| h == spec) {
                idx
            } else if let Ok(idx) = spec.parse::<usize>() {
                if idx >= header.len() {
                    return Err(CliError::Data(format!(
                        "{path}: label column index {idx} out of range for {} columns",
                        header.len()
                    )));
                }
                idx
            } else {
                return Err(CliError::Data(format!(
                    "{path}: unknown label column {spec:?}"
                )));
            }
        }
    };

    if lines.len() == 1 {
        return Err(CliError::Data(format!("{path}: empty dataset")));
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut classes: Vec<String> = Vec::new();
    for (row_number, line) in lines[1..].iter().enumerate() {
        let fields = split_row(line);
        if fields.len() != header.len() {
            return Err(CliError::Data(format!(
                "{path}: row {} has {} fields, expected {}",
                row_number + 1,
                fields.len(),
                header.len()
            )));
        }
        for (col, field) in fields.iter().enumerate() {
            if col == label_idx {
                let label = match classes.iter().position(|c| c == field) {
                    Some(i) => i,
                    None => {
                        classes.push(field.clone());
                        classes.len() - 1
                    }
                };
                labels.push(label);
            } else {
                let value: f64 = field.parse().map_err(|_| {
                    CliError::Data(format!(
                        "{path}: row {}, column {} ({}): {field:?} is not numeric",
                        row_number + 1,
                        col + 1,
                        header[col]
                    ))
                })?;
                if !value.is_finite() {
                    return Err(CliError::Data(format!(
                        "{path}: row {}, column {} ({}): non-finite value",
                        row_number + 1,
                        col + 1,
                        header[col]
                    )));
                }
                features.push(value);
            }
        }
    }
    let n = labels.len();
    let d = header.len() - 1;
    let matrix = Matrix::from_flat(features, n, d).map_err(CliError::from)?;
    Dataset::new(matrix, labels, classes.len()).map_err(CliError::from)
}

/// Loads a predictions file: first column ground truth, then one column
/// per model. All columns share one label dictionary (first-appearance
/// order, scanned row-major).
pub fn ingest_predictions(path: &str) -> CliResult<(Vec<usize>, Vec<Vec<usize>>)> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(CliError::Data(format!("{path}: empty file")));
    }
    let header = split_row(&lines[0]);
    if header.len() < 2 {
        return Err(CliError::Data(format!(
            "{path}: need a ground-truth column and at least one model column"
        )));
    }
    if lines.len() == 1 {
        return Err(CliError::Data(format!("{path}: empty dataset")));
    }
    let models = header.len() - 1;
    let mut y_true = Vec::new();
    let mut predictions = vec![Vec::new(); models];
    let mut classes: Vec<String> = Vec::new();
    let mut encode = |field: &str| -> usize {
        match classes.iter().position(|c| c == field) {
            Some(i) => i,
            None => {
                classes.push(field.to_string());
                classes.len() - 1
            }
        }
    };
    for (row_number, line) in lines[1..].iter().enumerate() {
        let fields = split_row(line);
        if fields.len() != header.len() {
            return Err(CliError::Data(format!(
                "{path}: row {} has {} fields, expected {}",
                row_number + 1,
                fields.len(),
                header.len()
            )));
        }
        y_true.push(encode(&fields[0]));
        for (m, field) in fields[1..].iter().enumerate() {
            predictions[m].push(encode(field));
        }
    }
    Ok((y_true, predictions))
}
