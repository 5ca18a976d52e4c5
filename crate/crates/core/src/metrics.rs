//! Accuracy, error, and the per-example correctness bookkeeping behind the
//! multi-model hypothesis tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of exact label matches. Equals `1 - error_rate` for every input.
pub fn accuracy(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("label vectors"));
    }
    let correct = y_true.iter().zip(y_pred).filter(|(a, b)| a == b).count();
    Ok(correct as f64 / y_true.len() as f64)
}

/// Fraction of mismatches (mean 0-1 loss).
pub fn error_rate(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    Ok(1.0 - accuracy(y_true, y_pred)?)
}

/// Mean squared error for regression targets.
pub fn mse(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("target vectors"));
    }
    let sum: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(y, yhat)| (yhat - y) * (yhat - y))
        .sum();
    Ok(sum / y_true.len() as f64)
}

/// Difference between training and test accuracy. Positive when the model
/// looks better on its own training data; may be negative.
pub fn optimism_bias(acc_train: f64, acc_test: f64) -> f64 {
    acc_train - acc_test
}

/// Binary `n x M` matrix recording which of `M` models classified each of
/// `n` examples correctly (1 = correct).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessMatrix {
    entries: Vec<u8>,
    examples: usize,
    models: usize,
}

impl CorrectnessMatrix {
    /// Builds the matrix from raw 0/1 entries, row-major.
    pub fn from_entries(entries: Vec<u8>, examples: usize, models: usize) -> Result<Self> {
        if models == 0 || examples == 0 {
            return Err(Error::EmptyInput("correctness matrix"));
        }
        if entries.len() != examples * models {
            return Err(Error::InvalidArgument(format!(
                "{} entries cannot form a {examples}x{models} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::InvalidArgument(
                "correctness entries must be 0 or 1".into(),
            ));
        }
        Ok(CorrectnessMatrix {
            entries,
            examples,
            models,
        })
    }

    pub fn examples(&self) -> usize {
        self.examples
    }

    pub fn models(&self) -> usize {
        self.models
    }

    /// 1 if model `j` classified example `i` correctly.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.models + j]
    }

    /// Correct counts per model (column sums).
    pub fn model_correct_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.models];
        for i in 0..self.examples {
            for (j, c) in counts.iter_mut().enumerate() {
                *c += u64::from(self.entry(i, j));
            }
        }
        counts
    }

    /// Correct counts per example (row sums): how many models got it right.
    pub fn example_correct_counts(&self) -> Vec<u64> {
        (0..self.examples)
            .map(|i| (0..self.models).map(|j| u64::from(self.entry(i, j))).sum())
            .collect()
    }

    /// Total number of correct votes over the whole matrix.
    pub fn grand_total(&self) -> u64 {
        self.entries.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn model_accuracy(&self, j: usize) -> f64 {
        let correct: u64 = (0..self.examples)
            .map(|i| u64::from(self.entry(i, j)))
            .sum();
        correct as f64 / self.examples as f64
    }
}

/// Per-example correctness of several models against one ground truth:
/// entry `(i, j)` is 1 iff `predictions[j][i] == y_true[i]`.
pub fn correctness_matrix(
    y_true: &[usize],
    predictions: &[Vec<usize>],
) -> Result<CorrectnessMatrix> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput("prediction list"));
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("label vectors"));
    }
    for pred in predictions {
        if pred.len() != y_true.len() {
            return Err(Error::LengthMismatch {
                expected: y_true.len(),
                actual: pred.len(),
            });
        }
    }
    let models = predictions.len();
    let mut entries = Vec::with_capacity(y_true.len() * models);
    for (i, &truth) in y_true.iter().enumerate() {
        for pred in predictions {
            entries.push(u8::from(pred[i] == truth));
        }
    }
    CorrectnessMatrix::from_entries(entries, y_true.len(), models)
}
