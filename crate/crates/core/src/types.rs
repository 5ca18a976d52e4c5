//! Domain types shared by every module: datasets, learner specifications,
//! and the report structures emitted by estimators and hypothesis tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            data: vec![0.0; rows * cols],
            rows,
            cols,
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("matrix rows"));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::EmptyInput("matrix columns"));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            data,
            rows: rows.len(),
            cols,
        })
    }

    /// Flat row-major construction; `data.len()` must equal `rows * cols`.
    pub fn from_flat(data: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "flat data of length {} cannot form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { data, rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// New matrix holding the listed rows, in order. Indices may repeat
    /// (bootstrap in-bag samples do).
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            data,
            rows: indices.len(),
            cols: self.cols,
        }
    }
}

/// Class labels are dense integers `0..K`. A prediction vector and a ground
/// truth vector share this representation.
pub type LabelVector = Vec<usize>;

/// A labelled dataset: an `n x d` feature matrix plus `n` class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<usize>,
    class_count: usize,
}

impl Dataset {
    /// Validates that labels match the feature rows and lie in `0..class_count`.
    pub fn new(features: Matrix, labels: Vec<usize>, class_count: usize) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::LengthMismatch {
                expected: features.rows(),
                actual: labels.len(),
            });
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput("dataset"));
        }
        if class_count == 0 {
            return Err(Error::InvalidArgument(
                "class_count must be positive".into(),
            ));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y >= class_count) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} out of range for {class_count} classes"
            )));
        }
        Ok(Dataset {
            features,
            labels,
            class_count,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of examples per class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_count];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// Sub-dataset of the listed rows, in order; indices may repeat.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_count: self.class_count,
        }
    }
}

/// A named learning algorithm plus its hyperparameter assignment.
///
/// The name must be registered in the learners module; hyperparameters are
/// validated at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub name: String,
    pub hyperparameters: BTreeMap<String, f64>,
}

impl LearnerSpec {
    pub fn new(name: impl Into<String>) -> Self {
        LearnerSpec {
            name: name.into(),
            hyperparameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.hyperparameters.insert(key.into(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.hyperparameters.get(key).copied()
    }

    /// k-nearest-neighbors with the given neighbor count.
    pub fn knn(k_neighbors: usize) -> Self {
        LearnerSpec::new("knn").with("k_neighbors", k_neighbors as f64)
    }

    /// Softmax regression with the given epoch count and learning rate.
    pub fn softmax(epochs: usize, learning_rate: f64) -> Self {
        LearnerSpec::new("softmax")
            .with("epochs", epochs as f64)
            .with("learning_rate", learning_rate)
    }
}

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// Value of the test statistic.
    pub statistic: f64,
    /// Which statistic: "z", "chi2", "Q", "F", "t", or "b" for the exact
    /// binomial count.
    pub statistic_name: String,
    /// Degrees of freedom; the second entry is 0 when unused.
    pub df: (f64, f64),
    pub p_value: f64,
    pub alpha: f64,
    pub reject_null: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TestReport {
    /// Builds a report; `reject_null` is derived as `p_value < alpha`.
    pub fn new(
        statistic: f64,
        statistic_name: impl Into<String>,
        df: (f64, f64),
        p_value: f64,
        alpha: f64,
    ) -> Self {
        TestReport {
            statistic,
            statistic_name: statistic_name.into(),
            df,
            p_value,
            alpha,
            reject_null: p_value < alpha,
            warnings: Vec::new(),
        }
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }
}

/// Confidence-interval construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    NormalApprox,
    SeT,
    Percentile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub method: CiMethod,
    pub lower: f64,
    pub upper: f64,
}

/// Point estimate plus per-round values for any resampling estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub estimator: String,
    #[serde(rename = "point")]
    pub point_estimate: f64,
    #[serde(rename = "rounds")]
    pub per_round: Vec<f64>,
    pub ci: Option<ConfidenceInterval>,
    /// Rounds skipped because their statistic was undefined
    /// (e.g. bootstrap rounds with an empty out-of-bag set).
    pub skipped_rounds: usize,
    pub seed_provenance: Option<crate::rng::SeedSpec>,
}

impl EvalReport {
    pub fn new(estimator: impl Into<String>, point_estimate: f64, per_round: Vec<f64>) -> Self {
        EvalReport {
            estimator: estimator.into(),
            point_estimate,
            per_round,
            ci: None,
            skipped_rounds: 0,
            seed_provenance: None,
        }
    }

    pub fn with_ci(mut self, method: CiMethod, lower: f64, upper: f64) -> Self {
        self.ci = Some(ConfidenceInterval {
            method,
            lower,
            upper,
        });
        self
    }
}
