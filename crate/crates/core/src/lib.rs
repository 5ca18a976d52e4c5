//! Model evaluation, model selection, and algorithm comparison toolkit.
//!
//! The crate bundles the machinery needed to estimate and compare
//! classifier performance on small datasets: deterministic resampling
//! plans (holdout, k-fold, bootstrap, 5x2), point estimators with
//! confidence intervals (including the .632 and .632+ bootstrap),
//! hypothesis tests over shared test sets (McNemar, Cochran's Q, an
//! F-test, a two-proportion z-test), paired tests over repeated refits
//! (resampled t, k-fold t, 5x2cv t and F), model-selection workflows
//! (three-way holdout, k-fold grid selection, the one-standard-error
//! rule, nested cross-validation), and a Monte Carlo harness that
//! measures empirical Type-I error of the comparison tests.
//!
//! Two small built-in learners (k-nearest neighbors and softmax
//! regression) plus synthetic data generators and a bundled Iris fixture
//! make every procedure runnable end to end. All randomness flows through
//! explicit [`rng::SeedSpec`] values, so every result is reproducible.
//!
//! # Example
//!
//! Estimate 3-nearest-neighbor accuracy on Iris with stratified 10-fold
//! cross-validation, then attach a t-based interval:
//!
//! ```
//! use modeval::estimators::{ci_bootstrap_se, evaluate_kfold};
//! use modeval::learners::iris;
//! use modeval::resampling::kfold_plan;
//! use modeval::{LearnerSpec, SeedSpec};
//!
//! let data = iris();
//! let folds = kfold_plan(data.len(), data.labels(), 10, true, SeedSpec::new(1, 0))?;
//! let report = evaluate_kfold(&LearnerSpec::knn(3), &data, &folds)?;
//! assert!(report.point_estimate > 0.9);
//!
//! let (lower, upper) = ci_bootstrap_se(&report.per_round, 0.95)?;
//! assert!(lower <= report.point_estimate && report.point_estimate <= upper);
//! # Ok::<(), modeval::Error>(())
//! ```
//!
//! Compare three models on one test set with an omnibus test:
//!
//! ```
//! use modeval::metrics::correctness_matrix;
//! use modeval::model_tests::cochrans_q;
//!
//! let y_true = vec![0, 1, 1, 0, 1, 0, 0, 1];
//! let preds = vec![
//!     vec![0, 1, 1, 0, 1, 0, 0, 0],
//!     vec![0, 1, 0, 0, 1, 1, 0, 1],
//!     vec![1, 1, 1, 0, 0, 0, 0, 1],
//! ];
//! let matrix = correctness_matrix(&y_true, &preds)?;
//! let report = cochrans_q(&matrix, 0.05)?;
//! assert_eq!(report.statistic_name, "Q");
//! assert_eq!(report.reject_null, report.p_value < 0.05);
//! # Ok::<(), modeval::Error>(())
//! ```

pub mod algo_tests;
pub mod error;
pub mod estimators;
pub mod learners;
pub mod metrics;
pub mod numerics;
pub mod resampling;
pub mod rng;
pub mod selection;
pub mod simulate;
pub mod types;

pub use error::{Error, Result};
pub use rng::{derive_stream, SeedSpec};
pub use types::{
    CiMethod, ConfidenceInterval, Dataset, EvalReport, LabelVector, LearnerSpec, Matrix, TestReport,
};
