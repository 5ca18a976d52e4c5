//! Hypothesis tests that compare learning algorithms by repeated refitting:
//! the resampled paired t-test, the k-fold cross-validated paired t-test,
//! the 5x2cv paired t-test, and the combined 5x2cv F-test.
//!
//! Within every paired test both learners are fit on byte-identical
//! training index sets and scored on byte-identical test index sets, round
//! by round. The per-round accuracies are logged in the result so the
//! statistic can be replayed from the record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::fit;
use crate::metrics::accuracy;
use crate::numerics::{f_sf, t_sf};
use crate::resampling::{five_by_two_plan, kfold_plan, repeated_holdout_plan, SplitPlan};
use crate::rng::{derive_stream, SeedSpec};
use crate::types::{Dataset, LearnerSpec, TestReport};

/// How fitting seeds relate across the two learner slots of a paired test.
/// `Shared` makes a learner compared against itself perfectly correlated;
/// `Independent` gives each slot its own stream. The built-in learners are
/// deterministic, so this only affects stochastic learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMode {
    Shared,
    Independent,
}

/// Resampling scheme behind a set of paired differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingScheme {
    ResampledHoldout,
    KFold,
    FiveByTwo,
}

/// Accuracies of both learners on one evaluation unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// 'A' for plain rounds; 'A'/'B' for the two halves of a 5x2
    /// replication.
    pub half: char,
    pub acc1: f64,
    pub acc2: f64,
}

impl RoundRecord {
    pub fn diff(&self) -> f64 {
        self.acc1 - self.acc2
    }
}

/// A paired comparison outcome: the test report plus the per-round log it
/// was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub report: TestReport,
    pub scheme: PairingScheme,
    pub rounds: Vec<RoundRecord>,
}

/// Paired t statistic from per-round differences:
/// `t = mean(d) sqrt(k) / sd(d)` with `k - 1` degrees of freedom.
///
/// All-zero differences are an error (the pipelines are indistinguishable);
/// zero variance around a non-zero mean returns an infinite statistic,
/// which callers report as p = 0.
pub fn paired_t_statistic(diffs: &[f64]) -> Result<(f64, f64)> {
    if diffs.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 paired differences".into(),
        ));
    }
    let k = diffs.len() as f64;
    let first = diffs[0];
    if diffs.iter().all(|&d| d == first) {
        if first == 0.0 {
            return Err(Error::Degenerate(
                "indistinguishable: every per-round difference is zero".into(),
            ));
        }
        // Constant non-zero difference: perfect separation.
        return Ok((f64::INFINITY * first.signum(), k - 1.0));
    }
    let mean = diffs.iter().sum::<f64>() / k;
    let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
    if ss == 0.0 {
        return Ok((f64::INFINITY * mean.signum(), k - 1.0));
    }
    let t = mean * k.sqrt() / (ss / (k - 1.0)).sqrt();
    Ok((t, k - 1.0))
}

/// Per-replication variance of a 5x2 pair:
/// `s^2 = (a - m)^2 + (b - m)^2` with `m = (a + b) / 2`.
fn replication_variance(pair: (f64, f64)) -> f64 {
    let mean = (pair.0 + pair.1) / 2.0;
    (pair.0 - mean) * (pair.0 - mean) + (pair.1 - mean) * (pair.1 - mean)
}

/// 5x2cv t statistic from the five (first-half, second-half) difference
/// pairs: `t = a_1 / sqrt(mean of the five s_i^2)`, 5 degrees of freedom.
/// The numerator is the first replication's first-half difference, so the
/// statistic depends on replication order.
pub fn five_by_two_t_statistic(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() != 5 {
        return Err(Error::InvalidArgument(format!(
            "expected 5 replication pairs, got {}",
            pairs.len()
        )));
    }
    let sum_s2: f64 = pairs.iter().map(|&p| replication_variance(p)).sum();
    if sum_s2 == 0.0 {
        return Err(Error::Degenerate(
            "zero variance across replications".into(),
        ));
    }
    Ok(pairs[0].0 / (sum_s2 / 5.0).sqrt())
}

/// Combined 5x2cv F statistic: the squares of all ten half differences
/// over twice the summed replication variances, with (10, 5) degrees of
/// freedom.
pub fn five_by_two_f_statistic(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() != 5 {
        return Err(Error::InvalidArgument(format!(
            "expected 5 replication pairs, got {}",
            pairs.len()
        )));
    }
    let sum_s2: f64 = pairs.iter().map(|&p| replication_variance(p)).sum();
    if sum_s2 == 0.0 {
        return Err(Error::Degenerate(
            "zero variance across replications".into(),
        ));
    }
    let sum_squares: f64 = pairs.iter().map(|&(a, b)| a * a + b * b).sum();
    Ok(sum_squares / (2.0 * sum_s2))
}

fn slot_seeds(fit_stream: SeedSpec, round: u64, mode: SeedMode) -> (SeedSpec, SeedSpec) {
    let base = derive_stream(fit_stream, round);
    match mode {
        SeedMode::Shared => {
            let shared = derive_stream(base, 0);
            (shared, shared)
        }
        SeedMode::Independent => (derive_stream(base, 1), derive_stream(base, 2)),
    }
}

/// Fits both specs on the plan's training side and scores both on its test
/// side. The index sets are built once and shared.
fn score_pair(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    plan: &SplitPlan,
    seeds: (SeedSpec, SeedSpec),
) -> Result<(f64, f64)> {
    let train = data.subset(&plan.train_indices);
    let test = data.subset(&plan.test_indices);
    let model1 = fit(spec1, &train, seeds.0)?;
    let model2 = fit(spec2, &train, seeds.1)?;
    let acc1 = accuracy(test.labels(), &model1.predict(test.features())?)?;
    let acc2 = accuracy(test.labels(), &model2.predict(test.features())?)?;
    Ok((acc1, acc2))
}

fn t_report_from_diffs(diffs: &[f64], alpha: f64) -> Result<TestReport> {
    let (t, df) = paired_t_statistic(diffs)?;
    if t.is_infinite() {
        return Ok(TestReport::new(t, "t", (df, 0.0), 0.0, alpha)
            .with_warning("zero variance around a non-zero mean difference: perfect separation"));
    }
    let p = 2.0 * t_sf(t.abs(), df)?;
    Ok(TestReport::new(t, "t", (df, 0.0), p, alpha))
}

/// Resampled paired t-test: `repetitions` random stratified splits, both
/// learners fit per split, the accuracy differences fed to a paired t with
/// `repetitions - 1` degrees of freedom.
///
/// The report carries a warning: overlapping test sets violate the t-test's
/// independence assumptions, so the test runs hot and is kept for
/// comparison studies.
#[allow(clippy::too_many_arguments)]
pub fn paired_t_resampled(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    repetitions: usize,
    test_fraction: f64,
    seed: SeedSpec,
    alpha: f64,
    seed_mode: SeedMode,
) -> Result<PairedComparison> {
    if repetitions < 2 {
        return Err(Error::InvalidArgument("repetitions must be >= 2".into()));
    }
    let plans = repeated_holdout_plan(
        data.len(),
        data.labels(),
        test_fraction,
        repetitions,
        true,
        derive_stream(seed, 0),
    )?;
    let fit_stream = derive_stream(seed, 1);
    let mut rounds = Vec::with_capacity(repetitions);
    for (r, plan) in plans.iter().enumerate() {
        let seeds = slot_seeds(fit_stream, r as u64, seed_mode);
        let (acc1, acc2) = score_pair(spec1, spec2, data, plan, seeds)?;
        rounds.push(RoundRecord {
            round: r,
            half: 'A',
            acc1,
            acc2,
        });
    }
    let diffs: Vec<f64> = rounds.iter().map(RoundRecord::diff).collect();
    let report = t_report_from_diffs(&diffs, alpha)?
        .with_warning("resampled paired t-test: overlapping test sets inflate false positives");
    Ok(PairedComparison {
        report,
        scheme: PairingScheme::ResampledHoldout,
        rounds,
    })
}

/// k-fold cross-validated paired t-test: one shared fold plan, per-fold
/// accuracy differences through the same t formula with `k - 1` degrees of
/// freedom. Training sets overlap across folds, hence the warning.
#[allow(clippy::too_many_arguments)]
pub fn paired_t_kfold(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    k: usize,
    stratify: bool,
    seed: SeedSpec,
    alpha: f64,
    seed_mode: SeedMode,
) -> Result<PairedComparison> {
    let folds = kfold_plan(
        data.len(),
        data.labels(),
        k,
        stratify,
        derive_stream(seed, 0),
    )?;
    let fit_stream = derive_stream(seed, 1);
    let mut rounds = Vec::with_capacity(k);
    for f in 0..folds.k() {
        let plan = SplitPlan {
            train_indices: folds.train_indices(f),
            test_indices: folds.folds[f].clone(),
        };
        let seeds = slot_seeds(fit_stream, f as u64, seed_mode);
        let (acc1, acc2) =
            score_pair(spec1, spec2, data, &plan, seeds).map_err(|e| Error::Fold {
                index: f,
                source: Box::new(e),
            })?;
        rounds.push(RoundRecord {
            round: f,
            half: 'A',
            acc1,
            acc2,
        });
    }
    let diffs: Vec<f64> = rounds.iter().map(RoundRecord::diff).collect();
    let report = t_report_from_diffs(&diffs, alpha)?
        .with_warning("k-fold paired t-test: overlapping training sets bias the variance estimate");
    Ok(PairedComparison {
        report,
        scheme: PairingScheme::KFold,
        rounds,
    })
}

#[allow(clippy::type_complexity)]
fn five_by_two_rounds(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    seed: SeedSpec,
    seed_mode: SeedMode,
) -> Result<(Vec<RoundRecord>, Vec<(f64, f64)>)> {
    let plans = five_by_two_plan(data.len(), data.labels(), derive_stream(seed, 0))?;
    let fit_stream = derive_stream(seed, 1);
    let mut rounds = Vec::with_capacity(10);
    let mut pairs = Vec::with_capacity(5);
    for (i, (first, second)) in plans.iter().enumerate() {
        let seeds_a = slot_seeds(fit_stream, 2 * i as u64, seed_mode);
        let (a1, a2) = score_pair(spec1, spec2, data, first, seeds_a)?;
        let seeds_b = slot_seeds(fit_stream, 2 * i as u64 + 1, seed_mode);
        let (b1, b2) = score_pair(spec1, spec2, data, second, seeds_b)?;
        rounds.push(RoundRecord {
            round: i,
            half: 'A',
            acc1: a1,
            acc2: a2,
        });
        rounds.push(RoundRecord {
            round: i,
            half: 'B',
            acc1: b1,
            acc2: b2,
        });
        pairs.push((a1 - a2, b1 - b2));
    }
    Ok((rounds, pairs))
}

/// 5x2cv paired t-test: five replications of swapped 50/50 splits; the
/// statistic is the first replication's first-half difference over the
/// root mean replication variance, with 5 degrees of freedom.
pub fn paired_t_5x2cv(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    seed: SeedSpec,
    alpha: f64,
    seed_mode: SeedMode,
) -> Result<PairedComparison> {
    let (rounds, pairs) = five_by_two_rounds(spec1, spec2, data, seed, seed_mode)?;
    let t = five_by_two_t_statistic(&pairs)?;
    let p = 2.0 * t_sf(t.abs(), 5.0)?;
    Ok(PairedComparison {
        report: TestReport::new(t, "t", (5.0, 0.0), p, alpha),
        scheme: PairingScheme::FiveByTwo,
        rounds,
    })
}

/// Combined 5x2cv F-test: all ten squared half differences over twice the
/// summed replication variances, one-sided against F(10, 5).
pub fn combined_f_5x2cv(
    spec1: &LearnerSpec,
    spec2: &LearnerSpec,
    data: &Dataset,
    seed: SeedSpec,
    alpha: f64,
    seed_mode: SeedMode,
) -> Result<PairedComparison> {
    let (rounds, pairs) = five_by_two_rounds(spec1, spec2, data, seed, seed_mode)?;
    let f = five_by_two_f_statistic(&pairs)?;
    let p = f_sf(f, 10.0, 5.0)?;
    Ok(PairedComparison {
        report: TestReport::new(f, "F", (10.0, 5.0), p, alpha),
        scheme: PairingScheme::FiveByTwo,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{make_blobs, make_circles};
    use crate::types::Matrix;

    fn circles() -> Dataset {
        make_circles(300, 0.12, SeedSpec::new(404, 0)).unwrap()
    }

    fn blobs() -> Dataset {
        let centers = Matrix::from_rows(vec![vec![0.0, 0.0], vec![2.5, 2.5]]).unwrap();
        make_blobs(60, &centers, 1.2, SeedSpec::new(505, 0)).unwrap()
    }

    #[test]
    fn identical_specs_with_shared_seed_are_indistinguishable() {
        let data = circles();
        let spec = LearnerSpec::knn(3);
        let err = paired_t_resampled(
            &spec,
            &spec,
            &data,
            10,
            1.0 / 3.0,
            SeedSpec::new(1, 0),
            0.05,
            SeedMode::Shared,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));

        let err = paired_t_kfold(
            &spec,
            &spec,
            &data,
            10,
            true,
            SeedSpec::new(1, 0),
            0.05,
            SeedMode::Shared,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));

        let err = paired_t_5x2cv(
            &spec,
            &spec,
            &data,
            SeedSpec::new(1, 0),
            0.05,
            SeedMode::Shared,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));

        let err = combined_f_5x2cv(
            &spec,
            &spec,
            &data,
            SeedSpec::new(1, 0),
            0.05,
            SeedMode::Shared,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn constant_nonzero_diff_gives_p_zero_with_warning() {
        let diffs = vec![0.1; 10];
        let (t, df) = paired_t_statistic(&diffs).unwrap();
        assert!(t.is_infinite() && t > 0.0);
        assert_eq!(df, 9.0);
        let report = t_report_from_diffs(&diffs, 0.05).unwrap();
        assert_eq!(report.p_value, 0.0);
        assert!(!report.warnings.is_empty());
    }

    #[test]
    fn resampled_t_matches_formula_replay() {
        let data = circles();
        let result = paired_t_resampled(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(15),
            &data,
            30,
            1.0 / 3.0,
            SeedSpec::new(7, 0),
            0.05,
            SeedMode::Shared,
        )
        .unwrap();
        assert_eq!(result.rounds.len(), 30);

        // Replay the cited statistic from the logged accuracies.
        let diffs: Vec<f64> = result.rounds.iter().map(RoundRecord::diff).collect();
        let k = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / k;
        let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
        let expected = mean * k.sqrt() / (ss / (k - 1.0)).sqrt();
        assert!((result.report.statistic - expected).abs() < 1e-12);
        assert_eq!(result.report.df, (29.0, 0.0));
    }

    #[test]
    fn kfold_t_matches_formula_replay_and_is_deterministic() {
        let data = blobs();
        let run = || {
            paired_t_kfold(
                &LearnerSpec::knn(1),
                &LearnerSpec::softmax(150, 0.3),
                &data,
                10,
                true,
                SeedSpec::new(9, 0),
                0.05,
                SeedMode::Shared,
            )
            .unwrap()
        };
        let result = run();
        let diffs: Vec<f64> = result.rounds.iter().map(RoundRecord::diff).collect();
        let k = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / k;
        let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
        let expected = mean * k.sqrt() / (ss / (k - 1.0)).sqrt();
        assert!((result.report.statistic - expected).abs() < 1e-12);

        let again = run();
        assert_eq!(result, again);
    }

    #[test]
    fn five_by_two_t_replays_from_fixture() {
        // Fixed replication pairs: hand evaluation of the statistic.
        let pairs = [
            (0.04, -0.02),
            (0.01, 0.03),
            (-0.02, 0.02),
            (0.05, 0.01),
            (0.00, -0.03),
        ];
        let mut sum_s2 = 0.0;
        for &(a, b) in &pairs {
            let mean = (a + b) / 2.0;
            sum_s2 += (a - mean) * (a - mean) + (b - mean) * (b - mean);
        }
        let expected = 0.04 / (sum_s2 / 5.0_f64).sqrt();
        let got = five_by_two_t_statistic(&pairs).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn five_by_two_t_on_real_learners_swaps_sign() {
        let data = circles();
        let seed = SeedSpec::new(11, 0);
        let forward = paired_t_5x2cv(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(25),
            &data,
            seed,
            0.05,
            SeedMode::Shared,
        )
        .unwrap();
        let backward = paired_t_5x2cv(
            &LearnerSpec::knn(25),
            &LearnerSpec::knn(1),
            &data,
            seed,
            0.05,
            SeedMode::Shared,
        )
        .unwrap();
        assert!((forward.report.statistic + backward.report.statistic).abs() < 1e-12);
        assert!((forward.report.p_value - backward.report.p_value).abs() < 1e-12);
    }

    #[test]
    fn combined_f_replays_and_ignores_sign() {
        let pairs = [
            (0.04, -0.02),
            (0.01, 0.03),
            (-0.02, 0.02),
            (0.05, 0.01),
            (0.00, -0.03),
        ];
        let mut sum_s2 = 0.0;
        let mut sum_sq = 0.0;
        for &(a, b) in &pairs {
            let mean = (a + b) / 2.0;
            sum_s2 += (a - mean) * (a - mean) + (b - mean) * (b - mean);
            sum_sq += a * a + b * b;
        }
        let expected = sum_sq / (2.0 * sum_s2);
        assert!((five_by_two_f_statistic(&pairs).unwrap() - expected).abs() < 1e-12);

        let flipped: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (-a, -b)).collect();
        assert!((five_by_two_f_statistic(&flipped).unwrap() - expected).abs() < 1e-12);

        assert!(matches!(
            five_by_two_f_statistic(&[(0.0, 0.0); 5]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn combined_f_on_real_learners_is_deterministic() {
        let data = circles();
        let seed = SeedSpec::new(13, 0);
        let a = combined_f_5x2cv(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(25),
            &data,
            seed,
            0.05,
            SeedMode::Shared,
        )
        .unwrap();
        let b = combined_f_5x2cv(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(25),
            &data,
            seed,
            0.05,
            SeedMode::Shared,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.report.df, (10.0, 5.0));
    }

    #[test]
    fn logged_rounds_reproduce_from_the_derived_plan() {
        // The plan and fitting seeds re-derive outside the test function,
        // confirming that both slots saw the same split.
        let data = circles();
        let seed = SeedSpec::new(17, 0);
        let result = paired_t_resampled(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(15),
            &data,
            5,
            1.0 / 3.0,
            seed,
            0.05,
            SeedMode::Shared,
        )
        .unwrap();

        let plans = repeated_holdout_plan(
            data.len(),
            data.labels(),
            1.0 / 3.0,
            5,
            true,
            derive_stream(seed, 0),
        )
        .unwrap();
        let seeds = slot_seeds(derive_stream(seed, 1), 0, SeedMode::Shared);
        let (acc1, acc2) = score_pair(
            &LearnerSpec::knn(1),
            &LearnerSpec::knn(15),
            &data,
            &plans[0],
            seeds,
        )
        .unwrap();
        assert_eq!(result.rounds[0].acc1, acc1);
        assert_eq!(result.rounds[0].acc2, acc2);
    }
}
