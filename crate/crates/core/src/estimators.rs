//! Point estimators and confidence intervals: holdout, repeated holdout,
//! k-fold, bootstrap flavors (out-of-bag, .632, .632+), the no-information
//! rate, and learning curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{fit, FittedModel};
use crate::metrics::accuracy;
use crate::numerics::{normal_quantile, t_quantile};
use crate::resampling::{apportion, BootstrapPlan, FoldPlan, SplitPlan};
use crate::rng::{derive_stream, SeedSpec};
use crate::types::{Dataset, EvalReport, LearnerSpec};

/// Fixed fitting stream for evaluators whose contract takes no seed.
/// The built-in learners are deterministic, so this only matters if a
/// stochastic learner is registered later.
const FIT_SEED: SeedSpec = SeedSpec {
    master_seed: 0x5EED_F175,
    stream_id: 0,
};

fn ensure_multiclass_training(labels: &[usize], context: &str) -> Result<()> {
    let first = labels[0];
    if labels.iter().all(|&y| y == first) {
        return Err(Error::Degenerate(format!(
            "{context}: training subset contains a single class"
        )));
    }
    Ok(())
}

fn score_split(
    spec: &LearnerSpec,
    data: &Dataset,
    plan: &SplitPlan,
    seed: SeedSpec,
) -> Result<f64> {
    let train = data.subset(&plan.train_indices);
    ensure_multiclass_training(train.labels(), "holdout training side")?;
    let model = fit(spec, &train, seed)?;
    let test = data.subset(&plan.test_indices);
    let preds = model.predict(test.features())?;
    accuracy(test.labels(), &preds)
}

/// Test accuracy of one train/test split.
pub fn evaluate_holdout(
    spec: &LearnerSpec,
    data: &Dataset,
    plan: &SplitPlan,
    seed: SeedSpec,
) -> Result<EvalReport> {
    plan.validate(data.len())?;
    let acc = score_split(spec, data, plan, seed)?;
    Ok(EvalReport::new("holdout", acc, vec![acc]))
}

/// Mean test accuracy over a list of holdout plans.
pub fn evaluate_repeated_holdout(
    spec: &LearnerSpec,
    data: &Dataset,
    plans: &[SplitPlan],
) -> Result<EvalReport> {
    if plans.is_empty() {
        return Err(Error::EmptyInput("split plans"));
    }
    let mut per_round = Vec::with_capacity(plans.len());
    for (r, plan) in plans.iter().enumerate() {
        plan.validate(data.len())?;
        per_round.push(score_split(
            spec,
            data,
            plan,
            derive_stream(FIT_SEED, r as u64),
        )?);
    }
    let mean = per_round.iter().sum::<f64>() / per_round.len() as f64;
    Ok(EvalReport::new("repeated-holdout", mean, per_round))
}

/// k-fold cross-validation: each fold serves once as the validation set;
/// the point estimate is the unweighted arithmetic mean of the k fold
/// accuracies.
pub fn evaluate_kfold(spec: &LearnerSpec, data: &Dataset, folds: &FoldPlan) -> Result<EvalReport> {
    folds.validate(data.len())?;
    let mut per_round = Vec::with_capacity(folds.k());
    for f in 0..folds.k() {
        let plan = SplitPlan {
            train_indices: folds.train_indices(f),
            test_indices: folds.folds[f].clone(),
        };
        let acc =
            score_split(spec, data, &plan, derive_stream(FIT_SEED, f as u64)).map_err(|e| {
                Error::Fold {
                    index: f,
                    source: Box::new(e),
                }
            })?;
        per_round.push(acc);
    }
    let mean = per_round.iter().sum::<f64>() / per_round.len() as f64;
    Ok(EvalReport::new("kfold", mean, per_round))
}

/// Which bootstrap blend a [`BootstrapEstimate`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMethod {
    Oob,
    E632,
    E632Plus,
}

/// Bootstrap evaluation result with the per-round ingredients needed by
/// the .632 family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapEstimate {
    pub method: BootstrapMethod,
    /// Mean of the per-round estimates under `method`.
    pub acc_boot: f64,
    /// Out-of-bag accuracy per usable round.
    pub per_round_oob: Vec<f64>,
    /// Resubstitution accuracy on each round's bootstrap sample.
    pub per_round_resub: Vec<f64>,
    /// Blend weight per round (empty for plain out-of-bag).
    pub omega_per_round: Vec<f64>,
    /// No-information rate used by .632+ (absent otherwise).
    pub gamma: Option<f64>,
    /// Rounds dropped because their out-of-bag set was empty.
    pub skipped_rounds: usize,
}

impl BootstrapEstimate {
    /// Per-round estimates under the current method.
    pub fn per_round_estimates(&self) -> Vec<f64> {
        match self.method {
            BootstrapMethod::Oob => self.per_round_oob.clone(),
            BootstrapMethod::E632 | BootstrapMethod::E632Plus => self
                .per_round_oob
                .iter()
                .zip(&self.per_round_resub)
                .zip(&self.omega_per_round)
                .map(|((&h, &r), &w)| w * h + (1.0 - w) * r)
                .collect(),
        }
    }

    pub fn to_eval_report(&self) -> EvalReport {
        let name = match self.method {
            BootstrapMethod::Oob => "boot-oob",
            BootstrapMethod::E632 => "boot-632",
            BootstrapMethod::E632Plus => "boot-632plus",
        };
        let mut report = EvalReport::new(name, self.acc_boot, self.per_round_estimates());
        report.skipped_rounds = self.skipped_rounds;
        report
    }
}

/// Leave-one-out bootstrap: fit on each bootstrap sample, score on its
/// out-of-bag examples. Rounds with an empty out-of-bag set are skipped
/// and counted. Resubstitution accuracy on the bootstrap sample is
/// recorded per round for the .632 blends.
pub fn bootstrap_oob(
    spec: &LearnerSpec,
    data: &Dataset,
    plan: &BootstrapPlan,
) -> Result<BootstrapEstimate> {
    if plan.rounds.is_empty() {
        return Err(Error::EmptyInput("bootstrap rounds"));
    }
    let mut per_round_oob = Vec::new();
    let mut per_round_resub = Vec::new();
    let mut skipped = 0usize;
    for (r, round) in plan.rounds.iter().enumerate() {
        if round.out_of_bag.is_empty() {
            skipped += 1;
            continue;
        }
        if round.in_bag.len() != data.len() {
            return Err(Error::InvalidPlan(format!(
                "round {r}: in-bag size {} does not match n = {}",
                round.in_bag.len(),
                data.len()
            )));
        }
        let train = data.subset(&round.in_bag);
        let model = fit(spec, &train, derive_stream(FIT_SEED, r as u64))?;
        let oob = data.subset(&round.out_of_bag);
        let preds = model.predict(oob.features())?;
        per_round_oob.push(accuracy(oob.labels(), &preds)?);
        let resub_preds = model.predict(train.features())?;
        per_round_resub.push(accuracy(train.labels(), &resub_preds)?);
    }
    if per_round_oob.is_empty() {
        return Err(Error::Degenerate(
            "every bootstrap round had an empty out-of-bag set".into(),
        ));
    }
    let acc_boot = per_round_oob.iter().sum::<f64>() / per_round_oob.len() as f64;
    Ok(BootstrapEstimate {
        method: BootstrapMethod::Oob,
        acc_boot,
        per_round_oob,
        per_round_resub,
        omega_per_round: Vec::new(),
        gamma: None,
        skipped_rounds: skipped,
    })
}

/// The .632 estimate: per round, `0.632 * acc_oob + 0.368 * acc_resub`.
pub fn bootstrap_632(oob: &BootstrapEstimate) -> Result<BootstrapEstimate> {
    if oob.per_round_resub.len() != oob.per_round_oob.len() {
        return Err(Error::InvalidArgument(
            "resubstitution accuracies missing from bootstrap estimate".into(),
        ));
    }
    let omega = vec![0.632; oob.per_round_oob.len()];
    let mut est = BootstrapEstimate {
        method: BootstrapMethod::E632,
        acc_boot: 0.0,
        per_round_oob: oob.per_round_oob.clone(),
        per_round_resub: oob.per_round_resub.clone(),
        omega_per_round: omega,
        gamma: None,
        skipped_rounds: oob.skipped_rounds,
    };
    let rounds = est.per_round_estimates();
    est.acc_boot = rounds.iter().sum::<f64>() / rounds.len() as f64;
    Ok(est)
}

/// The .632+ estimate. Per round, the relative overfitting rate
/// `R = (acc_resub - acc_oob) / (gamma - (1 - acc_oob))` is clipped to
/// [0, 1] (non-positive denominators give R = 0), the weight is
/// `omega = 0.632 / (1 - 0.368 R)`, and the round estimate is
/// `omega * acc_oob + (1 - omega) * acc_resub`.
pub fn bootstrap_632plus(oob: &BootstrapEstimate, gamma: f64) -> Result<BootstrapEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if oob.per_round_resub.len() != oob.per_round_oob.len() {
        return Err(Error::InvalidArgument(
            "resubstitution accuracies missing from bootstrap estimate".into(),
        ));
    }
    let omega: Vec<f64> = oob
        .per_round_oob
        .iter()
        .zip(&oob.per_round_resub)
        .map(|(&acc_h, &acc_r)| {
            let denominator = gamma - (1.0 - acc_h);
            let rate = if denominator <= 0.0 {
                0.0
            } else {
                ((acc_r - acc_h) / denominator).clamp(0.0, 1.0)
            };
            0.632 / (1.0 - 0.368 * rate)
        })
        .collect();
    let mut est = BootstrapEstimate {
        method: BootstrapMethod::E632Plus,
        acc_boot: 0.0,
        per_round_oob: oob.per_round_oob.clone(),
        per_round_resub: oob.per_round_resub.clone(),
        omega_per_round: omega,
        gamma: Some(gamma),
        skipped_rounds: oob.skipped_rounds,
    };
    let rounds = est.per_round_estimates();
    est.acc_boot = rounds.iter().sum::<f64>() / rounds.len() as f64;
    Ok(est)
}

/// No-information rate from class proportions: `sum_k p_k (1 - q_k)`,
/// where `p` comes from the truths and `q` from the predictions. This is
/// the expected error if predictions and labels were independent.
pub fn no_information_rate(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("label vectors"));
    }
    let k = y_true.iter().chain(y_pred).max().map_or(0, |&m| m + 1);
    let n = y_true.len() as f64;
    let mut p = vec![0.0; k];
    let mut q = vec![0.0; k];
    for (&t, &h) in y_true.iter().zip(y_pred) {
        p[t] += 1.0 / n;
        q[h] += 1.0 / n;
    }
    Ok(p.iter().zip(&q).map(|(&pk, &qk)| pk * (1.0 - qk)).sum())
}

/// No-information rate over all n^2 (example, label) pairings: the mean
/// 0-1 loss of predicting `f(x_i')` against `y_i` for every combination.
/// Quadratic cost, so n is capped at 10_000.
pub fn no_information_rate_pairs(model: &FittedModel, data: &Dataset) -> Result<f64> {
    if data.len() > 10_000 {
        return Err(Error::InvalidArgument(format!(
            "pairs form is quadratic; n = {} exceeds the 10000 cap",
            data.len()
        )));
    }
    let preds = model.predict(data.features())?;
    let n = data.len();
    let mut mismatches = 0u64;
    for &truth in data.labels() {
        for &pred in &preds {
            mismatches += u64::from(truth != pred);
        }
    }
    Ok(mismatches as f64 / (n as f64 * n as f64))
}

/// Normal-approximation interval `acc +- z * sqrt(acc (1-acc) / n)`,
/// clamped to [0, 1].
pub fn ci_normal_approx(acc: f64, n: usize, confidence: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&acc) {
        return Err(Error::InvalidArgument(format!(
            "accuracy must lie in [0, 1], got {acc}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let z = normal_quantile((1.0 + confidence) / 2.0)?;
    let half = z * (acc * (1.0 - acc) / n as f64).sqrt();
    Ok(((acc - half).max(0.0), (acc + half).min(1.0)))
}

/// t-based interval around the round mean, using the standard deviation of
/// the rounds (b - 1 denominator) as the standard error of the estimate.
/// Clamped to [0, 1].
pub fn ci_bootstrap_se(per_round: &[f64], confidence: f64) -> Result<(f64, f64)> {
    if per_round.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 rounds for an SE interval".into(),
        ));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let b = per_round.len() as f64;
    let mean = per_round.iter().sum::<f64>() / b;
    let sd = (per_round
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / (b - 1.0))
        .sqrt();
    let t = t_quantile((1.0 + confidence) / 2.0, b - 1.0)?;
    Ok(((mean - t * sd).max(0.0), (mean + t * sd).min(1.0)))
}

/// Linear interpolation between order statistics; order statistic `i`
/// (1-based) sits at quantile `(i - 1) / (b - 1)`, so the interval
/// endpoints match the usual percentile tables.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let b = sorted.len();
    let pos = q * (b - 1) as f64;
    let lo = pos.floor() as usize;
    if lo + 1 >= b {
        return sorted[b - 1];
    }
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// Percentile interval: the `alpha` and `1 - alpha` percentiles of the
/// round distribution, i.e. a `100 (1 - 2 alpha)` percent interval.
pub fn ci_percentile(per_round: &[f64], alpha: f64) -> Result<(f64, f64)> {
    if per_round.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 rounds for a percentile interval".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 0.5), got {alpha}"
        )));
    }
    let mut sorted = per_round.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((percentile(&sorted, alpha), percentile(&sorted, 1.0 - alpha)))
}

/// One point of a learning curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurvePoint {
    pub train_size: usize,
    pub train_acc: f64,
    pub test_acc: f64,
}

/// Learning curve: for each requested size, fit on a stratified random
/// subset of the plan's training side and score both that subset
/// (resubstitution) and the plan's fixed test side.
pub fn learning_curve(
    spec: &LearnerSpec,
    data: &Dataset,
    train_sizes: &[usize],
    test_plan: &SplitPlan,
    seed: SeedSpec,
) -> Result<Vec<LearningCurvePoint>> {
    test_plan.validate(data.len())?;
    if train_sizes.is_empty() {
        return Err(Error::EmptyInput("train sizes"));
    }
    if train_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "train sizes must be strictly increasing".into(),
        ));
    }
    let pool = &test_plan.train_indices;
    let test = data.subset(&test_plan.test_indices);
    let class_count = data.class_count();
    let pool_labels: Vec<usize> = pool.iter().map(|&i| data.labels()[i]).collect();
    let mut counts = vec![0usize; class_count];
    for &y in &pool_labels {
        counts[y] += 1;
    }

    let mut points = Vec::with_capacity(train_sizes.len());
    for (si, &size) in train_sizes.iter().enumerate() {
        if size == 0 || size > pool.len() {
            return Err(Error::InvalidArgument(format!(
                "train size {size} outside 1..={}",
                pool.len()
            )));
        }
        let subset: Vec<usize> = if size == pool.len() {
            pool.clone()
        } else {
            let shares = apportion(&counts, size, pool.len());
            let mut rng = derive_stream(seed, si as u64).rng();
            let mut chosen = Vec::with_capacity(size);
            for (class, &share) in shares.iter().enumerate() {
                let mut members: Vec<usize> = pool
                    .iter()
                    .copied()
                    .filter(|&i| data.labels()[i] == class)
                    .collect();
                rng.shuffle(&mut members);
                chosen.extend_from_slice(&members[..share]);
            }
            chosen.sort_unstable();
            chosen
        };
        let train = data.subset(&subset);
        let model = fit(spec, &train, derive_stream(seed, si as u64))?;
        let train_preds = model.predict(train.features())?;
        let test_preds = model.predict(test.features())?;
        points.push(LearningCurvePoint {
            train_size: size,
            train_acc: accuracy(train.labels(), &train_preds)?,
            test_acc: accuracy(test.labels(), &test_preds)?,
        });
    }
    Ok(points)
}
