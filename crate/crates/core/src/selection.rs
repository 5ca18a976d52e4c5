//! Model-selection workflows: three-way holdout, k-fold grid selection
//! with final refit, the one-standard-error rule, and nested
//! cross-validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::evaluate_kfold;
use crate::learners::fit;
use crate::metrics::accuracy;
use crate::resampling::{holdout_split, kfold_plan, FoldPlan};
use crate::rng::{derive_stream, SeedSpec};
use crate::types::{Dataset, EvalReport, LearnerSpec};

/// Which end of a hyperparameter axis counts as the simpler model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplerEnd {
    Smaller,
    Larger,
}

/// One hyperparameter axis: candidate values in evaluation order plus the
/// declared simplicity direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub name: String,
    pub values: Vec<f64>,
    pub simpler: SimplerEnd,
}

/// A hyperparameter grid over one base learner. The one-standard-error
/// rule is meaningless without a complexity order, so every axis declares
/// which end is simpler; configurations are ordered lexicographically by
/// per-axis simplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub learner: String,
    pub axes: Vec<GridAxis>,
}

impl Grid {
    pub fn new(learner: impl Into<String>) -> Self {
        Grid {
            learner: learner.into(),
            axes: Vec::new(),
        }
    }

    pub fn with_axis(
        mut self,
        name: impl Into<String>,
        values: Vec<f64>,
        simpler: SimplerEnd,
    ) -> Self {
        self.axes.push(GridAxis {
            name: name.into(),
            values,
            simpler,
        });
        self
    }

    /// Cartesian product of all axes, in mixed-radix order (first axis
    /// slowest).
    pub fn configs(&self) -> Result<Vec<LearnerSpec>> {
        if self.axes.iter().any(|a| a.values.is_empty()) {
            return Err(Error::EmptyInput("grid axis values"));
        }
        let mut configs = vec![LearnerSpec::new(self.learner.clone())];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(configs.len() * axis.values.len());
            for config in &configs {
                for &value in &axis.values {
                    next.push(config.clone().with(axis.name.clone(), value));
                }
            }
            configs = next;
        }
        if configs.is_empty() {
            return Err(Error::EmptyInput("grid"));
        }
        Ok(configs)
    }

    /// Complexity rank per configuration index (0 = simplest), a total
    /// order: lexicographic over per-axis simplicity positions, with value
    /// ties broken by position in the axis.
    pub fn complexity_ranks(&self) -> Result<Vec<usize>> {
        let radices: Vec<usize> = self.axes.iter().map(|a| a.values.len()).collect();
        let total: usize = radices.iter().product();
        if total == 0 {
            return Err(Error::EmptyInput("grid"));
        }
        // Per axis: simplicity position of each value index.
        let mut positions: Vec<Vec<usize>> = Vec::with_capacity(self.axes.len());
        for axis in &self.axes {
            let mut order: Vec<usize> = (0..axis.values.len()).collect();
            order.sort_by(|&i, &j| {
                let cmp = axis.values[i].partial_cmp(&axis.values[j]).unwrap();
                match axis.simpler {
                    SimplerEnd::Smaller => cmp.then(i.cmp(&j)),
                    SimplerEnd::Larger => cmp.reverse().then(i.cmp(&j)),
                }
            });
            let mut pos = vec![0usize; axis.values.len()];
            for (rank, &value_index) in order.iter().enumerate() {
                pos[value_index] = rank;
            }
            positions.push(pos);
        }
        // Config index decomposes in the same mixed radix used by configs().
        let mut ranks = Vec::with_capacity(total);
        for index in 0..total {
            let mut rest = index;
            let mut rank = 0usize;
            for (axis_idx, &radix) in radices.iter().enumerate().rev() {
                let digit = rest % radix;
                rest /= radix;
                let weight: usize = radices[axis_idx + 1..].iter().product();
                rank += positions[axis_idx][digit] * weight;
            }
            ranks.push(rank);
        }
        Ok(ranks)
    }
}

/// Selection policy over the per-configuration scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Highest mean score; ties go to the simplest configuration.
    BestMean,
    /// Simplest configuration whose mean lies within one standard error of
    /// the best mean.
    OneSe,
}

/// Scores for one grid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigScore {
    pub spec: LearnerSpec,
    pub mean_acc: f64,
    /// Sample standard deviation of the fold scores over sqrt(k); zero for
    /// single-validation-set workflows.
    pub se_acc: f64,
    pub per_fold: Vec<f64>,
}

/// Outcome of one selection workflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub workflow: String,
    pub per_config: Vec<ConfigScore>,
    /// Complexity rank per configuration (0 = simplest).
    pub complexity_rank: Vec<usize>,
    pub chosen_index: usize,
    pub rule: SelectionRule,
    /// Accuracy of the refit chosen model on the withheld test set.
    pub final_test_acc: Option<f64>,
    pub refit_on_all: bool,
    /// Hash of the shared fold plan scored by every configuration.
    pub fold_plan_hash: Option<u64>,
    /// How many times the withheld test set was evaluated (must be 1).
    pub test_evaluations: u32,
}

fn fnv1a_folds(folds: &FoldPlan) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut absorb = |value: u64| {
        for byte in value.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100_0000_01b3);
        }
    };
    for fold in &folds.folds {
        absorb(u64::MAX); // fold separator
        for &i in fold {
            absorb(i as u64);
        }
    }
    hash
}

/// Index of the winning configuration under `rule`, given mean scores,
/// standard errors, and the complexity total order.
fn choose(means: &[f64], ses: &[f64], ranks: &[usize], rule: SelectionRule) -> usize {
    let best = (0..means.len())
        .max_by(|&i, &j| {
            means[i]
                .partial_cmp(&means[j])
                .unwrap()
                .then(ranks[j].cmp(&ranks[i]))
        })
        .unwrap();
    match rule {
        SelectionRule::BestMean => best,
        SelectionRule::OneSe => {
            let threshold = means[best] - ses[best];
            (0..means.len())
                .filter(|&i| means[i] >= threshold)
                .min_by_key(|&i| ranks[i])
                .unwrap()
        }
    }
}

/// Grid selection by k-fold cross-validation.
///
/// A stratifiable test split is withheld first; every configuration is then
/// scored on one shared fold plan over the training portion; the winner is
/// refit on the whole training portion and evaluated exactly once on the
/// withheld test set. With `refit_on_all` the winner is finally refit on
/// all data (the refit model is not returned, matching the report-only
/// contract).
///
/// `test_fraction = 0` skips the withheld split and selects on all data —
/// the final full-data selection that typically follows nested
/// cross-validation. No test accuracy is reported in that mode.
#[allow(clippy::too_many_arguments)]
pub fn select_kfold(
    grid: &Grid,
    data: &Dataset,
    k: usize,
    stratify: bool,
    test_fraction: f64,
    rule: SelectionRule,
    refit_on_all: bool,
    seed: SeedSpec,
) -> Result<SelectionReport> {
    let configs = grid.configs()?;
    let ranks = grid.complexity_ranks()?;
    let split = if test_fraction == 0.0 {
        None
    } else {
        Some(holdout_split(
            data.len(),
            data.labels(),
            test_fraction,
            stratify,
            derive_stream(seed, 0),
        )?)
    };
    let train_pool = match &split {
        Some(split) => data.subset(&split.train_indices),
        None => data.clone(),
    };
    let folds = kfold_plan(
        train_pool.len(),
        train_pool.labels(),
        k,
        stratify,
        derive_stream(seed, 1),
    )?;
    let fold_plan_hash = fnv1a_folds(&folds);

    let mut per_config = Vec::with_capacity(configs.len());
    for config in &configs {
        let report = evaluate_kfold(config, &train_pool, &folds)?;
        let kf = report.per_round.len() as f64;
        let sd = (report
            .per_round
            .iter()
            .map(|a| (a - report.point_estimate) * (a - report.point_estimate))
            .sum::<f64>()
            / (kf - 1.0))
            .sqrt();
        per_config.push(ConfigScore {
            spec: config.clone(),
            mean_acc: report.point_estimate,
            se_acc: sd / kf.sqrt(),
            per_fold: report.per_round,
        });
    }

    let means: Vec<f64> = per_config.iter().map(|c| c.mean_acc).collect();
    let ses: Vec<f64> = per_config.iter().map(|c| c.se_acc).collect();
    let chosen_index = choose(&means, &ses, &ranks, rule);

    let mut test_evaluations = 0u32;
    let model = fit(&configs[chosen_index], &train_pool, derive_stream(seed, 2))?;
    let final_test_acc = match &split {
        Some(split) => {
            let test = data.subset(&split.test_indices);
            let preds = model.predict(test.features())?;
            test_evaluations += 1;
            Some(accuracy(test.labels(), &preds)?)
        }
        None => None,
    };

    if refit_on_all {
        // Step for deployment: refit on everything; the model itself is
        // not part of the report.
        let _ = fit(&configs[chosen_index], data, derive_stream(seed, 3))?;
    }

    Ok(SelectionReport {
        workflow: "select-kfold".into(),
        per_config,
        complexity_rank: ranks,
        chosen_index,
        rule,
        final_test_acc,
        refit_on_all,
        fold_plan_hash: Some(fold_plan_hash),
        test_evaluations,
    })
}

/// Three-way holdout selection: fit every configuration on the training
/// partition, pick the best validation accuracy, refit the winner on
/// train+validation, and score it once on the test partition.
pub fn three_way_holdout_select(
    grid: &Grid,
    data: &Dataset,
    fractions: (f64, f64, f64),
    refit_on_all: bool,
    seed: SeedSpec,
) -> Result<SelectionReport> {
    let (train_frac, val_frac, test_frac) = fractions;
    if train_frac <= 0.0 || val_frac <= 0.0 || test_frac <= 0.0 {
        return Err(Error::InvalidArgument(
            "all three fractions must be positive".into(),
        ));
    }
    if (train_frac + val_frac + test_frac - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "fractions must sum to 1, got {}",
            train_frac + val_frac + test_frac
        )));
    }
    let configs = grid.configs()?;
    let ranks = grid.complexity_ranks()?;

    // Stage 1: split off the test partition.
    let outer = holdout_split(
        data.len(),
        data.labels(),
        test_frac,
        true,
        derive_stream(seed, 0),
    )?;
    // Stage 2: split the rest into training and validation.
    let rest_labels: Vec<usize> = outer
        .train_indices
        .iter()
        .map(|&i| data.labels()[i])
        .collect();
    let inner = holdout_split(
        outer.train_indices.len(),
        &rest_labels,
        val_frac / (train_frac + val_frac),
        true,
        derive_stream(seed, 1),
    )?;
    let train_idx: Vec<usize> = inner
        .train_indices
        .iter()
        .map(|&i| outer.train_indices[i])
        .collect();
    let val_idx: Vec<usize> = inner
        .test_indices
        .iter()
        .map(|&i| outer.train_indices[i])
        .collect();

    let train = data.subset(&train_idx);
    let val = data.subset(&val_idx);
    let mut per_config = Vec::with_capacity(configs.len());
    for (ci, config) in configs.iter().enumerate() {
        let model = fit(config, &train, derive_stream(seed, 2 + ci as u64))?;
        let preds = model.predict(val.features())?;
        let acc = accuracy(val.labels(), &preds)?;
        per_config.push(ConfigScore {
            spec: config.clone(),
            mean_acc: acc,
            se_acc: 0.0,
            per_fold: vec![acc],
        });
    }

    let means: Vec<f64> = per_config.iter().map(|c| c.mean_acc).collect();
    let ses = vec![0.0; means.len()];
    let chosen_index = choose(&means, &ses, &ranks, SelectionRule::BestMean);

    // Merge training and validation, refit, evaluate once on the test set.
    let merged = data.subset(&outer.train_indices);
    let model = fit(&configs[chosen_index], &merged, derive_stream(seed, 10_000))?;
    let test = data.subset(&outer.test_indices);
    let preds = model.predict(test.features())?;
    let final_test_acc = accuracy(test.labels(), &preds)?;

    if refit_on_all {
        let _ = fit(&configs[chosen_index], data, derive_stream(seed, 10_001))?;
    }

    Ok(SelectionReport {
        workflow: "three-way-holdout".into(),
        per_config,
        complexity_rank: ranks,
        chosen_index,
        rule: SelectionRule::BestMean,
        final_test_acc: Some(final_test_acc),
        refit_on_all,
        fold_plan_hash: None,
        test_evaluations: 1,
    })
}

/// Winner of one outer fold of nested cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldChoice {
    pub outer_fold: usize,
    pub config_index: usize,
    pub spec: LearnerSpec,
    pub inner_mean_acc: f64,
}

/// Nested cross-validation outcome: the outer-fold accuracy report plus
/// the per-fold winning configurations (which may legitimately differ
/// across folds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedCvOutcome {
    pub report: EvalReport,
    pub choices: Vec<FoldChoice>,
}

/// Nested cross-validation: the inner loop selects hyperparameters on each
/// outer-training portion, the outer loop estimates generalization
/// accuracy of the whole selection procedure.
pub fn nested_cv(
    grid: &Grid,
    data: &Dataset,
    outer_k: usize,
    inner_k: usize,
    stratify: bool,
    seed: SeedSpec,
) -> Result<NestedCvOutcome> {
    if outer_k < 2 || inner_k < 2 {
        return Err(Error::InvalidArgument(
            "outer_k and inner_k must both be >= 2".into(),
        ));
    }
    let configs = grid.configs()?;
    let ranks = grid.complexity_ranks()?;
    let outer = kfold_plan(
        data.len(),
        data.labels(),
        outer_k,
        stratify,
        derive_stream(seed, 0),
    )?;

    let mut per_round = Vec::with_capacity(outer_k);
    let mut choices = Vec::with_capacity(outer_k);
    for f in 0..outer.k() {
        let outer_train_idx = outer.train_indices(f);
        let pool = data.subset(&outer_train_idx);
        let inner = kfold_plan(
            pool.len(),
            pool.labels(),
            inner_k,
            stratify,
            derive_stream(seed, 1 + f as u64),
        )?;
        // Inner folds index into the pool; no outer-test index can appear.
        debug_assert!(inner
            .folds
            .iter()
            .flatten()
            .all(|&i| !outer.folds[f].contains(&outer_train_idx[i])));

        let mut means = Vec::with_capacity(configs.len());
        for config in &configs {
            let report = evaluate_kfold(config, &pool, &inner).map_err(|e| Error::Fold {
                index: f,
                source: Box::new(e),
            })?;
            means.push(report.point_estimate);
        }
        let ses = vec![0.0; means.len()];
        let winner = choose(&means, &ses, &ranks, SelectionRule::BestMean);

        let model = fit(
            &configs[winner],
            &pool,
            derive_stream(seed, 1000 + f as u64),
        )?;
        let outer_test = data.subset(&outer.folds[f]);
        let preds = model.predict(outer_test.features())?;
        per_round.push(accuracy(outer_test.labels(), &preds)?);
        choices.push(FoldChoice {
            outer_fold: f,
            config_index: winner,
            spec: configs[winner].clone(),
            inner_mean_acc: means[winner],
        });
    }
    let mean = per_round.iter().sum::<f64>() / per_round.len() as f64;
    Ok(NestedCvOutcome {
        report: EvalReport::new("nested-cv", mean, per_round),
        choices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{make_blobs, make_circles};
    use crate::types::Matrix;

    fn circles() -> Dataset {
        make_circles(300, 0.15, SeedSpec::new(600, 0)).unwrap()
    }

    fn blobs() -> Dataset {
        let centers = Matrix::from_rows(vec![vec![0.0, 0.0], vec![3.0, 3.0]]).unwrap();
        make_blobs(40, &centers, 1.0, SeedSpec::new(601, 0)).unwrap()
    }

    fn knn_grid(values: Vec<f64>) -> Grid {
        Grid::new("knn").with_axis("k_neighbors", values, SimplerEnd::Larger)
    }

    #[test]
    fn complexity_ranks_follow_declared_direction() {
        let grid = knn_grid(vec![1.0, 3.0, 5.0]);
        // Larger is simpler: 5 has rank 0, 1 has rank 2.
        assert_eq!(grid.complexity_ranks().unwrap(), vec![2, 1, 0]);

        let grid = Grid::new("softmax")
            .with_axis("epochs", vec![50.0, 100.0], SimplerEnd::Smaller)
            .with_axis("l2", vec![0.0, 0.1], SimplerEnd::Larger);
        let configs = grid.configs().unwrap();
        let ranks = grid.complexity_ranks().unwrap();
        // (50, 0.1) is simplest, (100, 0) most complex.
        assert_eq!(configs.len(), 4);
        let idx_simplest = ranks.iter().position(|&r| r == 0).unwrap();
        assert_eq!(configs[idx_simplest].get("epochs"), Some(50.0));
        assert_eq!(configs[idx_simplest].get("l2"), Some(0.1));
        let idx_most = ranks.iter().position(|&r| r == 3).unwrap();
        assert_eq!(configs[idx_most].get("epochs"), Some(100.0));
        assert_eq!(configs[idx_most].get("l2"), Some(0.0));
    }

    #[test]
    fn single_config_grid_is_chosen_under_both_rules() {
        let data = blobs();
        for rule in [SelectionRule::BestMean, SelectionRule::OneSe] {
            let report = select_kfold(
                &knn_grid(vec![3.0]),
                &data,
                5,
                true,
                0.25,
                rule,
                false,
                SeedSpec::new(1, 0),
            )
            .unwrap();
            assert_eq!(report.chosen_index, 0);
            assert_eq!(report.per_config.len(), 1);
            assert!(report.final_test_acc.is_some());
        }
    }

    #[test]
    fn one_se_rule_picks_simpler_config_within_one_se() {
        let data = circles();
        let values: Vec<f64> = (0..=25).map(|i| (2 * i + 1) as f64).collect();
        let grid = knn_grid(values);
        let report = select_kfold(
            &grid,
            &data,
            10,
            true,
            0.3,
            SelectionRule::OneSe,
            false,
            SeedSpec::new(3, 0),
        )
        .unwrap();

        // Replay the rule from the recorded table.
        let means: Vec<f64> = report.per_config.iter().map(|c| c.mean_acc).collect();
        let best = (0..means.len())
            .max_by(|&i, &j| {
                means[i]
                    .partial_cmp(&means[j])
                    .unwrap()
                    .then(report.complexity_rank[j].cmp(&report.complexity_rank[i]))
            })
            .unwrap();
        let threshold = means[best] - report.per_config[best].se_acc;
        assert!(means[report.chosen_index] >= threshold);
        // Larger k_neighbors was declared simpler, so the pick cannot be
        // more complex than the best-mean config.
        assert!(report.complexity_rank[report.chosen_index] <= report.complexity_rank[best]);
        let chosen_k = report.per_config[report.chosen_index]
            .spec
            .get("k_neighbors")
            .unwrap();
        let best_k = report.per_config[best].spec.get("k_neighbors").unwrap();
        assert!(chosen_k >= best_k);
    }

    #[test]
    fn best_mean_rule_replays_as_argmax_with_simplicity_ties() {
        let data = circles();
        let report = select_kfold(
            &knn_grid(vec![1.0, 3.0, 5.0, 7.0]),
            &data,
            5,
            true,
            0.3,
            SelectionRule::BestMean,
            false,
            SeedSpec::new(5, 0),
        )
        .unwrap();
        let means: Vec<f64> = report.per_config.iter().map(|c| c.mean_acc).collect();
        let best_mean = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(means[report.chosen_index], best_mean);
        // No strictly simpler config shares the same mean.
        for (i, &mean) in means.iter().enumerate() {
            if mean == best_mean {
                assert!(report.complexity_rank[report.chosen_index] <= report.complexity_rank[i]);
            }
        }
    }

    #[test]
    fn duplicate_configs_tie_to_the_simplest() {
        let data = blobs();
        // Identical values: validation accuracies tie exactly.
        let grid = knn_grid(vec![3.0, 3.0, 3.0]);
        let report =
            three_way_holdout_select(&grid, &data, (0.5, 0.25, 0.25), false, SeedSpec::new(7, 0))
                .unwrap();
        let accs: Vec<f64> = report.per_config.iter().map(|c| c.mean_acc).collect();
        assert!(accs.iter().all(|&a| a == accs[0]));
        assert_eq!(
            report.complexity_rank[report.chosen_index],
            *report.complexity_rank.iter().min().unwrap()
        );
    }

    #[test]
    fn three_way_holdout_replays_argmax_over_validation() {
        let data = blobs();
        let report = three_way_holdout_select(
            &knn_grid(vec![1.0, 3.0, 5.0]),
            &data,
            (0.6, 0.2, 0.2),
            false,
            SeedSpec::new(3, 0),
        )
        .unwrap();
        let accs: Vec<f64> = report.per_config.iter().map(|c| c.mean_acc).collect();
        let best = accs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(accs[report.chosen_index], best);
        assert!(report.final_test_acc.is_some());
        assert_eq!(report.test_evaluations, 1);
    }

    #[test]
    fn zero_test_fraction_selects_on_all_data() {
        let data = circles();
        let report = select_kfold(
            &knn_grid(vec![3.0, 9.0]),
            &data,
            5,
            true,
            0.0,
            SelectionRule::BestMean,
            false,
            SeedSpec::new(7, 0),
        )
        .unwrap();
        assert_eq!(report.final_test_acc, None);
        assert_eq!(report.test_evaluations, 0);
        // All 300 examples took part in the shared fold plan.
        assert_eq!(report.per_config[0].per_fold.len(), 5);
    }

    #[test]
    fn three_way_holdout_rejects_bad_fractions() {
        let data = blobs();
        let grid = knn_grid(vec![3.0]);
        assert!(three_way_holdout_select(
            &grid,
            &data,
            (0.5, 0.2, 0.2),
            false,
            SeedSpec::new(1, 0)
        )
        .is_err());
        assert!(three_way_holdout_select(
            &grid,
            &data,
            (0.8, 0.0, 0.2),
            false,
            SeedSpec::new(1, 0)
        )
        .is_err());
    }

    #[test]
    fn shared_fold_plan_hash_matches_rederived_plan() {
        let data = circles();
        let seed = SeedSpec::new(11, 0);
        let report = select_kfold(
            &knn_grid(vec![1.0, 5.0]),
            &data,
            5,
            true,
            0.3,
            SelectionRule::BestMean,
            false,
            seed,
        )
        .unwrap();
        let split =
            holdout_split(data.len(), data.labels(), 0.3, true, derive_stream(seed, 0)).unwrap();
        let pool = data.subset(&split.train_indices);
        let folds = kfold_plan(pool.len(), pool.labels(), 5, true, derive_stream(seed, 1)).unwrap();
        assert_eq!(report.fold_plan_hash, Some(fnv1a_folds(&folds)));
        assert_eq!(report.test_evaluations, 1);
    }

    #[test]
    fn nested_cv_single_config_equals_plain_outer_kfold() {
        let data = circles();
        let seed = SeedSpec::new(13, 0);
        let outcome = nested_cv(&knn_grid(vec![5.0]), &data, 5, 2, true, seed).unwrap();
        let outer = kfold_plan(data.len(), data.labels(), 5, true, derive_stream(seed, 0)).unwrap();
        let plain = evaluate_kfold(&LearnerSpec::knn(5), &data, &outer).unwrap();
        assert_eq!(outcome.report.point_estimate, plain.point_estimate);
        assert_eq!(outcome.report.per_round, plain.per_round);
    }

    #[test]
    fn nested_cv_replays_winners_from_logs() {
        let data = circles();
        let seed = SeedSpec::new(11, 0);
        let grid = knn_grid(vec![1.0, 9.0, 25.0]);
        let outcome = nested_cv(&grid, &data, 5, 2, true, seed).unwrap();
        assert_eq!(outcome.choices.len(), 5);

        // Independent replay of one outer fold.
        let outer = kfold_plan(data.len(), data.labels(), 5, true, derive_stream(seed, 0)).unwrap();
        let f = 2;
        let outer_train = outer.train_indices(f);
        let pool = data.subset(&outer_train);
        let inner = kfold_plan(
            pool.len(),
            pool.labels(),
            2,
            true,
            derive_stream(seed, 1 + f as u64),
        )
        .unwrap();
        let configs = grid.configs().unwrap();
        let ranks = grid.complexity_ranks().unwrap();
        let mut best = 0;
        let mut best_mean = f64::NEG_INFINITY;
        for (ci, config) in configs.iter().enumerate() {
            let mean = evaluate_kfold(config, &pool, &inner)
                .unwrap()
                .point_estimate;
            if mean > best_mean || (mean == best_mean && ranks[ci] < ranks[best]) {
                best = ci;
                best_mean = mean;
            }
        }
        assert_eq!(outcome.choices[f].config_index, best);
        assert_eq!(outcome.choices[f].inner_mean_acc, best_mean);
    }

    #[test]
    fn nested_cv_keeps_outer_test_indices_out_of_inner_folds() {
        let data = blobs();
        let seed = SeedSpec::new(17, 0);
        let outer = kfold_plan(data.len(), data.labels(), 4, true, derive_stream(seed, 0)).unwrap();
        for f in 0..outer.k() {
            let outer_train = outer.train_indices(f);
            let pool_labels: Vec<usize> = outer_train.iter().map(|&i| data.labels()[i]).collect();
            let inner = kfold_plan(
                outer_train.len(),
                &pool_labels,
                2,
                true,
                derive_stream(seed, 1 + f as u64),
            )
            .unwrap();
            for fold in &inner.folds {
                for &i in fold {
                    let absolute = outer_train[i];
                    assert!(!outer.folds[f].contains(&absolute));
                }
            }
        }
    }

    #[test]
    fn nested_cv_default_shape_is_five_by_two() {
        let data = circles();
        let outcome = nested_cv(
            &knn_grid(vec![3.0, 15.0]),
            &data,
            5,
            2,
            true,
            SeedSpec::new(19, 0),
        )
        .unwrap();
        assert_eq!(outcome.report.per_round.len(), 5);
        assert_eq!(outcome.choices.len(), 5);
    }
}
