//! Monte Carlo harness measuring the empirical Type-I error of the
//! comparison tests under nulls that are true by construction.
//!
//! Two null constructions are provided. `SamePredictionsPerturbed` feeds
//! the prediction-based tests two independently corrupted copies of the
//! ground truth with identical error rates. `SameAlgorithmIndependentSeeds`
//! compares one algorithm against itself: each learner slot trains on its
//! own per-world random subsample of the training pool (independent
//! sampling sub-streams), so the two pipelines are exchangeable — the null
//! holds exactly — while their dataset-conditional accuracies differ, which
//! is what exposes the optimism of the resampled t-test.

use serde::{Deserialize, Serialize};

use crate::algo_tests::{five_by_two_f_statistic, five_by_two_t_statistic, paired_t_statistic};
use crate::error::{Error, Result};
use crate::learners::{fit, iris, make_blobs, make_circles};
use crate::metrics::accuracy;
use crate::model_tests::{mcnemar_exact, mcnemar_table, mcnemar_test, proportions_z_test};
use crate::numerics::{f_sf, normal_quantile, t_sf};
use crate::resampling::{apportion, five_by_two_plan, holdout_split, kfold_plan};
use crate::rng::{derive_stream, SeedSpec};
use crate::types::{Dataset, LearnerSpec, Matrix};

/// How the true-null worlds are constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullMode {
    SameAlgorithmIndependentSeeds,
    SamePredictionsPerturbed,
}

/// Which comparison test a study measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimTest {
    #[serde(rename = "resampled-t")]
    ResampledT,
    #[serde(rename = "kfold-t")]
    KfoldT,
    #[serde(rename = "5x2t")]
    FiveByTwoT,
    #[serde(rename = "5x2f")]
    FiveByTwoF,
    #[serde(rename = "mcnemar")]
    McNemar,
    #[serde(rename = "mcnemar-exact")]
    McNemarExact,
    #[serde(rename = "z-prop")]
    ZProp,
}

impl SimTest {
    /// Prediction-based tests need the perturbed-predictions null; the
    /// refitting tests need the algorithm null.
    pub fn needs_prediction_null(self) -> bool {
        matches!(
            self,
            SimTest::McNemar | SimTest::McNemarExact | SimTest::ZProp
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SimTest::ResampledT => "resampled-t",
            SimTest::KfoldT => "kfold-t",
            SimTest::FiveByTwoT => "5x2t",
            SimTest::FiveByTwoF => "5x2f",
            SimTest::McNemar => "mcnemar",
            SimTest::McNemarExact => "mcnemar-exact",
            SimTest::ZProp => "z-prop",
        }
    }
}

/// Synthetic (or bundled) dataset source for the simulated worlds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataGenerator {
    /// The bundled Iris data; ignores the world seed.
    Iris,
    Circles {
        n: usize,
        noise: f64,
    },
    /// Gaussian blobs with class centers 3.0 apart along the first axis.
    Blobs {
        n_per_class: usize,
        classes: usize,
        dims: usize,
        spread: f64,
    },
}

impl DataGenerator {
    pub fn generate(&self, seed: SeedSpec) -> Result<Dataset> {
        match *self {
            DataGenerator::Iris => Ok(iris()),
            DataGenerator::Circles { n, noise } => make_circles(n, noise, seed),
            DataGenerator::Blobs {
                n_per_class,
                classes,
                dims,
                spread,
            } => {
                if classes == 0 || dims == 0 {
                    return Err(Error::InvalidArgument(
                        "blobs need at least one class and one dimension".into(),
                    ));
                }
                let mut centers = Matrix::zeros(classes, dims);
                for c in 0..classes {
                    centers.set(c, 0, 3.0 * c as f64);
                }
                make_blobs(n_per_class, &centers, spread, seed)
            }
        }
    }
}

/// Configuration of one Type-I error study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub world_count: usize,
    pub null_mode: NullMode,
    pub alpha: f64,
    pub tests: Vec<SimTest>,
    pub generator: DataGenerator,
    /// Algorithm under the self-comparison null.
    pub learner: LearnerSpec,
    pub seed: SeedSpec,
    /// Per-label corruption probability for the perturbed-predictions null.
    pub flip_rate: f64,
    /// Per-slot training-pool fraction for the algorithm null.
    pub subsample: f64,
    /// Rounds for the resampled paired t under simulation.
    pub resampled_repetitions: usize,
    pub resampled_test_fraction: f64,
    /// Folds for the k-fold paired t under simulation.
    pub kfold_k: usize,
    /// Worker threads; results are identical for any value.
    pub threads: usize,
}

impl SimulationConfig {
    pub fn new(
        world_count: usize,
        null_mode: NullMode,
        generator: DataGenerator,
        learner: LearnerSpec,
        seed: SeedSpec,
    ) -> Self {
        SimulationConfig {
            world_count,
            null_mode,
            alpha: 0.05,
            tests: Vec::new(),
            generator,
            learner,
            seed,
            flip_rate: 0.15,
            subsample: 0.6,
            resampled_repetitions: 30,
            resampled_test_fraction: 1.0 / 3.0,
            kfold_k: 10,
            threads: 1,
        }
    }
}

/// Empirical rejection rate of one test over the simulated worlds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub test: SimTest,
    /// Worlds where the test produced a decision.
    pub worlds: usize,
    /// Worlds where the statistic was undefined (excluded from the rate).
    pub degenerate: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if successes > trials {
        return Err(Error::InvalidArgument(
            "successes cannot exceed trials".into(),
        ));
    }
    let z = normal_quantile((1.0 + confidence) / 2.0)?;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// Corrupts each label independently with probability `rate`, replacing it
/// with a uniformly chosen different class.
fn corrupt_labels(labels: &[usize], class_count: usize, rate: f64, seed: SeedSpec) -> Vec<usize> {
    let mut rng = seed.rng();
    labels
        .iter()
        .map(|&y| {
            if class_count > 1 && rng.next_f64() < rate {
                let offset = 1 + rng.next_below(class_count as u64 - 1) as usize;
                (y + offset) % class_count
            } else {
                y
            }
        })
        .collect()
}

/// Stratified subsample without replacement: a sorted index set holding
/// `round(fraction * n)` examples with per-class largest-remainder counts.
fn stratified_subsample(labels: &[usize], fraction: f64, seed: SeedSpec) -> Vec<usize> {
    let n = labels.len();
    let total = ((n as f64 * fraction).round() as usize).clamp(1, n);
    let class_count = labels.iter().max().map_or(1, |&m| m + 1);
    let mut counts = vec![0usize; class_count];
    for &y in labels {
        counts[y] += 1;
    }
    let shares = apportion(&counts, total, n);
    let mut rng = seed.rng();
    let mut chosen = Vec::with_capacity(total);
    for (class, &share) in shares.iter().enumerate() {
        let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
        rng.shuffle(&mut members);
        chosen.extend_from_slice(&members[..share]);
    }
    chosen.sort_unstable();
    chosen
}

/// Sorted intersection of two sorted index sets.
fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Outcome of one test in one world: `None` marks a degenerate world for
/// that test.
type WorldOutcome = Option<bool>;

struct AlgoWorld<'a> {
    config: &'a SimulationConfig,
    data: Dataset,
    masks: [Vec<usize>; 2],
    world_seed: SeedSpec,
}

impl<'a> AlgoWorld<'a> {
    fn new(config: &'a SimulationConfig, world: u64) -> Result<Self> {
        let world_seed = derive_stream(config.seed, world);
        let data = config.generator.generate(derive_stream(world_seed, 0))?;
        let masks = [
            stratified_subsample(
                data.labels(),
                config.subsample,
                derive_stream(world_seed, 11),
            ),
            stratified_subsample(
                data.labels(),
                config.subsample,
                derive_stream(world_seed, 12),
            ),
        ];
        Ok(AlgoWorld {
            config,
            data,
            masks,
            world_seed,
        })
    }

    /// Accuracy difference of the two slot pipelines on one split. `None`
    /// if a slot's masked training set is unusable.
    fn half_diff(&self, train: &[usize], test: &[usize], fit_tag: u64) -> Result<Option<f64>> {
        let test_data = self.data.subset(test);
        let mut accs = [0.0f64; 2];
        for (slot, mask) in self.masks.iter().enumerate() {
            let masked = intersect_sorted(train, mask);
            if masked.len() < 2 {
                return Ok(None);
            }
            let train_data = self.data.subset(&masked);
            let seed = derive_stream(self.world_seed, 1000 + 10 * fit_tag + slot as u64);
            let model = match fit(&self.config.learner, &train_data, seed) {
                Ok(m) => m,
                Err(Error::Hyperparameter(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let preds = model.predict(test_data.features())?;
            accs[slot] = accuracy(test_data.labels(), &preds)?;
        }
        Ok(Some(accs[0] - accs[1]))
    }

    fn resampled_t_reject(&self) -> Result<WorldOutcome> {
        let mut diffs = Vec::with_capacity(self.config.resampled_repetitions);
        for r in 0..self.config.resampled_repetitions {
            let plan = holdout_split(
                self.data.len(),
                self.data.labels(),
                self.config.resampled_test_fraction,
                true,
                derive_stream(self.world_seed, 100 + r as u64),
            )?;
            match self.half_diff(&plan.train_indices, &plan.test_indices, r as u64)? {
                Some(d) => diffs.push(d),
                None => return Ok(None),
            }
        }
        self.t_outcome(&diffs)
    }

    fn kfold_t_reject(&self) -> Result<WorldOutcome> {
        let folds = kfold_plan(
            self.data.len(),
            self.data.labels(),
            self.config.kfold_k,
            true,
            derive_stream(self.world_seed, 300),
        )?;
        let mut diffs = Vec::with_capacity(folds.k());
        for f in 0..folds.k() {
            let train = folds.train_indices(f);
            match self.half_diff(&train, &folds.folds[f], 500 + f as u64)? {
                Some(d) => diffs.push(d),
                None => return Ok(None),
            }
        }
        self.t_outcome(&diffs)
    }

    fn t_outcome(&self, diffs: &[f64]) -> Result<WorldOutcome> {
        match paired_t_statistic(diffs) {
            Ok((t, df)) => {
                if t.is_infinite() {
                    return Ok(Some(true));
                }
                let p = 2.0 * t_sf(t.abs(), df)?;
                Ok(Some(p < self.config.alpha))
            }
            Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// The five (A, B) difference pairs shared by the 5x2 t and F tests.
    fn five_by_two_pairs(&self) -> Result<Option<Vec<(f64, f64)>>> {
        let plans = five_by_two_plan(
            self.data.len(),
            self.data.labels(),
            derive_stream(self.world_seed, 200),
        )?;
        let mut pairs = Vec::with_capacity(5);
        for (i, (first, second)) in plans.iter().enumerate() {
            let a = self.half_diff(
                &first.train_indices,
                &first.test_indices,
                700 + 2 * i as u64,
            )?;
            let b = self.half_diff(
                &second.train_indices,
                &second.test_indices,
                701 + 2 * i as u64,
            )?;
            match (a, b) {
                (Some(a), Some(b)) => pairs.push((a, b)),
                _ => return Ok(None),
            }
        }
        Ok(Some(pairs))
    }
}

fn world_outcomes(config: &SimulationConfig, world: u64) -> Result<Vec<WorldOutcome>> {
    match config.null_mode {
        NullMode::SamePredictionsPerturbed => {
            let world_seed = derive_stream(config.seed, world);
            let data = config.generator.generate(derive_stream(world_seed, 0))?;
            let truth = data.labels();
            let k = data.class_count();
            let pred1 = corrupt_labels(truth, k, config.flip_rate, derive_stream(world_seed, 1));
            let pred2 = corrupt_labels(truth, k, config.flip_rate, derive_stream(world_seed, 2));
            let table = mcnemar_table(truth, &pred1, &pred2)?;
            config
                .tests
                .iter()
                .map(|test| {
                    Ok(match test {
                        SimTest::McNemar => match mcnemar_test(&table, true, config.alpha) {
                            Ok(r) => Some(r.reject_null),
                            Err(Error::Degenerate(_)) => None,
                            Err(e) => return Err(e),
                        },
                        SimTest::McNemarExact => match mcnemar_exact(&table, config.alpha) {
                            Ok(r) => Some(r.reject_null),
                            Err(Error::Degenerate(_)) => None,
                            Err(e) => return Err(e),
                        },
                        SimTest::ZProp => Some(
                            proportions_z_test(
                                table.accuracy_model1(),
                                table.accuracy_model2(),
                                table.n(),
                                config.alpha,
                            )?
                            .reject_null,
                        ),
                        _ => unreachable!("validated against the null mode"),
                    })
                })
                .collect()
        }
        NullMode::SameAlgorithmIndependentSeeds => {
            let world = AlgoWorld::new(config, world)?;
            let mut five_by_two: Option<Option<Vec<(f64, f64)>>> = None;
            config
                .tests
                .iter()
                .map(|test| match test {
                    SimTest::ResampledT => world.resampled_t_reject(),
                    SimTest::KfoldT => world.kfold_t_reject(),
                    SimTest::FiveByTwoT | SimTest::FiveByTwoF => {
                        if five_by_two.is_none() {
                            five_by_two = Some(world.five_by_two_pairs()?);
                        }
                        let pairs = match five_by_two.as_ref().unwrap() {
                            Some(p) => p,
                            None => return Ok(None),
                        };
                        let outcome = if *test == SimTest::FiveByTwoT {
                            five_by_two_t_statistic(pairs)
                                .and_then(|t| Ok(2.0 * t_sf(t.abs(), 5.0)? < config.alpha))
                        } else {
                            five_by_two_f_statistic(pairs)
                                .and_then(|f| Ok(f_sf(f, 10.0, 5.0)? < config.alpha))
                        };
                        match outcome {
                            Ok(reject) => Ok(Some(reject)),
                            Err(Error::Degenerate(_)) => Ok(None),
                            Err(e) => Err(e),
                        }
                    }
                    _ => unreachable!("validated against the null mode"),
                })
                .collect()
        }
    }
}

/// Runs the study: per test, the fraction of non-degenerate worlds that
/// rejected at `alpha`, with a 95% Wilson interval on that fraction.
pub fn run_type1_study(config: &SimulationConfig) -> Result<Vec<RateRow>> {
    if config.world_count == 0 {
        return Err(Error::InvalidArgument("world_count must be >= 1".into()));
    }
    if config.tests.is_empty() {
        return Err(Error::EmptyInput("test list"));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()));
    }
    if !(config.subsample > 0.0 && config.subsample <= 1.0) {
        return Err(Error::InvalidArgument(
            "subsample must lie in (0, 1]".into(),
        ));
    }
    if !(config.flip_rate > 0.0 && config.flip_rate < 1.0) {
        return Err(Error::InvalidArgument(
            "flip_rate must lie in (0, 1)".into(),
        ));
    }
    for test in &config.tests {
        let wants_prediction = test.needs_prediction_null();
        let have_prediction = config.null_mode == NullMode::SamePredictionsPerturbed;
        if wants_prediction != have_prediction {
            return Err(Error::InvalidArgument(format!(
                "test {:?} does not match null mode {:?}",
                test.name(),
                config.null_mode
            )));
        }
    }

    let worlds = config.world_count;
    let threads = config.threads.max(1).min(worlds);
    let mut outcomes: Vec<Vec<WorldOutcome>> = Vec::with_capacity(worlds);
    if threads <= 1 {
        for w in 0..worlds {
            outcomes.push(world_outcomes(config, w as u64)?);
        }
    } else {
        let chunk = worlds.div_ceil(threads);
        let mut partials: Vec<Result<Vec<Vec<WorldOutcome>>>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads {
                let start = t * chunk;
                let end = ((t + 1) * chunk).min(worlds);
                handles.push(scope.spawn(move || {
                    (start..end)
                        .map(|w| world_outcomes(config, w as u64))
                        .collect::<Result<Vec<_>>>()
                }));
            }
            for handle in handles {
                partials.push(handle.join().expect("simulation worker panicked"));
            }
        });
        for partial in partials {
            outcomes.extend(partial?);
        }
    }

    let mut rows = Vec::with_capacity(config.tests.len());
    for (ti, &test) in config.tests.iter().enumerate() {
        let mut rejections = 0usize;
        let mut degenerate = 0usize;
        for world in &outcomes {
            match world[ti] {
                Some(true) => rejections += 1,
                Some(false) => {}
                None => degenerate += 1,
            }
        }
        let usable = worlds - degenerate;
        let rate = if usable > 0 {
            rejections as f64 / usable as f64
        } else {
            0.0
        };
        let (lower, upper) = if usable > 0 {
            wilson_interval(rejections, usable, 0.95)?
        } else {
            (0.0, 1.0)
        };
        rows.push(RateRow {
            test,
            worlds: usable,
            degenerate,
            rejections,
            rejection_rate: rate,
            wilson_lower: lower,
            wilson_upper: upper,
        });
    }
    Ok(rows)
}
