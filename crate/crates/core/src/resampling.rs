//! Dataset splitting and sampling plans: holdout, stratified splits,
//! repeated holdout, k-fold, bootstrap draws, and the 5x2 plan.
//!
//! Plans are pure functions of their inputs and seed. They carry index
//! vectors only, so one plan can be reused across learners and threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_stream, SeedSpec};

/// One train/test partition. Index vectors are sorted ascending and
/// disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

impl SplitPlan {
    /// Same data, roles exchanged.
    pub fn swapped(&self) -> SplitPlan {
        SplitPlan {
            train_indices: self.test_indices.clone(),
            test_indices: self.train_indices.clone(),
        }
    }

    /// Checks disjointness, bounds, duplicates, and non-empty sides.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.train_indices.is_empty() {
            return Err(Error::InvalidPlan("empty training side".into()));
        }
        if self.test_indices.is_empty() {
            return Err(Error::InvalidPlan("empty test side".into()));
        }
        let mut seen = vec![false; n];
        for &i in self.train_indices.iter().chain(&self.test_indices) {
            if i >= n {
                return Err(Error::InvalidPlan(format!(
                    "index {i} out of range for {n} examples"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPlan(format!(
                    "index {i} appears more than once"
                )));
            }
            seen[i] = true;
        }
        Ok(())
    }
}

/// Partition of all `n` indices into `k` disjoint folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    /// Checks that the folds are non-empty, disjoint, and cover `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.folds.len() < 2 {
            return Err(Error::InvalidPlan("need at least 2 folds".into()));
        }
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for (f, fold) in self.folds.iter().enumerate() {
            if fold.is_empty() {
                return Err(Error::InvalidPlan(format!("fold {f} is empty")));
            }
            for &i in fold {
                if i >= n {
                    return Err(Error::InvalidPlan(format!(
                        "index {i} out of range for {n} examples"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidPlan(format!(
                        "index {i} appears in more than one fold"
                    )));
                }
                seen[i] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::InvalidPlan(format!(
                "folds cover {covered} of {n} indices"
            )));
        }
        Ok(())
    }

    /// Training indices for fold `f`: everything outside that fold, sorted.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != f)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// One bootstrap round: `n` draws with replacement plus the out-of-bag
/// complement of the drawn support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapRound {
    /// In draw order; duplicates expected.
    pub in_bag: Vec<usize>,
    /// Sorted ascending; may be empty.
    pub out_of_bag: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapPlan {
    pub rounds: Vec<BootstrapRound>,
}

/// Largest-remainder apportionment of `total` slots proportional to
/// `counts` (which sum to `n`). Ties go to the lowest class id.
pub(crate) fn apportion(counts: &[usize], total: usize, n: usize) -> Vec<usize> {
    let mut shares: Vec<usize> = Vec::with_capacity(counts.len());
    let mut remainders: Vec<(usize, usize)> = Vec::with_capacity(counts.len());
    let mut assigned = 0usize;
    for (class, &c) in counts.iter().enumerate() {
        let exact = c * total;
        shares.push(exact / n);
        remainders.push((class, exact % n));
        assigned += exact / n;
    }
    remainders.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for &(class, _) in remainders.iter().take(total - assigned) {
        shares[class] += 1;
    }
    shares
}

fn class_counts(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![0usize; k];
    for &y in labels {
        counts[y] += 1;
    }
    counts
}

/// Single train/test split.
///
/// Unstratified: `round(n * test_fraction)` shuffled indices form the test
/// set. Stratified: the training side is apportioned per class by the
/// largest-remainder rule (ties to the lowest class id), so each subset
/// deviates from exact class proportionality by less than one example.
pub fn holdout_split(
    n: usize,
    labels: &[usize],
    test_fraction: f64,
    stratify: bool,
    seed: SeedSpec,
) -> Result<SplitPlan> {
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: labels.len(),
        });
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "test_fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let test_total = (n as f64 * test_fraction).round() as usize;
    if test_total == 0 || test_total >= n {
        return Err(Error::InvalidArgument(format!(
            "test_fraction {test_fraction} leaves an empty side for n = {n}"
        )));
    }
    let train_total = n - test_total;
    let mut rng = seed.rng();

    let (mut train, mut test) = if stratify {
        let counts = class_counts(labels);
        let train_per_class = apportion(&counts, train_total, n);
        for (class, (&count, &tr)) in counts.iter().zip(&train_per_class).enumerate() {
            if count == 0 {
                continue;
            }
            if tr == 0 {
                return Err(Error::Stratification {
                    class,
                    detail: format!("no training examples left at test_fraction {test_fraction}"),
                });
            }
            if tr == count {
                return Err(Error::Stratification {
                    class,
                    detail: format!("no test examples left at test_fraction {test_fraction}"),
                });
            }
        }
        let mut train = Vec::with_capacity(train_total);
        let mut test = Vec::with_capacity(test_total);
        for (class, &tr) in train_per_class.iter().enumerate() {
            let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
            rng.shuffle(&mut members);
            train.extend_from_slice(&members[..tr]);
            test.extend_from_slice(&members[tr..]);
        }
        (train, test)
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        let test = order[..test_total].to_vec();
        let train = order[test_total..].to_vec();
        (train, test)
    };

    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitPlan {
        train_indices: train,
        test_indices: test,
    })
}

/// k disjoint folds by shuffle-then-deal. With stratification the deal
/// cursor rolls across classes so fold sizes still differ by at most one.
/// `k = n` is leave-one-out.
pub fn kfold_plan(
    n: usize,
    labels: &[usize],
    k: usize,
    stratify: bool,
    seed: SeedSpec,
) -> Result<FoldPlan> {
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: labels.len(),
        });
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be >= 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {n} available examples"
        )));
    }
    let mut rng = seed.rng();
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];

    if stratify {
        let counts = class_counts(labels);
        if let Some((class, &smallest)) = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .min_by_key(|(_, &c)| c)
        {
            if k > smallest {
                return Err(Error::Stratification {
                    class,
                    detail: format!("only {smallest} examples for {k} folds"),
                });
            }
        }
        let mut cursor = 0usize;
        for class in 0..counts.len() {
            let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
            rng.shuffle(&mut members);
            for idx in members {
                folds[cursor % k].push(idx);
                cursor += 1;
            }
        }
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        for (i, idx) in order.into_iter().enumerate() {
            folds[i % k].push(idx);
        }
    }

    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(FoldPlan { folds })
}

/// Independent holdout splits, one per repetition, derived from per-round
/// sub-streams. Test sets overlap across repetitions by design.
pub fn repeated_holdout_plan(
    n: usize,
    labels: &[usize],
    test_fraction: f64,
    repetitions: usize,
    stratify: bool,
    seed: SeedSpec,
) -> Result<Vec<SplitPlan>> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be >= 1".into()));
    }
    (0..repetitions)
        .map(|r| {
            holdout_split(
                n,
                labels,
                test_fraction,
                stratify,
                derive_stream(seed, r as u64),
            )
        })
        .collect()
}

/// Bootstrap sampling plan: each round draws `n` indices uniformly with
/// replacement; the out-of-bag set is the exact complement of the draws.
pub fn bootstrap_plan(n: usize, rounds: usize, seed: SeedSpec) -> Result<BootstrapPlan> {
    if n == 0 {
        return Err(Error::EmptyInput("dataset"));
    }
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let mut rng = derive_stream(seed, r as u64).rng();
        let mut in_bag = Vec::with_capacity(n);
        let mut drawn = vec![false; n];
        for _ in 0..n {
            let i = rng.next_below(n as u64) as usize;
            in_bag.push(i);
            drawn[i] = true;
        }
        let out_of_bag: Vec<usize> = (0..n).filter(|&i| !drawn[i]).collect();
        out.push(BootstrapRound { in_bag, out_of_bag });
    }
    Ok(BootstrapPlan { rounds: out })
}

/// Five replications of a stratified 50/50 split; in each replication the
/// second plan is the first with training and test roles exchanged.
pub fn five_by_two_plan(
    n: usize,
    labels: &[usize],
    seed: SeedSpec,
) -> Result<Vec<(SplitPlan, SplitPlan)>> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "5x2 splitting requires n >= 4, got {n}"
        )));
    }
    (0..5u64)
        .map(|i| {
            let first = holdout_split(n, labels, 0.5, true, derive_stream(seed, i))?;
            let second = first.swapped();
            Ok((first, second))
        })
        .collect()
}

/// Probability that a given example appears in a bootstrap sample of size
/// `n`: `1 - (1 - 1/n)^n`, which tends to 1 - 1/e for large n.
pub fn inclusion_probability(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let nf = n as f64;
    Ok(1.0 - (nf * (-1.0 / nf).ln_1p()).exp())
}
