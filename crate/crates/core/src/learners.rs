//! Built-in learners and synthetic data generators.
//!
//! Two deliberately small algorithms are provided so that every resampling
//! and comparison procedure can run end to end: a k-nearest-neighbors
//! classifier (memorizes its training set) and softmax regression trained
//! by full-batch gradient descent on the multinomial cross-entropy.
//!
//! Both learners are deterministic: knn stores data, softmax starts from
//! zero weights on a convex objective. The `seed` argument of [`fit`] is
//! part of the contract so stochastic learners can be added without
//! changing call sites.

use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::types::{Dataset, LearnerSpec, Matrix};

/// A trained model ready for prediction.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Knn(KnnModel),
    Softmax(SoftmaxModel),
}

/// k-nearest neighbors: an exact copy of the training set plus the
/// neighbor count.
#[derive(Debug, Clone)]
pub struct KnnModel {
    pub k_neighbors: usize,
    pub train_features: Matrix,
    pub train_labels: Vec<usize>,
    pub class_count: usize,
}

/// Softmax regression parameters: one weight row and bias per class.
#[derive(Debug, Clone)]
pub struct SoftmaxModel {
    /// `class_count x d` weight matrix.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub class_count: usize,
}

fn hyper_as_count(spec: &LearnerSpec, key: &str, default: usize) -> Result<usize> {
    match spec.get(key) {
        None => Ok(default),
        Some(v) => {
            if v.fract() != 0.0 || v < 0.0 || v > usize::MAX as f64 {
                return Err(Error::Hyperparameter(format!(
                    "{key} must be a non-negative integer, got {v}"
                )));
            }
            Ok(v as usize)
        }
    }
}

fn reject_unknown_keys(spec: &LearnerSpec, known: &[&str]) -> Result<()> {
    for key in spec.hyperparameters.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::Hyperparameter(format!(
                "unknown hyperparameter {key:?} for learner {:?}",
                spec.name
            )));
        }
    }
    Ok(())
}

/// Fits `spec` to the training data.
///
/// Registered learners and hyperparameters:
/// - `"knn"`: `k_neighbors` (default 3), must satisfy `1 <= k <= n`.
/// - `"softmax"`: `epochs` (default 200, >= 1), `learning_rate`
///   (default 0.1, > 0), `l2` (default 0, >= 0).
pub fn fit(spec: &LearnerSpec, train: &Dataset, seed: SeedSpec) -> Result<FittedModel> {
    let _ = seed; // built-in learners are deterministic
    match spec.name.as_str() {
        "knn" => {
            reject_unknown_keys(spec, &["k_neighbors"])?;
            let k = hyper_as_count(spec, "k_neighbors", 3)?;
            if k < 1 || k > train.len() {
                return Err(Error::Hyperparameter(format!(
                    "k_neighbors = {k} outside 1..={}",
                    train.len()
                )));
            }
            Ok(FittedModel::Knn(KnnModel {
                k_neighbors: k,
                train_features: train.features().clone(),
                train_labels: train.labels().to_vec(),
                class_count: train.class_count(),
            }))
        }
        "softmax" => {
            reject_unknown_keys(spec, &["epochs", "learning_rate", "l2"])?;
            let epochs = hyper_as_count(spec, "epochs", 200)?;
            if epochs < 1 {
                return Err(Error::Hyperparameter("epochs must be >= 1".into()));
            }
            let lr = spec.get("learning_rate").unwrap_or(0.1);
            if !lr.is_finite() || lr <= 0.0 {
                return Err(Error::Hyperparameter(format!(
                    "learning_rate must be > 0, got {lr}"
                )));
            }
            let l2 = spec.get("l2").unwrap_or(0.0);
            if l2 < 0.0 {
                return Err(Error::Hyperparameter(format!("l2 must be >= 0, got {l2}")));
            }
            let k = train.class_count();
            let d = train.dim();
            let mut weights = Matrix::zeros(k, d);
            let mut bias = vec![0.0; k];
            for _ in 0..epochs {
                let (grad_w, grad_b) = softmax_gradient(&weights, &bias, train, l2)?;
                for r in 0..k {
                    for c in 0..d {
                        weights.set(r, c, weights.get(r, c) - lr * grad_w.get(r, c));
                    }
                }
                for (b, g) in bias.iter_mut().zip(&grad_b) {
                    *b -= lr * g;
                }
            }
            Ok(FittedModel::Softmax(SoftmaxModel {
                weights,
                bias,
                class_count: k,
            }))
        }
        other => Err(Error::UnknownLearner(other.to_string())),
    }
}

impl FittedModel {
    /// Predicts a label for every row of `features`.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        match self {
            FittedModel::Knn(m) => m.predict(features),
            FittedModel::Softmax(m) => m.predict(features),
        }
    }

    pub fn class_count(&self) -> usize {
        match self {
            FittedModel::Knn(m) => m.class_count,
            FittedModel::Softmax(m) => m.class_count,
        }
    }
}

impl KnnModel {
    /// Majority vote among the k nearest training rows by Euclidean
    /// distance. Distance ties prefer the lower training-row index; vote
    /// ties prefer the lower class id.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        if features.cols() != self.train_features.cols() {
            return Err(Error::InvalidArgument(format!(
                "query dimension {} does not match training dimension {}",
                features.cols(),
                self.train_features.cols()
            )));
        }
        let n_train = self.train_features.rows();
        let mut out = Vec::with_capacity(features.rows());
        let mut scored: Vec<(f64, usize)> = Vec::with_capacity(n_train);
        for q in 0..features.rows() {
            let query = features.row(q);
            scored.clear();
            for t in 0..n_train {
                let row = self.train_features.row(t);
                let dist2: f64 = row.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
                scored.push((dist2, t));
            }
            scored.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut votes = vec![0usize; self.class_count];
            for &(_, t) in scored.iter().take(self.k_neighbors) {
                votes[self.train_labels[t]] += 1;
            }
            let winner = votes
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(class, _)| class)
                .unwrap();
            out.push(winner);
        }
        Ok(out)
    }
}

impl SoftmaxModel {
    /// Argmax of `W x + b`; ties prefer the lower class id.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        if features.cols() != self.weights.cols() {
            return Err(Error::InvalidArgument(format!(
                "query dimension {} does not match model dimension {}",
                features.cols(),
                self.weights.cols()
            )));
        }
        let mut out = Vec::with_capacity(features.rows());
        for i in 0..features.rows() {
            let x = features.row(i);
            let mut best = 0usize;
            let mut best_score = f64::NEG_INFINITY;
            for class in 0..self.class_count {
                let score: f64 = self
                    .weights
                    .row(class)
                    .iter()
                    .zip(x)
                    .map(|(w, v)| w * v)
                    .sum::<f64>()
                    + self.bias[class];
                if score > best_score {
                    best_score = score;
                    best = class;
                }
            }
            out.push(best);
        }
        Ok(out)
    }
}

/// Class probabilities for one example under the given parameters.
fn softmax_probs(weights: &Matrix, bias: &[f64], x: &[f64]) -> Vec<f64> {
    let k = bias.len();
    let mut logits = Vec::with_capacity(k);
    for (class, &b) in bias.iter().enumerate() {
        let z: f64 = weights
            .row(class)
            .iter()
            .zip(x)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + b;
        logits.push(z);
    }
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for z in logits.iter_mut() {
        *z = (*z - max).exp();
        sum += *z;
    }
    for z in logits.iter_mut() {
        *z /= sum;
    }
    logits
}

/// Mean multinomial cross-entropy plus `l2/2 * ||W||^2` (bias unpenalized).
pub fn softmax_loss(weights: &Matrix, bias: &[f64], data: &Dataset, l2: f64) -> Result<f64> {
    if weights.cols() != data.dim() || bias.len() != data.class_count() {
        return Err(Error::InvalidArgument(
            "parameter shapes do not match the dataset".into(),
        ));
    }
    let n = data.len() as f64;
    let mut loss = 0.0;
    for i in 0..data.len() {
        let probs = softmax_probs(weights, bias, data.features().row(i));
        loss -= probs[data.labels()[i]].max(1e-300).ln();
    }
    loss /= n;
    let penalty: f64 = weights.as_slice().iter().map(|w| w * w).sum();
    Ok(loss + 0.5 * l2 * penalty)
}

/// Analytic gradient of [`softmax_loss`] with respect to weights and bias.
pub fn softmax_gradient(
    weights: &Matrix,
    bias: &[f64],
    data: &Dataset,
    l2: f64,
) -> Result<(Matrix, Vec<f64>)> {
    if weights.cols() != data.dim() || bias.len() != data.class_count() {
        return Err(Error::InvalidArgument(
            "parameter shapes do not match the dataset".into(),
        ));
    }
    let k = data.class_count();
    let d = data.dim();
    let n = data.len() as f64;
    let mut grad_w = Matrix::zeros(k, d);
    let mut grad_b = vec![0.0; k];
    for i in 0..data.len() {
        let x = data.features().row(i);
        let probs = softmax_probs(weights, bias, x);
        for class in 0..k {
            let residual = probs[class] - f64::from(u8::from(data.labels()[i] == class));
            for (j, &xv) in x.iter().enumerate() {
                grad_w.set(class, j, grad_w.get(class, j) + residual * xv);
            }
            grad_b[class] += residual;
        }
    }
    for class in 0..k {
        for j in 0..d {
            grad_w.set(
                class,
                j,
                grad_w.get(class, j) / n + l2 * weights.get(class, j),
            );
        }
    }
    for g in grad_b.iter_mut() {
        *g /= n;
    }
    Ok((grad_w, grad_b))
}

/// Gaussian blobs: `n_per_class` points around each center row, isotropic
/// standard deviation `spread`, labels in center order.
pub fn make_blobs(
    n_per_class: usize,
    centers: &Matrix,
    spread: f64,
    seed: SeedSpec,
) -> Result<Dataset> {
    if n_per_class == 0 {
        return Err(Error::InvalidArgument("n_per_class must be >= 1".into()));
    }
    if spread < 0.0 {
        return Err(Error::InvalidArgument("spread must be >= 0".into()));
    }
    let k = centers.rows();
    let d = centers.cols();
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(n_per_class * k * d);
    let mut labels = Vec::with_capacity(n_per_class * k);
    for class in 0..k {
        for _ in 0..n_per_class {
            for j in 0..d {
                data.push(centers.get(class, j) + spread * rng.next_normal());
            }
            labels.push(class);
        }
    }
    Dataset::new(Matrix::from_flat(data, n_per_class * k, d)?, labels, k)
}

/// Two concentric circles with Gaussian radial noise: class 0 on the outer
/// ring (radius 1), class 1 on the inner ring (radius 0.5), an even class
/// split.
pub fn make_circles(n: usize, noise: f64, seed: SeedSpec) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::InvalidArgument("make_circles needs n >= 2".into()));
    }
    if noise < 0.0 {
        return Err(Error::InvalidArgument("noise must be >= 0".into()));
    }
    let n_outer = n / 2;
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(n * 2);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (base_radius, class) = if i < n_outer { (1.0, 0) } else { (0.5, 1) };
        let angle = 2.0 * std::f64::consts::PI * rng.next_f64();
        let radius = base_radius + noise * rng.next_normal();
        data.push(radius * angle.cos());
        data.push(radius * angle.sin());
        labels.push(class);
    }
    Dataset::new(Matrix::from_flat(data, n, 2)?, labels, 2)
}

/// The bundled Iris dataset: 150 examples, 4 features, 3 balanced classes.
///
/// Embedded from `data/iris.csv`
/// (sha256 `9cc1c345c71bcc9b486b74cbf6063fa66f4bb5e0f603a4b3c3471ec2e5e8e355`);
/// species are dictionary-encoded in first-appearance order
/// (setosa 0, versicolor 1, virginica 2).
pub fn iris() -> Dataset {
    let raw = include_str!("../data/iris.csv");
    let mut features = Vec::with_capacity(150 * 4);
    let mut labels = Vec::with_capacity(150);
    let mut species: Vec<String> = Vec::new();
    for line in raw.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        for value in &fields[..4] {
            features.push(value.parse::<f64>().expect("bundled iris is numeric"));
        }
        let name = fields[4].trim();
        let label = match species.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                species.push(name.to_string());
                species.len() - 1
            }
        };
        labels.push(label);
    }
    let n = labels.len();
    Dataset::new(
        Matrix::from_flat(features, n, 4).expect("bundled iris shape"),
        labels,
        species.len(),
    )
    .expect("bundled iris is valid")
}
