//! Command-line argument definitions.
//!
//! Seeds are required everywhere: there is no wall-clock default, so every
//! published number can be reproduced from the command line that made it.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "modeval",
    version,
    about = "Model evaluation, selection, and algorithm comparison toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Master seed (required; results are pure functions of it).
    #[arg(long)]
    pub seed: u64,
    /// Stream id paired with the master seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// CSV dataset with a header row; features numeric, labels in
    /// `--label-column`.
    #[arg(long, conflicts_with = "generator")]
    pub input: Option<String>,
    /// Label column name or zero-based index (default: last column).
    #[arg(long)]
    pub label_column: Option<String>,
    /// Built-in data source instead of a file: `iris`,
    /// `circles:n=300,noise=0.1`, or
    /// `blobs:n_per_class=50,classes=2,dims=2,spread=1.0`.
    #[arg(long)]
    pub generator: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMethod {
    Holdout,
    Kfold,
    RepeatedHoldout,
    Bootstrap,
    FiveByTwo,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluateMethod {
    Holdout,
    RepeatedHoldout,
    Kfold,
    Loocv,
    BootOob,
    #[value(name = "boot-632")]
    Boot632,
    #[value(name = "boot-632plus")]
    Boot632plus,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiChoice {
    None,
    Normal,
    SeT,
    Percentile,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionTest {
    Mcnemar,
    McnemarExact,
    McnemarAuto,
    CochranQ,
    FTest,
    ZProp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmTest {
    ResampledT,
    KfoldT,
    #[value(name = "5x2t")]
    FiveByTwoT,
    #[value(name = "5x2f")]
    FiveByTwoF,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedModeChoice {
    Shared,
    Independent,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleChoice {
    BestMean,
    OneSe,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectMethod {
    Kfold,
    ThreeWay,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullModeChoice {
    SameAlgorithm,
    SamePredictions,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a resampling plan and emit it for audit.
    Split {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        method: SplitMethod,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        test_fraction: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Repetitions (repeated holdout) or bootstrap rounds.
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        #[arg(long, default_value_t = false)]
        stratify: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Estimate the accuracy of one learner by a resampling method.
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        /// Learner spec, e.g. `knn:k_neighbors=3` or
        /// `softmax:epochs=200,learning_rate=0.1`.
        #[arg(long)]
        learner: String,
        #[arg(long, value_enum)]
        method: EvaluateMethod,
        #[arg(long, value_enum, default_value_t = CiChoice::None)]
        ci: CiChoice,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        test_fraction: f64,
        #[arg(long, default_value_t = false)]
        stratify: bool,
        /// Also write the per-round values as a tidy CSV to this path.
        #[arg(long)]
        emit_plot_data: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Train/test accuracies over growing training subsets.
    LearningCurve {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        learner: String,
        /// Comma-separated sizes, or `start:end:step`.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0.3)]
        test_fraction: f64,
        #[arg(long)]
        emit_plot_data: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare trained models through a shared predictions file.
    ComparePredictions {
        /// CSV: column `y_true`, then one column per model.
        #[arg(long)]
        predictions: String,
        #[arg(long, value_enum)]
        test: PredictionTest,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Drop the continuity correction from McNemar's chi-squared.
        #[arg(long, default_value_t = false)]
        no_continuity_correction: bool,
        /// mcnemar-auto switches to the exact binomial below this
        /// discordant-pair count.
        #[arg(long, default_value_t = 25)]
        exact_below: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare two learning algorithms by repeated refitting.
    CompareAlgorithms {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        learner1: String,
        #[arg(long)]
        learner2: String,
        #[arg(long, value_enum)]
        test: AlgorithmTest,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 30)]
        repetitions: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        test_fraction: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = true)]
        stratify: bool,
        #[arg(long, value_enum, default_value_t = SeedModeChoice::Shared)]
        seed_mode: SeedModeChoice,
        /// Write the per-round accuracy log as CSV to this path.
        #[arg(long)]
        round_log: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Hyperparameter selection with a withheld test set.
    Select {
        #[command(flatten)]
        data: DataArgs,
        /// Base learner name, e.g. `knn`.
        #[arg(long)]
        learner: String,
        /// Grid axis `name=v1,v2,...@simpler-end` or
        /// `name=start:end:step@simpler-end`; repeatable.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[arg(long, value_enum, default_value_t = RuleChoice::BestMean)]
        rule: RuleChoice,
        #[arg(long, value_enum, default_value_t = SelectMethod::Kfold)]
        method: SelectMethod,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Withheld test fraction; 0 selects on all data with no test
        /// evaluation (the usual follow-up to nested-cv).
        #[arg(long, default_value_t = 0.3)]
        test_fraction: f64,
        /// Three-way fractions `train,val,test` (method three-way).
        #[arg(long, default_value = "0.5,0.25,0.25")]
        fractions: String,
        #[arg(long, default_value_t = true)]
        stratify: bool,
        #[arg(long, default_value_t = false)]
        refit_on_all: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Nested cross-validation: inner selection, outer estimation.
    NestedCv {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        learner: String,
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[arg(long, default_value_t = 5)]
        outer_k: usize,
        #[arg(long, default_value_t = 2)]
        inner_k: usize,
        #[arg(long, default_value_t = true)]
        stratify: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo Type-I error study of the comparison tests.
    Simulate {
        #[arg(long, default_value_t = 500)]
        worlds: usize,
        #[arg(long, value_enum)]
        null_mode: NullModeChoice,
        /// Comma-separated tests: resampled-t, kfold-t, 5x2t, 5x2f,
        /// mcnemar, mcnemar-exact, z-prop.
        #[arg(long)]
        tests: String,
        #[arg(long, default_value = "circles:n=300,noise=0.15")]
        generator: String,
        #[arg(long, default_value = "knn:k_neighbors=5")]
        learner: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.15)]
        flip_rate: f64,
        #[arg(long, default_value_t = 0.6)]
        subsample: f64,
        #[arg(long, default_value_t = 30)]
        repetitions: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Worker threads; output is identical for any value.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}
