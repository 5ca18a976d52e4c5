//! `modeval` command line: resampling plans, accuracy estimation with
//! confidence intervals, model and algorithm comparison tests, model
//! selection workflows, and Type-I error simulation.

mod args;
mod emit;
mod error;
mod ingest;
mod parse;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use modeval::algo_tests::{
    combined_f_5x2cv, paired_t_5x2cv, paired_t_kfold, paired_t_resampled, SeedMode,
};
use modeval::estimators::{
    bootstrap_632, bootstrap_632plus, bootstrap_oob, ci_bootstrap_se, ci_normal_approx,
    ci_percentile, evaluate_holdout, evaluate_kfold, evaluate_repeated_holdout, learning_curve,
    no_information_rate,
};
use modeval::learners::fit;
use modeval::metrics::correctness_matrix;
use modeval::model_tests::{
    cochrans_q, looney_f_test, mcnemar_auto, mcnemar_exact, mcnemar_table, mcnemar_test,
    proportions_z_test,
};
use modeval::resampling::{
    bootstrap_plan, five_by_two_plan, holdout_split, kfold_plan, repeated_holdout_plan,
    BootstrapPlan, FoldPlan, SplitPlan,
};
use modeval::selection::{nested_cv, select_kfold, three_way_holdout_select, Grid, SelectionRule};
use modeval::simulate::{run_type1_study, NullMode, SimulationConfig};
use modeval::types::{CiMethod, Dataset, EvalReport};
use modeval::{derive_stream, SeedSpec};

use args::{
    AlgorithmTest, CiChoice, Cli, Command, CommonArgs, DataArgs, EvaluateMethod, NullModeChoice,
    OutputFormat, PredictionTest, RuleChoice, SeedModeChoice, SelectMethod, SplitMethod,
};
use emit::{to_json, write_output};
use error::{CliError, CliResult};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successful outcomes, not usage errors.
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                std::process::exit(0);
            }
            eprint!("{err}");
            std::process::exit(1);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}

fn load_dataset(data: &DataArgs) -> CliResult<Dataset> {
    match (&data.input, &data.generator) {
        (Some(path), None) => ingest::ingest_dataset(path, data.label_column.as_deref()),
        (None, Some(spec)) => {
            let generator = parse::parse_generator(spec)?;
            // Generated data is part of the command's seed contract only
            // through --seed; a fixed generation stream keeps `--input`
            // and `--generator` runs directly comparable.
            generator
                .generate(SeedSpec::new(0xDA7A, 0))
                .map_err(CliError::from)
        }
        (None, None) => Err(CliError::Usage(
            "provide a dataset with --input or --generator".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn seed_of(common: &CommonArgs) -> SeedSpec {
    SeedSpec::new(common.seed, common.stream)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Split {
            data,
            method,
            test_fraction,
            k,
            rounds,
            stratify,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let seed = seed_of(&common);
            let plan = build_plan(&dataset, method, test_fraction, k, rounds, stratify, seed)?;
            emit_split(&plan, &common)
        }
        Command::Evaluate {
            data,
            learner,
            method,
            ci,
            confidence,
            k,
            rounds,
            test_fraction,
            stratify,
            emit_plot_data,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let spec = parse::parse_learner(&learner)?;
            let seed = seed_of(&common);
            let report = run_evaluate(
                &dataset,
                &spec,
                method,
                ci,
                confidence,
                k,
                rounds,
                test_fraction,
                stratify,
                seed,
            )?;
            if let Some(path) = emit_plot_data {
                write_output(&emit::eval_report_csv(&report), Some(&path))?;
            }
            let text = match common.format {
                OutputFormat::Json => to_json("evaluate", &report)?,
                OutputFormat::Markdown => emit::eval_report_markdown(&report),
                OutputFormat::Csv => emit::eval_report_csv(&report),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::LearningCurve {
            data,
            learner,
            sizes,
            test_fraction,
            emit_plot_data,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let spec = parse::parse_learner(&learner)?;
            let sizes = parse::parse_sizes(&sizes)?;
            let seed = seed_of(&common);
            let plan = holdout_split(
                dataset.len(),
                dataset.labels(),
                test_fraction,
                true,
                derive_stream(seed, 0),
            )?;
            let points = learning_curve(&spec, &dataset, &sizes, &plan, derive_stream(seed, 1))?;
            if let Some(path) = emit_plot_data {
                write_output(&emit::curve_csv(&points), Some(&path))?;
            }
            let text = match common.format {
                OutputFormat::Json => to_json("learning-curve", &points)?,
                OutputFormat::Markdown => emit::curve_markdown(&points),
                OutputFormat::Csv => emit::curve_csv(&points),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::ComparePredictions {
            predictions,
            test,
            alpha,
            no_continuity_correction,
            exact_below,
            common,
        } => {
            let (y_true, preds) = ingest::ingest_predictions(&predictions)?;
            let report = run_prediction_test(
                &y_true,
                &preds,
                test,
                alpha,
                !no_continuity_correction,
                exact_below,
            )?;
            let text = match common.format {
                OutputFormat::Json => to_json("compare-predictions", &report)?,
                OutputFormat::Markdown => emit::test_report_markdown(&report),
                OutputFormat::Csv => emit::test_report_csv(&report),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::CompareAlgorithms {
            data,
            learner1,
            learner2,
            test,
            alpha,
            repetitions,
            test_fraction,
            k,
            stratify,
            seed_mode,
            round_log,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let spec1 = parse::parse_learner(&learner1)?;
            let spec2 = parse::parse_learner(&learner2)?;
            let seed = seed_of(&common);
            let mode = match seed_mode {
                SeedModeChoice::Shared => SeedMode::Shared,
                SeedModeChoice::Independent => SeedMode::Independent,
            };
            let comparison = match test {
                AlgorithmTest::ResampledT => paired_t_resampled(
                    &spec1,
                    &spec2,
                    &dataset,
                    repetitions,
                    test_fraction,
                    seed,
                    alpha,
                    mode,
                )?,
                AlgorithmTest::KfoldT => {
                    paired_t_kfold(&spec1, &spec2, &dataset, k, stratify, seed, alpha, mode)?
                }
                AlgorithmTest::FiveByTwoT => {
                    paired_t_5x2cv(&spec1, &spec2, &dataset, seed, alpha, mode)?
                }
                AlgorithmTest::FiveByTwoF => {
                    combined_f_5x2cv(&spec1, &spec2, &dataset, seed, alpha, mode)?
                }
            };
            if let Some(path) = round_log {
                write_output(&emit::paired_rounds_csv(&comparison), Some(&path))?;
            }
            let text = match common.format {
                OutputFormat::Json => to_json("compare-algorithms", &comparison)?,
                OutputFormat::Markdown => emit::paired_markdown(&comparison),
                OutputFormat::Csv => emit::paired_rounds_csv(&comparison),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::Select {
            data,
            learner,
            axes,
            rule,
            method,
            k,
            test_fraction,
            fractions,
            stratify,
            refit_on_all,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let mut grid = Grid::new(parse::parse_learner(&learner)?.name);
            for axis in &axes {
                grid.axes.push(parse::parse_axis(axis)?);
            }
            let seed = seed_of(&common);
            let report = match method {
                SelectMethod::Kfold => {
                    let rule = match rule {
                        RuleChoice::BestMean => SelectionRule::BestMean,
                        RuleChoice::OneSe => SelectionRule::OneSe,
                    };
                    select_kfold(
                        &grid,
                        &dataset,
                        k,
                        stratify,
                        test_fraction,
                        rule,
                        refit_on_all,
                        seed,
                    )?
                }
                SelectMethod::ThreeWay => {
                    if rule == RuleChoice::OneSe {
                        return Err(CliError::Usage(
                            "one-se needs fold-level standard errors; use --method kfold".into(),
                        ));
                    }
                    let fractions = parse::parse_fractions(&fractions)?;
                    three_way_holdout_select(&grid, &dataset, fractions, refit_on_all, seed)?
                }
            };
            let text = match common.format {
                OutputFormat::Json => to_json("select", &report)?,
                OutputFormat::Markdown => emit::selection_markdown(&report),
                OutputFormat::Csv => emit::selection_csv(&report),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::NestedCv {
            data,
            learner,
            axes,
            outer_k,
            inner_k,
            stratify,
            common,
        } => {
            let dataset = load_dataset(&data)?;
            let mut grid = Grid::new(parse::parse_learner(&learner)?.name);
            for axis in &axes {
                grid.axes.push(parse::parse_axis(axis)?);
            }
            let outcome = nested_cv(
                &grid,
                &dataset,
                outer_k,
                inner_k,
                stratify,
                seed_of(&common),
            )?;
            let text = match common.format {
                OutputFormat::Json => to_json("nested-cv", &outcome)?,
                OutputFormat::Markdown => emit::nested_markdown(&outcome),
                OutputFormat::Csv => emit::nested_csv(&outcome),
            };
            write_output(&text, common.output.as_deref())
        }
        Command::Simulate {
            worlds,
            null_mode,
            tests,
            generator,
            learner,
            alpha,
            flip_rate,
            subsample,
            repetitions,
            k,
            threads,
            common,
        } => {
            let mut config = SimulationConfig::new(
                worlds,
                match null_mode {
                    NullModeChoice::SameAlgorithm => NullMode::SameAlgorithmIndependentSeeds,
                    NullModeChoice::SamePredictions => NullMode::SamePredictionsPerturbed,
                },
                parse::parse_generator(&generator)?,
                parse::parse_learner(&learner)?,
                seed_of(&common),
            );
            config.tests = parse::parse_tests(&tests)?;
            config.alpha = alpha;
            config.flip_rate = flip_rate;
            config.subsample = subsample;
            config.resampled_repetitions = repetitions;
            config.kfold_k = k;
            config.threads = threads;
            let rows = run_type1_study(&config)?;
            let text = match common.format {
                OutputFormat::Json => to_json("simulate", &rows)?,
                OutputFormat::Markdown => emit::rates_markdown(&rows),
                OutputFormat::Csv => emit::rates_csv(&rows),
            };
            write_output(&text, common.output.as_deref())
        }
    }
}

/// Emitted plan for the `split` command.
#[derive(Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
enum PlanOutput {
    Holdout {
        n: usize,
        seed: SeedSpec,
        plan: SplitPlan,
    },
    Kfold {
        n: usize,
        seed: SeedSpec,
        folds: FoldPlan,
    },
    RepeatedHoldout {
        n: usize,
        seed: SeedSpec,
        plans: Vec<SplitPlan>,
    },
    Bootstrap {
        n: usize,
        seed: SeedSpec,
        plan: BootstrapPlan,
    },
    FiveByTwo {
        n: usize,
        seed: SeedSpec,
        replications: Vec<(SplitPlan, SplitPlan)>,
    },
}

fn build_plan(
    dataset: &Dataset,
    method: SplitMethod,
    test_fraction: f64,
    k: usize,
    rounds: usize,
    stratify: bool,
    seed: SeedSpec,
) -> CliResult<PlanOutput> {
    let n = dataset.len();
    let labels = dataset.labels();
    Ok(match method {
        SplitMethod::Holdout => PlanOutput::Holdout {
            n,
            seed,
            plan: holdout_split(n, labels, test_fraction, stratify, seed)?,
        },
        SplitMethod::Kfold => PlanOutput::Kfold {
            n,
            seed,
            folds: kfold_plan(n, labels, k, stratify, seed)?,
        },
        SplitMethod::RepeatedHoldout => PlanOutput::RepeatedHoldout {
            n,
            seed,
            plans: repeated_holdout_plan(n, labels, test_fraction, rounds, stratify, seed)?,
        },
        SplitMethod::Bootstrap => PlanOutput::Bootstrap {
            n,
            seed,
            plan: bootstrap_plan(n, rounds, seed)?,
        },
        SplitMethod::FiveByTwo => PlanOutput::FiveByTwo {
            n,
            seed,
            replications: five_by_two_plan(n, labels, seed)?,
        },
    })
}

fn emit_split(plan: &PlanOutput, common: &CommonArgs) -> CliResult<()> {
    let text = match common.format {
        OutputFormat::Json => to_json("split", plan)?,
        OutputFormat::Csv => split_csv(plan),
        OutputFormat::Markdown => split_markdown(plan),
    };
    write_output(&text, common.output.as_deref())
}

fn split_csv(plan: &PlanOutput) -> String {
    let mut out = String::from("unit,role,example_index\n");
    let mut push = |unit: String, role: &str, indices: &[usize]| {
        for &i in indices {
            out.push_str(&format!("{unit},{role},{i}\n"));
        }
    };
    match plan {
        PlanOutput::Holdout { plan, .. } => {
            push("0".into(), "train", &plan.train_indices);
            push("0".into(), "test", &plan.test_indices);
        }
        PlanOutput::Kfold { folds, .. } => {
            for (f, fold) in folds.folds.iter().enumerate() {
                push(f.to_string(), "fold", fold);
            }
        }
        PlanOutput::RepeatedHoldout { plans, .. } => {
            for (r, plan) in plans.iter().enumerate() {
                push(r.to_string(), "train", &plan.train_indices);
                push(r.to_string(), "test", &plan.test_indices);
            }
        }
        PlanOutput::Bootstrap { plan, .. } => {
            for (r, round) in plan.rounds.iter().enumerate() {
                push(r.to_string(), "in_bag", &round.in_bag);
                push(r.to_string(), "out_of_bag", &round.out_of_bag);
            }
        }
        PlanOutput::FiveByTwo { replications, .. } => {
            for (r, (first, second)) in replications.iter().enumerate() {
                push(format!("{r}A"), "train", &first.train_indices);
                push(format!("{r}A"), "test", &first.test_indices);
                push(format!("{r}B"), "train", &second.train_indices);
                push(format!("{r}B"), "test", &second.test_indices);
            }
        }
    }
    out
}

fn split_markdown(plan: &PlanOutput) -> String {
    let mut out = String::from("| unit | train size | test size |\n|---|---|---|\n");
    match plan {
        PlanOutput::Holdout { plan, .. } => {
            out.push_str(&format!(
                "| 0 | {} | {} |\n",
                plan.train_indices.len(),
                plan.test_indices.len()
            ));
        }
        PlanOutput::Kfold { folds, .. } => {
            for (f, fold) in folds.folds.iter().enumerate() {
                out.push_str(&format!("| fold {f} | - | {} |\n", fold.len()));
            }
        }
        PlanOutput::RepeatedHoldout { plans, .. } => {
            for (r, plan) in plans.iter().enumerate() {
                out.push_str(&format!(
                    "| {r} | {} | {} |\n",
                    plan.train_indices.len(),
                    plan.test_indices.len()
                ));
            }
        }
        PlanOutput::Bootstrap { plan, .. } => {
            for (r, round) in plan.rounds.iter().enumerate() {
                out.push_str(&format!(
                    "| {r} | {} | {} |\n",
                    round.in_bag.len(),
                    round.out_of_bag.len()
                ));
            }
        }
        PlanOutput::FiveByTwo { replications, .. } => {
            for (r, (first, _)) in replications.iter().enumerate() {
                out.push_str(&format!(
                    "| {r} | {} | {} |\n",
                    first.train_indices.len(),
                    first.test_indices.len()
                ));
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn run_evaluate(
    dataset: &Dataset,
    spec: &modeval::types::LearnerSpec,
    method: EvaluateMethod,
    ci: CiChoice,
    confidence: f64,
    k: usize,
    rounds: usize,
    test_fraction: f64,
    stratify: bool,
    seed: SeedSpec,
) -> CliResult<EvalReport> {
    let n = dataset.len();
    let labels = dataset.labels();
    // Sample count behind one accuracy value, for the normal interval.
    let (mut report, normal_n) = match method {
        EvaluateMethod::Holdout => {
            let plan = holdout_split(n, labels, test_fraction, stratify, derive_stream(seed, 0))?;
            let test_len = plan.test_indices.len();
            (
                evaluate_holdout(spec, dataset, &plan, derive_stream(seed, 1))?,
                test_len,
            )
        }
        EvaluateMethod::RepeatedHoldout => {
            let plans = repeated_holdout_plan(
                n,
                labels,
                test_fraction,
                rounds,
                stratify,
                derive_stream(seed, 0),
            )?;
            let test_len = plans[0].test_indices.len();
            (evaluate_repeated_holdout(spec, dataset, &plans)?, test_len)
        }
        EvaluateMethod::Kfold => {
            let folds = kfold_plan(n, labels, k, stratify, derive_stream(seed, 0))?;
            // Every example is tested exactly once across the folds.
            (evaluate_kfold(spec, dataset, &folds)?, n)
        }
        EvaluateMethod::Loocv => {
            let folds = kfold_plan(n, labels, n, false, derive_stream(seed, 0))?;
            (evaluate_kfold(spec, dataset, &folds)?, n)
        }
        EvaluateMethod::BootOob | EvaluateMethod::Boot632 | EvaluateMethod::Boot632plus => {
            let plan = bootstrap_plan(n, rounds, derive_stream(seed, 0))?;
            let oob = bootstrap_oob(spec, dataset, &plan)?;
            let estimate = match method {
                EvaluateMethod::BootOob => oob,
                EvaluateMethod::Boot632 => bootstrap_632(&oob)?,
                EvaluateMethod::Boot632plus => {
                    let model = fit(spec, dataset, derive_stream(seed, 1))?;
                    let preds = model.predict(dataset.features())?;
                    let gamma = no_information_rate(labels, &preds)?;
                    bootstrap_632plus(&oob, gamma)?
                }
                _ => unreachable!(),
            };
            (estimate.to_eval_report(), 0)
        }
    };
    report.seed_provenance = Some(seed);

    match ci {
        CiChoice::None => {}
        CiChoice::Normal => {
            if normal_n == 0 {
                return Err(CliError::Usage(
                    "normal CI is not defined for bootstrap estimators; use se-t or percentile"
                        .into(),
                ));
            }
            let (lower, upper) = ci_normal_approx(report.point_estimate, normal_n, confidence)?;
            report = report.with_ci(CiMethod::NormalApprox, lower, upper);
        }
        CiChoice::SeT => {
            let (lower, upper) = ci_bootstrap_se(&report.per_round, confidence)?;
            report = report.with_ci(CiMethod::SeT, lower, upper);
        }
        CiChoice::Percentile => {
            let alpha = (1.0 - confidence) / 2.0;
            let (lower, upper) = ci_percentile(&report.per_round, alpha)?;
            report = report.with_ci(CiMethod::Percentile, lower, upper);
        }
    }
    Ok(report)
}

fn run_prediction_test(
    y_true: &[usize],
    preds: &[Vec<usize>],
    test: PredictionTest,
    alpha: f64,
    continuity_correction: bool,
    exact_below: u64,
) -> CliResult<modeval::types::TestReport> {
    let pairwise = |name: &str| -> CliResult<modeval::model_tests::McNemarTable> {
        if preds.len() != 2 {
            return Err(CliError::Usage(format!(
                "{name} compares exactly 2 models; the file has {}",
                preds.len()
            )));
        }
        Ok(mcnemar_table(y_true, &preds[0], &preds[1])?)
    };
    let report = match test {
        PredictionTest::Mcnemar => {
            let table = pairwise("mcnemar")?;
            mcnemar_test(&table, continuity_correction, alpha)?
        }
        PredictionTest::McnemarExact => {
            let table = pairwise("mcnemar-exact")?;
            mcnemar_exact(&table, alpha)?
        }
        PredictionTest::McnemarAuto => {
            let table = pairwise("mcnemar-auto")?;
            mcnemar_auto(&table, alpha, exact_below)?
        }
        PredictionTest::ZProp => {
            let table = pairwise("z-prop")?;
            proportions_z_test(
                table.accuracy_model1(),
                table.accuracy_model2(),
                table.n(),
                alpha,
            )?
        }
        PredictionTest::CochranQ => {
            let matrix = correctness_matrix(y_true, preds)?;
            cochrans_q(&matrix, alpha)?
        }
        PredictionTest::FTest => {
            let matrix = correctness_matrix(y_true, preds)?;
            looney_f_test(&matrix, alpha)?
        }
    };
    Ok(report)
}
