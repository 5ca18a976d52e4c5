//! End-to-end tests of the `modeval` binary: exit codes, output formats,
//! and byte-identical reproducibility of every command.

use std::process::{Command, Output};

fn modeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = modeval(args);
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn predictions_fixture() -> String {
    format!(
        "{}/tests/data/three_model_predictions.csv",
        env!("CARGO_MANIFEST_DIR")
    )
}

fn iris_csv() -> String {
    format!("{}/../core/data/iris.csv", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn acceptance_11_commands_are_byte_identical_on_rerun() {
    let preds = predictions_fixture();
    let iris = iris_csv();
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "split",
            "--generator",
            "circles:n=40,noise=0.1",
            "--method",
            "kfold",
            "--k",
            "5",
            "--stratify",
            "--seed",
            "3",
        ],
        vec![
            "evaluate",
            "--input",
            &iris,
            "--label-column",
            "species",
            "--learner",
            "knn:k_neighbors=3",
            "--method",
            "kfold",
            "--k",
            "10",
            "--stratify",
            "--ci",
            "se-t",
            "--seed",
            "1",
        ],
        vec![
            "learning-curve",
            "--generator",
            "blobs:n_per_class=40,classes=2,dims=2,spread=1.0",
            "--learner",
            "softmax:epochs=50,learning_rate=0.3",
            "--sizes",
            "10,20,40",
            "--seed",
            "5",
        ],
        vec![
            "compare-predictions",
            "--predictions",
            &preds,
            "--test",
            "cochran-q",
            "--seed",
            "1",
        ],
        vec![
            "compare-algorithms",
            "--generator",
            "circles:n=80,noise=0.15",
            "--learner1",
            "knn:k_neighbors=1",
            "--learner2",
            "knn:k_neighbors=9",
            "--test",
            "5x2t",
            "--seed",
            "7",
        ],
        vec![
            "select",
            "--generator",
            "circles:n=80,noise=0.15",
            "--learner",
            "knn",
            "--axis",
            "k_neighbors=1:9:2@larger",
            "--rule",
            "one-se",
            "--k",
            "5",
            "--seed",
            "3",
        ],
        vec![
            "nested-cv",
            "--generator",
            "circles:n=80,noise=0.15",
            "--learner",
            "knn",
            "--axis",
            "k_neighbors=1,5@larger",
            "--outer-k",
            "4",
            "--inner-k",
            "2",
            "--seed",
            "11",
        ],
        vec![
            "simulate",
            "--null-mode",
            "same-predictions",
            "--tests",
            "mcnemar-exact,z-prop",
            "--worlds",
            "12",
            "--generator",
            "circles:n=60,noise=0.1",
            "--seed",
            "9",
        ],
    ];
    for args in &commands {
        let first = stdout_of(args);
        let second = stdout_of(args);
        assert_eq!(first, second, "non-deterministic output for {args:?}");
        assert!(first.contains("\"schema_version\": 1"), "{args:?}");
    }
    println!("acceptance 11 (byte-identical CLI re-runs): PASS");
}

#[test]
fn cochran_q_markdown_shows_worked_values() {
    let out = stdout_of(&[
        "compare-predictions",
        "--predictions",
        &predictions_fixture(),
        "--test",
        "cochran-q",
        "--seed",
        "1",
        "--format",
        "markdown",
    ]);
    assert!(out.contains("7.5294"), "{out}");
    assert!(out.contains("0.0232"), "{out}");
    assert!(out.contains("reject null"), "{out}");
}

#[test]
fn json_report_round_trips_to_test_report() {
    let out = stdout_of(&[
        "compare-predictions",
        "--predictions",
        &predictions_fixture(),
        "--test",
        "f-test",
        "--seed",
        "1",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let report: modeval::types::TestReport =
        serde_json::from_value(value["report"].clone()).unwrap();
    assert_eq!(report.statistic_name, "F");
    assert_eq!(report.reject_null, report.p_value < report.alpha);
}

#[test]
fn evaluate_csv_has_one_row_per_round() {
    let out = stdout_of(&[
        "evaluate",
        "--input",
        &iris_csv(),
        "--label-column",
        "species",
        "--learner",
        "knn:k_neighbors=3",
        "--method",
        "repeated-holdout",
        "--rounds",
        "50",
        "--test-fraction",
        "0.5",
        "--stratify",
        "--seed",
        "2",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "round,value");
    assert_eq!(lines.len(), 51);
}

#[test]
fn bundled_iris_ingests_with_expected_shape() {
    let out = stdout_of(&[
        "split",
        "--input",
        &iris_csv(),
        "--label-column",
        "species",
        "--method",
        "holdout",
        "--test-fraction",
        "0.33333333",
        "--stratify",
        "--seed",
        "1",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["report"]["n"], 150);
    let train = value["report"]["plan"]["train_indices"].as_array().unwrap();
    let test = value["report"]["plan"]["test_indices"].as_array().unwrap();
    assert_eq!(train.len() + test.len(), 150);
}

#[test]
fn usage_errors_exit_1() {
    // Unknown flag.
    let out = modeval(&["evaluate", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    // No data source.
    let out = modeval(&[
        "evaluate",
        "--learner",
        "knn",
        "--method",
        "kfold",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // z-prop requires exactly two model columns.
    let out = modeval(&[
        "compare-predictions",
        "--predictions",
        &predictions_fixture(),
        "--test",
        "z-prop",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown learner name.
    let out = modeval(&[
        "evaluate",
        "--generator",
        "iris",
        "--learner",
        "svm",
        "--method",
        "kfold",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    let out = modeval(&[
        "evaluate",
        "--input",
        "/nonexistent/data.csv",
        "--learner",
        "knn",
        "--method",
        "kfold",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let dir = std::env::temp_dir();
    let header_only = dir.join("modeval_header_only.csv");
    std::fs::write(&header_only, "x1,x2,label\n").unwrap();
    let out = modeval(&[
        "evaluate",
        "--input",
        header_only.to_str().unwrap(),
        "--learner",
        "knn",
        "--method",
        "kfold",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty dataset"));
}

#[test]
fn degenerate_statistics_exit_3() {
    // Two identical model columns: no discordant pairs.
    let dir = std::env::temp_dir();
    let path = dir.join("modeval_identical_preds.csv");
    std::fs::write(&path, "y_true,m1,m2\n0,0,0\n1,1,1\n0,1,1\n").unwrap();
    let out = modeval(&[
        "compare-predictions",
        "--predictions",
        path.to_str().unwrap(),
        "--test",
        "mcnemar",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("discordant"));
}

#[test]
fn select_markdown_flags_the_one_se_pick() {
    let out = stdout_of(&[
        "select",
        "--generator",
        "circles:n=120,noise=0.15",
        "--learner",
        "knn",
        "--axis",
        "k_neighbors=1:15:2@larger",
        "--rule",
        "one-se",
        "--k",
        "5",
        "--seed",
        "3",
        "--format",
        "markdown",
    ]);
    assert!(out.contains("one-se pick"), "{out}");
}

#[test]
fn round_log_writes_per_round_csv() {
    let dir = std::env::temp_dir();
    let log = dir.join("modeval_round_log.csv");
    let _ = stdout_of(&[
        "compare-algorithms",
        "--generator",
        "circles:n=60,noise=0.1",
        "--learner1",
        "knn:k_neighbors=1",
        "--learner2",
        "knn:k_neighbors=7",
        "--test",
        "5x2t",
        "--seed",
        "5",
        "--round-log",
        log.to_str().unwrap(),
    ]);
    let log_text = std::fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = log_text.lines().collect();
    assert_eq!(lines[0], "round,half,acc1,acc2,diff");
    assert_eq!(lines.len(), 11); // 5 replications x 2 halves + header
}

#[test]
fn mcnemar_variants_are_selectable() {
    // A fixture with 12 discordant pairs: auto should fall back to exact.
    let dir = std::env::temp_dir();
    let path = dir.join("modeval_discordant.csv");
    let mut text = String::from("y_true,m1,m2\n");
    for _ in 0..11 {
        text.push_str("0,0,1\n");
    }
    text.push_str("0,1,0\n");
    for _ in 0..88 {
        text.push_str("0,0,0\n");
    }
    std::fs::write(&path, &text).unwrap();

    let auto = stdout_of(&[
        "compare-predictions",
        "--predictions",
        path.to_str().unwrap(),
        "--test",
        "mcnemar-auto",
        "--seed",
        "1",
    ]);
    let value: serde_json::Value = serde_json::from_str(&auto).unwrap();
    assert_eq!(value["report"]["statistic_name"], "b");

    let plain = stdout_of(&[
        "compare-predictions",
        "--predictions",
        path.to_str().unwrap(),
        "--test",
        "mcnemar",
        "--no-continuity-correction",
        "--seed",
        "1",
    ]);
    let value: serde_json::Value = serde_json::from_str(&plain).unwrap();
    assert_eq!(value["report"]["statistic_name"], "chi2");
    let stat = value["report"]["statistic"].as_f64().unwrap();
    assert!((stat - 100.0 / 12.0).abs() < 1e-9);
}

#[test]
fn simulate_threads_do_not_change_output() {
    let base = [
        "simulate",
        "--null-mode",
        "same-predictions",
        "--tests",
        "mcnemar-exact",
        "--worlds",
        "16",
        "--generator",
        "circles:n=60,noise=0.1",
        "--seed",
        "4",
    ];
    let serial = stdout_of(&base);
    let mut threaded: Vec<&str> = base.to_vec();
    threaded.extend_from_slice(&["--threads", "4"]);
    let parallel = stdout_of(&threaded);
    assert_eq!(serial, parallel);
}
