//! Report emission: versioned JSON, markdown tables for humans, and CSV
//! for per-round logs. Output is a pure function of the report, so
//! re-running a command byte-reproduces it.

use serde::Serialize;

use modeval::algo_tests::PairedComparison;
use modeval::estimators::LearningCurvePoint;
use modeval::selection::{NestedCvOutcome, SelectionReport, SelectionRule};
use modeval::simulate::RateRow;
use modeval::types::{EvalReport, TestReport};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    report: &'a T,
}

pub fn to_json<T: Serialize>(command: &str, report: &T) -> CliResult<String> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        report,
    };
    serde_json::to_string_pretty(&envelope)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Data(format!("serialization failed: {e}")))
}

pub fn write_output(text: &str, path: Option<&str>) -> CliResult<()> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {path}: {e}"))),
    }
}

fn fmt4(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        x.to_string()
    }
}

fn fmt_df(df: (f64, f64)) -> String {
    if df == (0.0, 0.0) {
        "-".into()
    } else if df.1 == 0.0 {
        fmt4(df.0)
    } else {
        format!("({}, {})", fmt4(df.0), fmt4(df.1))
    }
}

pub fn test_report_markdown(report: &TestReport) -> String {
    let mut out = String::new();
    out.push_str("| quantity | value |\n|---|---|\n");
    out.push_str(&format!(
        "| statistic ({}) | {} |\n",
        report.statistic_name,
        fmt4(report.statistic)
    ));
    out.push_str(&format!("| df | {} |\n", fmt_df(report.df)));
    out.push_str(&format!("| p-value | {} |\n", fmt4(report.p_value)));
    out.push_str(&format!("| alpha | {} |\n", fmt4(report.alpha)));
    out.push_str(&format!(
        "| decision | {} |\n",
        if report.reject_null {
            "reject null"
        } else {
            "fail to reject null"
        }
    ));
    for warning in &report.warnings {
        out.push_str(&format!("\n> note: {warning}\n"));
    }
    out
}

pub fn test_report_csv(report: &TestReport) -> String {
    let mut out = String::from("statistic_name,statistic,df1,df2,p_value,alpha,reject_null\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        report.statistic_name,
        report.statistic,
        report.df.0,
        report.df.1,
        report.p_value,
        report.alpha,
        report.reject_null
    ));
    out
}

pub fn eval_report_markdown(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str("| quantity | value |\n|---|---|\n");
    out.push_str(&format!("| estimator | {} |\n", report.estimator));
    out.push_str(&format!(
        "| point estimate | {} |\n",
        fmt4(report.point_estimate)
    ));
    out.push_str(&format!("| rounds | {} |\n", report.per_round.len()));
    if report.skipped_rounds > 0 {
        out.push_str(&format!("| skipped rounds | {} |\n", report.skipped_rounds));
    }
    if let Some(ci) = &report.ci {
        out.push_str(&format!(
            "| ci | [{}, {}] ({:?}) |\n",
            fmt4(ci.lower),
            fmt4(ci.upper),
            ci.method
        ));
    }
    out
}

pub fn eval_report_csv(report: &EvalReport) -> String {
    let mut out = String::from("round,value\n");
    for (i, v) in report.per_round.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

pub fn curve_markdown(points: &[LearningCurvePoint]) -> String {
    let mut out = String::from("| train size | train acc | test acc |\n|---|---|---|\n");
    for p in points {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            p.train_size,
            fmt4(p.train_acc),
            fmt4(p.test_acc)
        ));
    }
    out
}

pub fn curve_csv(points: &[LearningCurvePoint]) -> String {
    let mut out = String::from("train_size,train_acc,test_acc\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            p.train_size, p.train_acc, p.test_acc
        ));
    }
    out
}

pub fn paired_rounds_csv(comparison: &PairedComparison) -> String {
    let mut out = String::from("round,half,acc1,acc2,diff\n");
    for r in &comparison.rounds {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.round,
            r.half,
            r.acc1,
            r.acc2,
            r.diff()
        ));
    }
    out
}

pub fn paired_markdown(comparison: &PairedComparison) -> String {
    let mut out = test_report_markdown(&comparison.report);
    out.push_str("\n| round | half | acc1 | acc2 | diff |\n|---|---|---|---|---|\n");
    for r in &comparison.rounds {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            r.round,
            r.half,
            fmt4(r.acc1),
            fmt4(r.acc2),
            fmt4(r.diff())
        ));
    }
    out
}

fn spec_label(spec: &modeval::types::LearnerSpec) -> String {
    let params: Vec<String> = spec
        .hyperparameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if params.is_empty() {
        spec.name.clone()
    } else {
        format!("{}:{}", spec.name, params.join(","))
    }
}

pub fn selection_markdown(report: &SelectionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "workflow: {} | rule: {:?} | test accuracy of chosen: {}\n\n",
        report.workflow,
        report.rule,
        report.final_test_acc.map_or_else(|| "-".into(), fmt4)
    ));
    out.push_str("| rank by mean | config | mean acc | se | complexity rank | chosen |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    let mut order: Vec<usize> = (0..report.per_config.len()).collect();
    order.sort_by(|&i, &j| {
        report.per_config[j]
            .mean_acc
            .partial_cmp(&report.per_config[i].mean_acc)
            .unwrap()
            .then(report.complexity_rank[i].cmp(&report.complexity_rank[j]))
    });
    for (rank, &i) in order.iter().enumerate() {
        let config = &report.per_config[i];
        let marker = if i == report.chosen_index {
            match report.rule {
                SelectionRule::OneSe => "<- one-se pick",
                SelectionRule::BestMean => "<- chosen",
            }
        } else {
            ""
        };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            rank + 1,
            spec_label(&config.spec),
            fmt4(config.mean_acc),
            fmt4(config.se_acc),
            report.complexity_rank[i],
            marker
        ));
    }
    out
}

pub fn selection_csv(report: &SelectionReport) -> String {
    let mut out = String::from("config,mean_acc,se_acc,complexity_rank,chosen\n");
    for (i, config) in report.per_config.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            spec_label(&config.spec),
            config.mean_acc,
            config.se_acc,
            report.complexity_rank[i],
            i == report.chosen_index
        ));
    }
    out
}

pub fn nested_markdown(outcome: &NestedCvOutcome) -> String {
    let mut out = eval_report_markdown(&outcome.report);
    out.push_str("\n| outer fold | chosen config | inner mean acc | outer acc |\n");
    out.push_str("|---|---|---|---|\n");
    for choice in &outcome.choices {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            choice.outer_fold,
            spec_label(&choice.spec),
            fmt4(choice.inner_mean_acc),
            fmt4(outcome.report.per_round[choice.outer_fold])
        ));
    }
    out
}

pub fn nested_csv(outcome: &NestedCvOutcome) -> String {
    let mut out = String::from("outer_fold,chosen_config,inner_mean_acc,outer_acc\n");
    for choice in &outcome.choices {
        out.push_str(&format!(
            "{},{},{},{}\n",
            choice.outer_fold,
            spec_label(&choice.spec),
            choice.inner_mean_acc,
            outcome.report.per_round[choice.outer_fold]
        ));
    }
    out
}

pub fn rates_markdown(rows: &[RateRow]) -> String {
    let mut out = String::from(
        "| test | worlds | degenerate | rejections | rate | wilson 95% |\n|---|---|---|---|---|---|\n",
    );
    for row in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | [{}, {}] |\n",
            row.test.name(),
            row.worlds,
            row.degenerate,
            row.rejections,
            fmt4(row.rejection_rate),
            fmt4(row.wilson_lower),
            fmt4(row.wilson_upper)
        ));
    }
    out
}

pub fn rates_csv(rows: &[RateRow]) -> String {
    let mut out = String::from(
        "test,worlds,degenerate,rejections,rejection_rate,wilson_lower,wilson_upper\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.test.name(),
            row.worlds,
            row.degenerate,
            row.rejections,
            row.rejection_rate,
            row.wilson_lower,
            row.wilson_upper
        ));
    }
    out
}
