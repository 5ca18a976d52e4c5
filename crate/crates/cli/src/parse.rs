//! Parsers for the compact command-line spec syntaxes: learners, grid
//! axes, data generators, size lists, and test lists.

use modeval::selection::{GridAxis, SimplerEnd};
use modeval::simulate::{DataGenerator, SimTest};
use modeval::types::LearnerSpec;

use crate::error::{CliError, CliResult};

/// `name` or `name:key=value,key=value`, e.g. `knn:k_neighbors=3`.
pub fn parse_learner(spec: &str) -> CliResult<LearnerSpec> {
    let (name, params) = match spec.split_once(':') {
        None => (spec, ""),
        Some((name, params)) => (name, params),
    };
    if name.is_empty() {
        return Err(CliError::Usage(format!("empty learner name in {spec:?}")));
    }
    let mut learner = LearnerSpec::new(name);
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("expected key=value in learner spec, got {pair:?}"))
        })?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("non-numeric value in {pair:?}")))?;
        learner = learner.with(key, value);
    }
    Ok(learner)
}

/// `a,b,c` or inclusive `start:end:step`.
pub fn parse_values(text: &str) -> CliResult<Vec<f64>> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "range syntax is start:end:step, got {text:?}"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range start {:?}", parts[0])))?;
        let end: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range end {:?}", parts[1])))?;
        let step: f64 = parts[2]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range step {:?}", parts[2])))?;
        if step <= 0.0 || end < start {
            return Err(CliError::Usage(format!(
                "range {text:?} must have positive step and end >= start"
            )));
        }
        let mut values = Vec::new();
        let mut v = start;
        while v <= end + 1e-9 {
            values.push(v);
            v += step;
        }
        Ok(values)
    } else {
        text.split(',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("non-numeric value {t:?}")))
            })
            .collect()
    }
}

/// Grid axis: `name=values@simpler-end` where the simpler end is `larger`
/// or `smaller`, e.g. `k_neighbors=1:51:2@larger`.
pub fn parse_axis(text: &str) -> CliResult<GridAxis> {
    let (body, simpler) = text.rsplit_once('@').ok_or_else(|| {
        CliError::Usage(format!(
            "axis {text:?} must declare its simpler end as @larger or @smaller"
        ))
    })?;
    let simpler = match simpler {
        "larger" => SimplerEnd::Larger,
        "smaller" => SimplerEnd::Smaller,
        other => {
            return Err(CliError::Usage(format!(
                "simpler end must be larger or smaller, got {other:?}"
            )))
        }
    };
    let (name, values) = body
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("axis {text:?} must look like name=values")))?;
    let values = parse_values(values)?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("axis {text:?} has no values")));
    }
    Ok(GridAxis {
        name: name.to_string(),
        values,
        simpler,
    })
}

fn parse_kv_params(params: &str, context: &str) -> CliResult<Vec<(String, f64)>> {
    params
        .split(',')
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("expected key=value in {context}, got {pair:?}"))
            })?;
            let value: f64 = value
                .parse()
                .map_err(|_| CliError::Usage(format!("non-numeric value in {pair:?}")))?;
            Ok((key.to_string(), value))
        })
        .collect()
}

/// `iris`, `circles:n=300,noise=0.1`, or
/// `blobs:n_per_class=50,classes=2,dims=2,spread=1.0`.
pub fn parse_generator(text: &str) -> CliResult<DataGenerator> {
    let (kind, params) = match text.split_once(':') {
        None => (text, ""),
        Some((kind, params)) => (kind, params),
    };
    let params = parse_kv_params(params, "generator spec")?;
    let get = |key: &str, default: f64| {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map_or(default, |(_, v)| *v)
    };
    let known = |allowed: &[&str]| -> CliResult<()> {
        for (key, _) in &params {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown generator parameter {key:?} for {kind:?}"
                )));
            }
        }
        Ok(())
    };
    match kind {
        "iris" => {
            known(&[])?;
            Ok(DataGenerator::Iris)
        }
        "circles" => {
            known(&["n", "noise"])?;
            Ok(DataGenerator::Circles {
                n: get("n", 300.0) as usize,
                noise: get("noise", 0.1),
            })
        }
        "blobs" => {
            known(&["n_per_class", "classes", "dims", "spread"])?;
            Ok(DataGenerator::Blobs {
                n_per_class: get("n_per_class", 50.0) as usize,
                classes: get("classes", 2.0) as usize,
                dims: get("dims", 2.0) as usize,
                spread: get("spread", 1.0),
            })
        }
        other => Err(CliError::Usage(format!("unknown generator {other:?}"))),
    }
}

/// Comma-separated integer sizes, or inclusive `start:end:step`.
pub fn parse_sizes(text: &str) -> CliResult<Vec<usize>> {
    Ok(parse_values(text)?
        .into_iter()
        .map(|v| v as usize)
        .collect())
}

/// `train,val,test` fractions.
pub fn parse_fractions(text: &str) -> CliResult<(f64, f64, f64)> {
    let parts = parse_values(text)?;
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "expected three fractions train,val,test, got {text:?}"
        )));
    }
    Ok((parts[0], parts[1], parts[2]))
}

/// Comma-separated simulation test names.
pub fn parse_tests(text: &str) -> CliResult<Vec<SimTest>> {
    text.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "resampled-t" => Ok(SimTest::ResampledT),
            "kfold-t" => Ok(SimTest::KfoldT),
            "5x2t" => Ok(SimTest::FiveByTwoT),
            "5x2f" => Ok(SimTest::FiveByTwoF),
            "mcnemar" => Ok(SimTest::McNemar),
            "mcnemar-exact" => Ok(SimTest::McNemarExact),
            "z-prop" => Ok(SimTest::ZProp),
            other => Err(CliError::Usage(format!("unknown test {other:?}"))),
        })
        .collect()
}
