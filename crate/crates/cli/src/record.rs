use std::io::Write;

use serde::Serialize;
use srd_core::{ProblemKind, SolveResult};

pub const CSV_HEADER: [&str; 8] = [
    "instance", "problem", "method", "seed", "status", "value", "time_ms", "counter",
];

/// One table row: a method run on an instance for one problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub instance: String,
    #[serde(skip)]
    pub class: String,
    pub problem: String,
    pub method: String,
    pub seed: Option<u64>,
    pub status: String,
    pub value: Option<i64>,
    pub time_ms: f64,
    pub counter: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn millis(r: &SolveResult) -> f64 {
    (r.elapsed.as_secs_f64() * 1e6).round() / 1e3
}

impl ExperimentRecord {
    pub fn from_result(
        instance: &str,
        kind: ProblemKind,
        method: &str,
        seed: Option<u64>,
        r: &SolveResult,
    ) -> Self {
        ExperimentRecord {
            instance: instance.to_string(),
            class: String::new(),
            problem: kind.name().to_string(),
            method: method.to_string(),
            seed,
            status: r.status.name().to_string(),
            value: r.best_value,
            time_ms: millis(r),
            counter: r.counter,
            error: None,
        }
    }

    pub fn failed(
        instance: &str,
        kind: ProblemKind,
        method: &str,
        seed: Option<u64>,
        error: String,
    ) -> Self {
        ExperimentRecord {
            instance: instance.to_string(),
            class: String::new(),
            problem: kind.name().to_string(),
            method: method.to_string(),
            seed,
            status: "error".to_string(),
            value: None,
            time_ms: 0.0,
            counter: 0,
            error: Some(error),
        }
    }

    /// Record for a model emission; `counter` is the number of constraints.
    pub fn emitted(instance: &str, kind: ProblemKind, method: &str, constraints: usize) -> Self {
        ExperimentRecord {
            instance: instance.to_string(),
            class: String::new(),
            problem: kind.name().to_string(),
            method: method.to_string(),
            seed: None,
            status: "emitted".to_string(),
            value: None,
            time_ms: 0.0,
            counter: constraints as u64,
            error: None,
        }
    }
}

pub fn write_csv(records: &[ExperimentRecord], out: &mut dyn Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.problem.clone(),
            r.method.clone(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.status.clone(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            format!("{:.3}", r.time_ms),
            r.counter.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
