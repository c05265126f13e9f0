use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use srd_core::{ProblemKind, SolveStatus};

use crate::{load_instance, solve_instance, ExperimentRecord, Method, VnsArgs};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub methods: Vec<Method>,
    pub problems: Vec<ProblemKind>,
    /// VNS runs per instance and problem.
    pub runs: u64,
    pub vns: VnsArgs,
    pub time_limit: Duration,
}

/// Rows come in manifest order, then problem order, then method order, and
/// for VNS one row per seed. Failures become `error` rows.
pub fn run_suite(
    entries: &[String],
    base: Option<&Path>,
    config: &SuiteConfig,
) -> Vec<ExperimentRecord> {
    let mut records = Vec::new();
    for entry in entries {
        let instance = load_instance(entry, base);
        for &kind in &config.problems {
            for &method in &config.methods {
                let seeds: Vec<Option<u64>> = match method {
                    Method::Vns => (0..config.runs)
                        .map(|i| Some(config.vns.seed + i))
                        .collect(),
                    _ => vec![None],
                };
                for seed in seeds {
                    let mut record = match &instance {
                        Err(e) => ExperimentRecord::failed(
                            entry,
                            kind,
                            method.name(),
                            seed,
                            format!("{e:#}"),
                        ),
                        Ok(inst) => {
                            let params =
                                config
                                    .vns
                                    .params(kind, seed.unwrap_or(0), config.time_limit);
                            match solve_instance(
                                &inst.graph,
                                kind,
                                method,
                                &params,
                                config.time_limit,
                            ) {
                                Ok(r) => ExperimentRecord::from_result(
                                    &inst.name,
                                    kind,
                                    method.name(),
                                    seed,
                                    &r,
                                ),
                                Err(e) => ExperimentRecord::failed(
                                    &inst.name,
                                    kind,
                                    method.name(),
                                    seed,
                                    format!("{e:#}"),
                                ),
                            }
                        }
                    };
                    record.class = instance
                        .as_ref()
                        .map_or_else(|_| "error".to_string(), |i| i.class.clone());
                    records.push(record);
                }
            }
        }
    }
    records
}

/// Per class, problem and method: how often the method reached a proven
/// optimum (`opt`) and the best value any method found (`best`), plus the
/// average value and time. Repeated runs of one method on one instance
/// count once, with their best value and mean time.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub class: String,
    pub problem: String,
    pub method: String,
    pub instances: usize,
    pub opt: usize,
    pub best: usize,
    pub avg_value: Option<f64>,
    pub avg_time_ms: f64,
}

/// Proven optimum and best value found, per (instance, problem).
type Reference = (Option<i64>, Option<i64>);
/// Best value and run times of one method on one instance.
type Cell = (Option<i64>, Vec<f64>);

pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    // (instance, problem) -> (proven optimum, best value)
    let mut reference: BTreeMap<(&str, &str), Reference> = BTreeMap::new();
    // (class, problem, method, instance) -> (best value, times)
    let mut cells: BTreeMap<(&str, &str, &str, &str), Cell> = BTreeMap::new();
    for r in records {
        let entry = reference.entry((&r.instance, &r.problem)).or_default();
        if r.status == SolveStatus::Optimal.name() {
            entry.0 = r.value;
        }
        if let Some(v) = r.value {
            entry.1 = Some(entry.1.map_or(v, |b| b.min(v)));
        }
        let cell = cells
            .entry((&r.class, &r.problem, &r.method, &r.instance))
            .or_default();
        if let Some(v) = r.value {
            cell.0 = Some(cell.0.map_or(v, |b| b.min(v)));
        }
        cell.1.push(r.time_ms);
    }

    let mut groups: BTreeMap<_, Vec<(Option<i64>, f64, &str)>> = BTreeMap::new();
    for ((class, problem, method, instance), (value, times)) in cells {
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        groups
            .entry((class, problem, method))
            .or_default()
            .push((value, mean, instance));
    }
    groups
        .into_iter()
        .map(|((class, problem, method), cells)| {
            let hits = |pick: fn(&Reference) -> Option<i64>| {
                cells
                    .iter()
                    .filter(|(v, _, inst)| v.is_some() && *v == pick(&reference[&(*inst, problem)]))
                    .count()
            };
            let values: Vec<f64> = cells.iter().filter_map(|c| c.0).map(|v| v as f64).collect();
            SummaryRow {
                class: class.into(),
                problem: problem.into(),
                method: method.into(),
                instances: cells.len(),
                opt: hits(|r| r.0),
                best: hits(|r| r.1),
                avg_value: (!values.is_empty())
                    .then(|| values.iter().sum::<f64>() / values.len() as f64),
                avg_time_ms: cells.iter().map(|c| c.1).sum::<f64>() / cells.len() as f64,
            }
        })
        .collect()
}

pub fn write_summary(rows: &[SummaryRow], out: &mut dyn Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "class",
        "problem",
        "method",
        "instances",
        "#opt",
        "#best",
        "avg_value",
        "avg_time_ms",
    ])?;
    for r in rows {
        w.write_record([
            r.class.clone(),
            r.problem.clone(),
            r.method.clone(),
            r.instances.to_string(),
            r.opt.to_string(),
            r.best.to_string(),
            r.avg_value.map(|v| format!("{v:.3}")).unwrap_or_default(),
            format!("{:.3}", r.avg_time_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}
