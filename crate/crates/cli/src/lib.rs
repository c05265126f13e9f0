//! The `srd` command-line tool: solve, verify, emit models, generate
//! instances and run experiment suites.

mod record;
mod suite;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use srd_core::domination::{is_feasible, violations, weight, Violation};
use srd_core::exact::{branch_and_bound, brute_force, DEFAULT_BRUTE_FORCE_MAX_N};
use srd_core::graph::{example_graph, parse_edge_list, InstanceLabel};
use srd_core::model::{build_cp, build_ilp, emit_cp, emit_lp, emit_mps, Formulation};
use srd_core::vns::{
    run_vns, VnsParams, DEFAULT_IT_MAX, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_PROB,
};
use srd_core::{Assignment, Graph, ProblemKind, SolveResult, SolveStatus};

pub use record::ExperimentRecord;
pub use suite::{run_suite, summarize, SuiteConfig, SummaryRow};

#[derive(Debug, Parser)]
#[command(
    name = "srd",
    version,
    about = "Signed (total) Roman domination toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print the value and labeling.
    Solve(SolveArgs),
    /// Write an ILP or CP model of an instance.
    Emit(EmitArgs),
    /// Check a labeling against an instance.
    Verify(VerifyArgs),
    /// Write a generated instance as an edge list.
    Generate(GenerateArgs),
    /// Run methods over every instance of a manifest and print a CSV table.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Srdp,
    Strdp,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Srdp => ProblemKind::Srdp,
            Problem::Strdp => ProblemKind::Strdp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    ExactBb,
    Vns,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::ExactBb => "exact-bb",
            Method::Vns => "vns",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    Rr,
    Bvv,
    Cp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Lp,
    Mps,
    Cp,
}

/// Where the graph comes from: an edge-list file or a generator label.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct InstanceArgs {
    /// Edge-list file: `n m` header, then one `u v` pair per line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Generator label such as `grid-3x4`, `random-20-30@1` or `example`.
    #[arg(long)]
    pub instance: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VnsArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_IT_MAX)]
    pub itmax: u64,
    #[arg(long, default_value_t = DEFAULT_K_MIN)]
    pub kmin: usize,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    pub kmax: usize,
    #[arg(long, default_value_t = DEFAULT_PROB)]
    pub prob: f64,
}

impl VnsArgs {
    fn params(&self, kind: ProblemKind, seed: u64, time_limit: Duration) -> VnsParams {
        VnsParams {
            k_min: self.kmin,
            k_max: self.kmax,
            it_max: self.itmax,
            prob: self.prob,
            time_limit: Some(time_limit),
            ..VnsParams::new(kind, seed)
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long, value_enum, default_value = "exact-bb")]
    pub method: Method,
    #[command(flatten)]
    pub input: InstanceArgs,
    #[command(flatten)]
    pub vns: VnsArgs,
    /// Seconds per run.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    /// Also write the labeling to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print a JSON record instead of text.
    #[arg(long)]
    pub json: bool,
    /// Exit nonzero if the instance is infeasible.
    #[arg(long)]
    pub strict: bool,
    /// After a VNS run, prove optimality with branch and bound when it
    /// finishes within the time limit.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long, value_enum)]
    pub formulation: FormulationArg,
    /// Defaults to `lp` for ILP formulations and `cp` for the CP model.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub input: InstanceArgs,
    /// Emit the LP relaxation (continuous variables in [0, 1]).
    #[arg(long)]
    pub relaxed: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print a JSON record (to stdout) and require `--out` for the model.
    #[arg(long, requires = "out")]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[command(flatten)]
    pub input: InstanceArgs,
    /// File with one label per vertex, separated by whitespace.
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator label such as `bipartite-20x30-10@4`.
    #[arg(long)]
    pub instance: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// One edge-list path or generator label per line; `#` starts a comment.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["exact-bb", "vns"])]
    pub methods: Vec<Method>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["srdp", "strdp"])]
    pub problems: Vec<Problem>,
    /// VNS runs per instance, with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 10)]
    pub runs: u64,
    #[command(flatten)]
    pub vns: VnsArgs,
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    /// Write the CSV table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append per class summary rows (#opt, #best, avg value, avg time) to
    /// stdout after the table.
    #[arg(long)]
    pub summary: bool,
    /// Print records as JSON lines instead of CSV.
    #[arg(long)]
    pub json: bool,
}

/// A graph with the name it is reported under.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub class: String,
    pub graph: Graph,
}

/// Resolves a manifest entry or `--instance` value: `example`, a generator
/// label, or a path to an edge-list file (relative to `base`).
pub fn load_instance(entry: &str, base: Option<&Path>) -> Result<Instance> {
    if entry == "example" {
        return Ok(Instance {
            name: "example".into(),
            class: "example".into(),
            graph: example_graph(),
        });
    }
    if let Ok(label) = entry.parse::<InstanceLabel>() {
        let graph = label
            .generate()
            .with_context(|| format!("cannot generate `{entry}`"))?;
        return Ok(Instance {
            name: label.to_string(),
            class: label.class.name().into(),
            graph,
        });
    }
    let path = match base {
        Some(b) if Path::new(entry).is_relative() => b.join(entry),
        _ => PathBuf::from(entry),
    };
    load_file(&path)
}

fn load_file(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let graph = parse_edge_list(&text).with_context(|| format!("in {}", path.display()))?;
    let name = path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok(Instance {
        name,
        class: "file".into(),
        graph,
    })
}

fn resolve_input(input: &InstanceArgs) -> Result<Instance> {
    match (&input.graph, &input.instance) {
        (Some(path), _) => load_file(path),
        (None, Some(label)) => load_instance(label, None),
        (None, None) => bail!("one of --graph or --instance is required"),
    }
}

fn time_limit(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs)
        .map_err(|_| anyhow::anyhow!("--time-limit must be a non-negative number"))
}

/// Runs one method. Any labeling in the result is re-checked here, so a
/// solver bug surfaces as an error instead of a wrong table entry.
pub fn solve_instance(
    g: &Graph,
    kind: ProblemKind,
    method: Method,
    params: &VnsParams,
    limit: Duration,
) -> Result<SolveResult> {
    let result = match method {
        Method::Brute => brute_force(g, kind, DEFAULT_BRUTE_FORCE_MAX_N)?,
        Method::ExactBb => branch_and_bound(g, kind, limit),
        Method::Vns => run_vns(g, params)?,
    };
    if let Some(z) = &result.best_assignment {
        if !is_feasible(g, z, kind) || result.best_value != Some(weight(z)) {
            bail!("{} returned a labeling that does not verify", method.name());
        }
    }
    Ok(result)
}

fn describe(v: &Violation) -> String {
    match v {
        Violation::Guard { vertex } => format!("vertex {vertex} is -1 with no neighbor labeled 2"),
        Violation::Sum { vertex, sum } => format!("neighborhood sum of vertex {vertex} is {sum}"),
    }
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = resolve_input(&a.input)?;
    let kind = ProblemKind::from(a.problem);
    let limit = time_limit(a.time_limit)?;
    let params = a.vns.params(kind, a.vns.seed, limit);
    let mut result = solve_instance(&inst.graph, kind, a.method, &params, limit)?;
    if a.certify && a.method == Method::Vns && result.status == SolveStatus::Feasible {
        let proof = branch_and_bound(&inst.graph, kind, limit);
        if proof.status == SolveStatus::Optimal && proof.best_value == result.best_value {
            result.status = SolveStatus::Optimal;
        }
    }
    let seed = (a.method == Method::Vns).then_some(a.vns.seed);
    let record = ExperimentRecord::from_result(&inst.name, kind, a.method.name(), seed, &result);

    if let (Some(path), Some(z)) = (&a.out, &result.best_assignment) {
        fs::write(path, format!("{z}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if a.json {
        let mut value = serde_json::to_value(&record)?;
        value["assignment"] = result
            .best_assignment
            .as_ref()
            .map(|z| z.to_string())
            .into();
        writeln!(out, "{value}")?;
    } else {
        writeln!(out, "status {}", result.status.name())?;
        if let (Some(v), Some(z)) = (result.best_value, &result.best_assignment) {
            writeln!(out, "value {v}")?;
            writeln!(out, "assignment {z}")?;
        }
        writeln!(out, "time_ms {}", record.time_ms)?;
    }
    Ok(if a.strict && result.status == SolveStatus::Infeasible {
        3
    } else {
        0
    })
}

fn cmd_emit(a: &EmitArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = resolve_input(&a.input)?;
    let kind = ProblemKind::from(a.problem);
    let format = a.format.unwrap_or(match a.formulation {
        FormulationArg::Cp => Format::Cp,
        _ => Format::Lp,
    });
    let (text, rows, method) = match (a.formulation, format) {
        (FormulationArg::Cp, Format::Cp) => {
            if a.relaxed {
                bail!("--relaxed applies to ILP formulations only");
            }
            let m = build_cp(&inst.graph, kind);
            (emit_cp(&m), m.guards.len() + m.sums.len(), "emit-cp")
        }
        (FormulationArg::Cp, _) | (_, Format::Cp) => {
            bail!("the cp format goes with the cp formulation only")
        }
        (f, fmt) => {
            let (formulation, method) = match f {
                FormulationArg::Rr => (Formulation::Rr, "emit-rr"),
                _ => (Formulation::Bvv, "emit-bvv"),
            };
            let mut m = build_ilp(&inst.graph, formulation, kind);
            if a.relaxed {
                m = m.relaxed();
            }
            let text = if fmt == Format::Mps {
                emit_mps(&m)
            } else {
                emit_lp(&m)
            };
            (text, m.constraints.len(), method)
        }
    };
    match &a.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    if a.json {
        let record = ExperimentRecord::emitted(&inst.name, kind, method, rows);
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = resolve_input(&a.input)?;
    let kind = ProblemKind::from(a.problem);
    let text = fs::read_to_string(&a.solution)
        .with_context(|| format!("cannot read {}", a.solution.display()))?;
    let z = Assignment::parse(&text)?;
    z.check_len(&inst.graph)?;
    let found = violations(&inst.graph, &z, kind);
    if found.is_empty() {
        writeln!(out, "feasible, weight {}", weight(&z))?;
        Ok(0)
    } else {
        writeln!(
            out,
            "infeasible, weight {}, {} violation(s)",
            weight(&z),
            found.len()
        )?;
        for v in &found {
            writeln!(out, "  {}", describe(v))?;
        }
        Ok(1)
    }
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance, None)?;
    let text = inst.graph.to_edge_list();
    match &a.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_suite(a: &SuiteArgs, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&a.manifest)
        .with_context(|| format!("cannot read {}", a.manifest.display()))?;
    let entries: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    let config = SuiteConfig {
        methods: a.methods.clone(),
        problems: a.problems.iter().map(|&p| p.into()).collect(),
        runs: a.runs,
        vns: a.vns.clone(),
        time_limit: time_limit(a.time_limit)?,
    };
    let base = a.manifest.parent().map(Path::to_path_buf);
    let records = run_suite(&entries, base.as_deref(), &config);

    let mut table = Vec::new();
    if a.json {
        for r in &records {
            writeln!(table, "{}", serde_json::to_string(r)?)?;
        }
    } else {
        record::write_csv(&records, &mut table)?;
    }
    match &a.out {
        Some(path) => {
            fs::write(path, &table).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(&table)?,
    }
    if a.summary {
        suite::write_summary(&summarize(&records), out)?;
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code: 0 on success, 1 on errors or a failed
/// verification, 2 on usage errors, 3 for an infeasible instance under
/// `solve --strict`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Emit(a) => cmd_emit(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Generate(a) => cmd_generate(a, out),
        Command::Suite(a) => cmd_suite(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
