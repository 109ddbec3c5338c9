//! The `absinv` command line: `analyze` runs forward or backward synthesis
//! on a program file, `oracle` runs the randomized theorem checkers.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::affine_domain::AffDomain;
use crate::const_domain::ConstDomain;
use crate::finite_oracle::{run_suite, CheckReport, OracleError};
use crate::program_model::{parse_literal, parse_program, Literal, ParseError, Program};
use crate::synthesis::{
    ainv_forward, backward_gfp, render_state, AnalysisProblem, InvariantKind, ProgramDomain, SynthesisError,
    SynthesisResult,
};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "absinv", version, about = "Synthesize abstract inductive invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize an invariant for a program file.
    Analyze(AnalyzeArgs),
    /// Run a randomized suite of finite checkers.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Const,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub program: PathBuf,
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_enum)]
    pub alg: AlgorithmArg,
    /// Safety property at one node, `q: <literal>`; repeatable.
    #[arg(long = "prop", value_name = "NODE: LITERAL")]
    pub props: Vec<String>,
    /// Print every iterate.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("property '{spec}': {message}")]
    Property { spec: String, message: String },
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Serialize)]
struct NodeValue {
    node: String,
    value: String,
}

#[derive(Debug, Serialize)]
struct TraceEntry {
    step: usize,
    state: Vec<NodeValue>,
}

#[derive(Debug, Serialize)]
struct AnalysisReport {
    algorithm: &'static str,
    domain: &'static str,
    steps: usize,
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    invariant: Option<Vec<NodeValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterate: Option<Vec<NodeValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceEntry>>,
}

fn node_values<E: Display>(program: &Program, v: &[E]) -> Vec<NodeValue> {
    program
        .nodes
        .iter()
        .zip(v)
        .map(|(q, a)| NodeValue {
            node: q.clone(),
            value: a.to_string(),
        })
        .collect()
}

/// Parses `q: <literal>` against the program's nodes and sort.
pub fn parse_property(program: &Program, spec: &str) -> Result<(usize, Literal), CliError> {
    let err = |message: String| CliError::Property {
        spec: spec.to_string(),
        message,
    };
    let (node, lit) = spec
        .split_once(':')
        .ok_or_else(|| err("expected 'node: literal'".into()))?;
    let q = program
        .node_index(node.trim())
        .ok_or_else(|| err(format!("unknown node '{}'", node.trim())))?;
    let lit = parse_literal(lit, program.vars, program.sort).map_err(|e| err(e.to_string()))?;
    Ok((q, lit))
}

fn algorithm_name(alg: AlgorithmArg) -> &'static str {
    match alg {
        AlgorithmArg::Forward => "forward",
        AlgorithmArg::Backward => "backward",
    }
}

fn analyze_with<D: ProgramDomain>(
    program: Program,
    props: &[(usize, Literal)],
    args: &AnalyzeArgs,
    out: &mut dyn Write,
) -> Result<i32, CliError>
where
    D::Elem: Display,
{
    let problem = AnalysisProblem::<D>::new(program, props)?;
    let result = match args.alg {
        AlgorithmArg::Forward => ainv_forward(&problem)?,
        AlgorithmArg::Backward => backward_gfp(&problem)?,
    };
    let program = &problem.program;
    let code = if result.is_found() { EXIT_FOUND } else { EXIT_NOT_FOUND };
    match args.format {
        Format::Text => {
            if args.trace {
                for (k, v) in result.trace().iter().enumerate() {
                    writeln!(out, "{k}: {}", render_state(program, v))?;
                }
            }
            match &result {
                SynthesisResult::Found { invariant, kind, .. } => {
                    let kind = match kind {
                        InvariantKind::Least => "least",
                        InvariantKind::Greatest => "greatest",
                    };
                    writeln!(out, "found {kind} abstract inductive invariant after {} steps", result.steps())?;
                    for (q, a) in program.nodes.iter().zip(invariant) {
                        writeln!(out, "  {q}: {a}")?;
                    }
                }
                SynthesisResult::NotFound { iterate, step, reason, .. } => {
                    writeln!(out, "no abstract inductive invariant: {reason} at step {step}")?;
                    for (q, a) in program.nodes.iter().zip(iterate) {
                        writeln!(out, "  {q}: {a}")?;
                    }
                }
            }
        }
        Format::Json => {
            let trace = args.trace.then(|| {
                result
                    .trace()
                    .iter()
                    .enumerate()
                    .map(|(step, v)| TraceEntry {
                        step,
                        state: node_values(program, v),
                    })
                    .collect()
            });
            let report = match &result {
                SynthesisResult::Found { invariant, kind, .. } => AnalysisReport {
                    algorithm: algorithm_name(args.alg),
                    domain: D::NAME,
                    steps: result.steps(),
                    result: "found",
                    kind: Some(match kind {
                        InvariantKind::Least => "least",
                        InvariantKind::Greatest => "greatest",
                    }),
                    reason: None,
                    invariant: Some(node_values(program, invariant)),
                    iterate: None,
                    trace,
                },
                SynthesisResult::NotFound { iterate, reason, .. } => AnalysisReport {
                    algorithm: algorithm_name(args.alg),
                    domain: D::NAME,
                    steps: result.steps(),
                    result: "not_found",
                    kind: None,
                    reason: Some(reason.to_string()),
                    invariant: None,
                    iterate: Some(node_values(program, iterate)),
                    trace,
                },
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            writeln!(out, "{text}")?;
        }
    }
    Ok(code)
}

pub fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.domain == DomainArg::Affine && args.alg == AlgorithmArg::Backward {
        return Err(SynthesisError::Unsupported("affine").into());
    }
    let path = args.program.display().to_string();
    let src = std::fs::read_to_string(&args.program).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let program = parse_program(&src).map_err(|source| CliError::Parse { path, source })?;
    let props = args
        .props
        .iter()
        .map(|spec| parse_property(&program, spec))
        .collect::<Result<Vec<_>, _>>()?;
    match args.domain {
        DomainArg::Const => analyze_with::<ConstDomain>(program, &props, args, out),
        DomainArg::Affine => analyze_with::<AffDomain>(program, &props, args, out),
    }
}

pub fn run_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let reports: Vec<CheckReport> = run_suite(&args.suite, args.seed, args.trials)?;
    match args.format {
        Format::Text => {
            for r in &reports {
                let first = r.first_failure_seed.map_or_else(|| "none".to_string(), |s| s.to_string());
                writeln!(
                    out,
                    "{}: trials={} failures={} first_failure_seed={first}",
                    r.name, r.trials, r.failures
                )?;
            }
            let failures: u64 = reports.iter().map(|r| r.failures).sum();
            writeln!(out, "total: {} checks, {failures} failures", reports.len())?;
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
            writeln!(out, "{text}")?;
        }
    }
    Ok(if reports.iter().all(|r| r.failures == 0) {
        0
    } else {
        1
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => run_analyze(a, out),
        Command::Oracle(o) => run_oracle(o, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
