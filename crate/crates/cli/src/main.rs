use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use ehrhart::io::{
    decomposition_to_json, parse_polytope, quasi_from_json, quasi_to_json, steps_to_json,
};
use ehrhart::verify::{
    merge_reports, random_cases, run_suites, Case, Prepared, Suite, SuiteReport, VerifyConfig,
};
use ehrhart::{
    determined_sets, polytope_quasi, Error, Kind, Rational, RationalPolytope, DEFAULT_BUDGET,
};
use rayon::prelude::*;

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact real Ehrhart quasi-polynomials of rational polytopes.
#[derive(Parser, Debug)]
#[command(name = "ehrhart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximum number of candidate points in any enumeration box.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Worker threads for per-cell and per-case work.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the quasi-polynomial of a polytope as JSON.
    Compute(ComputeArgs),
    /// Evaluate the quasi-polynomial at one rational t.
    Eval(EvalArgs),
    /// Print the determined-set step function of a simplex as JSON.
    Determined(ComputeArgs),
    /// Print the triangulation as vertex indices with boundary flags.
    Decompose(InputArgs),
    /// Run verification suites on a polytope file or on random cases.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Polytope file: {"name": ..., "vertices": [["1/2", ...], ...]}.
    #[arg(long)]
    input: PathBuf,

    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    io: InputArgs,

    #[arg(long, default_value = "closed")]
    kind: Kind,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    compute: ComputeArgs,

    /// Dilation factor, any rational such as -7/3.
    #[arg(short = 't', allow_hyphen_values = true)]
    t: Rational,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Polytope file; random cases are generated when omitted.
    #[arg(long)]
    input: Option<PathBuf>,

    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    reciprocity: bool,
    #[arg(long)]
    derivative: bool,
    #[arg(long)]
    period: bool,
    #[arg(long)]
    volume: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of random cases.
    #[arg(long, default_value_t = 10)]
    cases: usize,

    /// Dilation samples per case for the oracle and reciprocity suites.
    #[arg(long, default_value_t = 8)]
    t_samples: usize,

    /// Quasi-polynomial JSON to compare against the one computed from
    /// --input (its kind is taken from the file).
    #[arg(long, requires = "input")]
    compare: Option<PathBuf>,
}

enum Failure {
    Verify(String),
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        match e.downcast_ref::<Error>() {
            Some(inner) => Failure::from(inner.clone()),
            None => Failure::Input(format!("{e:#}")),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_polytope(path: &Path) -> anyhow::Result<(String, RationalPolytope)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_polytope(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn cmd_compute(args: &ComputeArgs, budget: u64) -> Outcome {
    let (_, p) = read_polytope(&args.io.input)?;
    let q = polytope_quasi(&p, args.kind, budget)?;
    emit(args.io.out.as_deref(), &quasi_to_json(&q))?;
    Ok(())
}

fn cmd_eval(args: &EvalArgs, budget: u64) -> Outcome {
    let (_, p) = read_polytope(&args.compute.io.input)?;
    let q = polytope_quasi(&p, args.compute.kind, budget)?;
    emit(args.compute.io.out.as_deref(), &q.eval(&args.t).to_string())?;
    Ok(())
}

fn cmd_determined(args: &ComputeArgs, budget: u64) -> Outcome {
    let (_, p) = read_polytope(&args.io.input)?;
    let simplex = p
        .as_simplex()
        .ok_or_else(|| Failure::Input("determined sets defined per simplex".into()))?;
    let steps = determined_sets(&simplex, args.kind, budget)?;
    emit(args.io.out.as_deref(), &steps_to_json(&steps))?;
    Ok(())
}

fn cmd_decompose(args: &InputArgs) -> Outcome {
    let (_, p) = read_polytope(&args.input)?;
    emit(
        args.out.as_deref(),
        &decomposition_to_json(&p, &p.triangulate()),
    )?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, budget: u64) -> Outcome {
    let mut suites: Vec<Suite> = [
        (args.oracle, Suite::Oracle),
        (args.reciprocity, Suite::Reciprocity),
        (args.derivative, Suite::Derivative),
        (args.period, Suite::Period),
        (args.volume, Suite::Volume),
    ]
    .iter()
    .filter_map(|&(on, s)| on.then_some(s))
    .collect();
    if suites.is_empty() && args.compare.is_none() {
        suites = Suite::ALL.to_vec();
    }
    let config = VerifyConfig {
        budget,
        t_samples: args.t_samples,
        seed: args.seed,
    };
    let cases = match &args.input {
        Some(path) => {
            let (name, polytope) = read_polytope(path)?;
            let name = if name.is_empty() {
                path.display().to_string()
            } else {
                name
            };
            vec![Case { name, polytope }]
        }
        None => random_cases(args.seed, args.cases, 3, 5, 3, 4)?,
    };
    let mut failed = None;
    if let Some(pieces) = &args.compare {
        let text = fs::read_to_string(pieces)
            .with_context(|| format!("cannot read {}", pieces.display()))?;
        let expected = quasi_from_json(&text)
            .map_err(|e| Failure::Input(format!("{}: {e}", pieces.display())))?;
        let computed = polytope_quasi(&cases[0].polytope, expected.kind(), budget)?;
        let same = computed.same_function(&expected)?;
        println!("compare: {}", if same { "PASS" } else { "FAIL" });
        if !same {
            failed = Some(format!(
                "{} differs from the {} quasi-polynomial of {}",
                pieces.display(),
                expected.kind(),
                cases[0]
            ));
        }
    }
    if !suites.is_empty() {
        let per_case: Vec<Vec<SuiteReport>> = cases
            .into_par_iter()
            .map(|case| Prepared::new(case, budget).map(|prep| run_suites(&prep, &suites, &config)))
            .collect::<Result<_, _>>()?;
        for report in merge_reports(&suites, &per_case) {
            println!("{report}");
            if failed.is_none() {
                failed.clone_from(&report.first_failure);
            }
        }
    }
    match failed {
        Some(counterexample) => Err(Failure::Verify(format!(
            "first counterexample: {counterexample}"
        ))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::Compute(a) => cmd_compute(a, cli.budget),
        Command::Eval(a) => cmd_eval(a, cli.budget),
        Command::Determined(a) => cmd_determined(a, cli.budget),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a, cli.budget),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
