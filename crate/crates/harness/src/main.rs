use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cstar_frames::AlgebraShape;
use cstar_harness::config::{self, TOLERANCE_ENV};
use cstar_harness::error::{HarnessError, Result};
use cstar_harness::generators::{self, GenParams, GeneratorKind, PerturbMode};
use cstar_harness::report::Report;
use cstar_harness::{crosscheck, scenario, suite};

#[derive(Parser)]
#[command(name = "cstar-check", version, about = "Certificate checks for multipliers of frames in Hilbert C*-modules")]
#[command(after_help = format!(
    "Tolerance overrides: set {TOLERANCE_ENV} to a JSON object, e.g. '{{\"residual\": 1e-9}}'.\n\
     Exit status: 0 all checks as expected, 1 VIOLATION or unexpected verdict, 2 input error."
))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        /// Trial count for every sweep in the scenario
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the seeded suite over every theorem
    Suite {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
        /// Base trial count per theorem
        #[arg(long, default_value_t = suite::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the scalar case against a direct Hilbert-space implementation
    Crosscheck {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate objects as a scenario fragment
    Gen {
        kind: GeneratorKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block dimensions, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = [1])]
        algebra: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        len: Option<usize>,
        /// `‖U - I‖` for symbols; fraction of the bound for perturbed sequences
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<PerturbMode>,
        #[arg(long)]
        max_condition: Option<f64>,
        #[arg(long)]
        standard_basis: bool,
        #[arg(long)]
        canonical: bool,
        /// Object name prefix in the fragment
        #[arg(long, default_value = "gen")]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> std::result::Result<PerturbMode, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown mode `{s}` (frame_perturbation | approximate_dual)"))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<ExitCode> {
    write_output(out, &report.to_json())?;
    let c = &report.summary.overall;
    eprintln!(
        "{}: {} checks, {} verified, {} hypothesis_not_met, {} VIOLATION, {} errors, {} unexpected",
        report.command, c.total, c.verified, c.hypothesis_not_met, c.violation, c.errors, c.unexpected
    );
    if let Some(x) = &report.crosscheck {
        eprintln!("crosscheck: {} instances, passed = {}", x.instances, x.passed);
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn kind(e: &HarnessError) -> &'static str {
    match e {
        HarnessError::Io { .. } => "io",
        HarnessError::Parse { .. } => "parse",
        HarnessError::UnresolvedReference { .. } => "unresolved_reference",
        HarnessError::MissingArgument { .. } => "missing_argument",
        HarnessError::InvalidObject { .. } => "invalid_object",
        HarnessError::InvalidGenerator(_) => "invalid_generator",
        HarnessError::Tolerance { .. } => "tolerance",
        HarnessError::Core(_) => "invalid_input",
    }
}

fn error_json(e: &HarnessError) -> serde_json::Value {
    let mut obj = serde_json::json!({ "error": kind(e), "message": e.to_string() });
    let extra = match e {
        HarnessError::Parse { line, column, field, .. } => {
            serde_json::json!({ "line": line, "column": column, "field": field })
        }
        HarnessError::UnresolvedReference { name, context } => serde_json::json!({ "name": name, "context": context }),
        HarnessError::MissingArgument { index, theorem, arg } => {
            serde_json::json!({ "check": index, "theorem": theorem, "argument": arg })
        }
        HarnessError::InvalidObject { name, .. } => serde_json::json!({ "name": name }),
        HarnessError::Io { path, .. } => serde_json::json!({ "path": path }),
        _ => serde_json::json!({}),
    };
    if let (Some(o), serde_json::Value::Object(x)) = (obj.as_object_mut(), extra) {
        o.extend(x);
    }
    obj
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { scenario: path, out, seed, trials } => {
            let sc = scenario::load(&path)?;
            let opts = scenario::RunOptions {
                seed,
                trials,
                label: Some(path.display().to_string()),
            };
            emit(&scenario::run(&sc, &opts)?, out.as_deref())
        }
        Command::Suite { seed, trials, out } => {
            let (tol, source) = config::tolerances_from_env()?;
            emit(&suite::run_suite(seed, trials, &tol, &source), out.as_deref())
        }
        Command::Crosscheck { seed, out } => {
            let (tol, source) = config::tolerances_from_env()?;
            emit(&crosscheck::crosscheck_report(seed, &tol, &source), out.as_deref())
        }
        Command::Gen {
            kind,
            seed,
            algebra,
            rank,
            len,
            target,
            mode,
            max_condition,
            standard_basis,
            canonical,
            name,
            out,
        } => {
            let shape = AlgebraShape::new(algebra)?;
            let params = GenParams {
                rank: Some(rank),
                len,
                target,
                mode,
                max_condition,
                standard_basis,
                canonical,
            };
            let parts = generators::generate(kind, &shape, rank, seed, &params)?;
            let fragment = scenario::fragment(&shape, rank, &name, &parts);
            let mut text = serde_json::to_string_pretty(&fragment).expect("fragment serializes");
            text.push('\n');
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(2)
        }
    }
}
