use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tamecheck_core::corpus::{self, CORPUS};
use tamecheck_core::exec::ExecMode;
use tamecheck_core::parse::{parse_problem_file, DeformationProblem};
use tamecheck_core::report::{
    analyze, parse_json, render_json, render_text, verify_report, AnalysisOptions, Check,
};
use tamecheck_core::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tamecheck",
    version,
    about = "Tameness analysis of one-parameter polynomial deformations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a problem file (or the name of a built-in example).
    Analyze(AnalyzeArgs),
    /// Re-check every certificate and witness in a JSON report.
    Verify { report: PathBuf },
    /// List the built-in examples.
    Examples {
        /// Print the problem file of one example.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Checks to run: all, cond0, cond, cond2, jacobian, tame. Repeatable or comma separated.
    #[arg(long = "check", value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    #[arg(long, value_name = "M")]
    max_power: Option<u32>,
    #[arg(long, value_name = "W")]
    max_weight: Option<u32>,
    #[arg(long, value_name = "K")]
    max_arc_terms: Option<u32>,
    /// Demote with-caveat verdicts to UNDETERMINED.
    #[arg(long)]
    strict: bool,
    /// Write the JSON report here ("-" for standard output instead of the text report).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    budget_pairs: Option<usize>,
    #[arg(long, value_name = "D")]
    budget_degree: Option<u32>,
    #[arg(long, value_name = "N")]
    budget_work: Option<usize>,
    /// Run the arc searches on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Input(String),
    Inconsistent(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<DeformationProblem, Failure> {
    if !path.exists() {
        if let Some(entry) = path.to_str().and_then(corpus::find) {
            return Ok(entry.problem()?);
        }
    }
    Ok(parse_problem_file(&read(path)?)?)
}

fn parse_checks(names: &[String]) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for name in names {
        let name = name.trim();
        if name == "all" {
            return Ok(Check::ALL.to_vec());
        }
        let c: Check = name
            .parse()
            .map_err(|e: Error| Failure::Input(e.to_string()))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Defaults, then the option lines of the problem file, then command-line flags.
fn options(args: &AnalyzeArgs, problem: &DeformationProblem) -> Result<AnalysisOptions, Failure> {
    let mut o = AnalysisOptions::default();
    o.apply(&problem.overrides);
    o.checks = parse_checks(&args.checks)?;
    o.strict = args.strict;
    if args.sequential {
        o.mode = ExecMode::Sequential;
    }
    if let Some(v) = args.max_power {
        o.max_power = v;
    }
    if let Some(v) = args.max_weight {
        o.max_weight = v;
    }
    if let Some(v) = args.max_arc_terms {
        o.max_arc_terms = v;
    }
    if let Some(v) = args.budget_pairs {
        o.budget.max_pairs = v;
    }
    if let Some(v) = args.budget_degree {
        o.budget.max_degree = v;
    }
    if let Some(v) = args.budget_work {
        o.budget.max_work = v;
    }
    o.validate()?;
    Ok(o)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.file)?;
    let opts = options(args, &problem)?;
    let report = analyze(&problem, &opts)?;
    match &args.json {
        Some(out) if out.as_os_str() == "-" => print!("{}", render_json(&report)),
        Some(out) => {
            fs::write(out, render_json(&report))
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", out.display())))?;
            print!("{}", render_text(&report));
        }
        None => print!("{}", render_text(&report)),
    }
    Ok(())
}

fn run_verify(path: &Path) -> Result<(), Failure> {
    let report = parse_json(&read(path)?)?;
    let summary = verify_report(&report);
    if !summary.ok() {
        return Err(Failure::Verify(summary.failures.join("\n")));
    }
    println!("ok: {} evidence items re-checked", summary.evidence_checked);
    Ok(())
}

fn run_examples(show: Option<&str>) -> Result<(), Failure> {
    if let Some(name) = show {
        let entry = corpus::find(name)
            .ok_or_else(|| Failure::Input(format!("no example named `{name}`")))?;
        print!("{}", entry.text);
        return Ok(());
    }
    for e in &CORPUS {
        println!("{:<6} {}", e.name, e.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Verify { report } => run_verify(report),
        Command::Examples { show } => run_examples(show.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Inconsistent(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed:\n{m}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
