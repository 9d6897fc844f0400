//! `conelp` — feasibility and LP solving by extreme-ray enumeration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conelp_cli::bench;
use conelp_cli::commands::{cmd_feas, cmd_oracle, cmd_solve, SolveMode};
use conelp_cli::files::{FileError, ProblemFile, ResultFile};
use conelp_cli::gen::{generate, GenKind};

/// Exit code for malformed input (shapes, missing fields, unreadable files).
const EXIT_MALFORMED: u8 = 64;

#[derive(Parser)]
#[command(
    name = "conelp",
    version,
    about = "Feasibility and linear programming via extreme-ray enumeration",
    propagate_version = true
)]
struct Cli {
    /// Override the zero tolerance (other thresholds keep their defaults).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Full enumeration of the augmented contact polytope.
    Enum,
    /// Generator-at-a-time climb.
    Evo,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Feasible by construction.
    Feasible,
    /// Arbitrary bound (feasible or not).
    Unrestricted,
    /// Feasible with a bounded objective.
    Lp,
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility of `G x <= v`.
    Feas {
        /// Problem file (JSON).
        input: PathBuf,
        /// Also report all contact-polytope extreme points and a
        /// relative-interior point.
        #[arg(long)]
        all: bool,
    },
    /// Maximize `f·x` subject to `G x <= v`.
    Solve {
        /// Problem file (JSON); must carry an objective `f`.
        input: PathBuf,
        /// Solver driver.
        #[arg(long, value_enum, default_value = "evo")]
        mode: ModeArg,
        /// Also report the extreme points of the optimal face.
        #[arg(long)]
        all_solutions: bool,
        /// Embed the evolutive climb trace in the result.
        #[arg(long)]
        trace: bool,
    },
    /// Generate a strictly tangent random instance.
    Gen {
        /// Number of inequalities (at least 2).
        #[arg(long)]
        n: usize,
        /// Number of unknowns (1 <= m < n).
        #[arg(long)]
        m: usize,
        /// Instance family.
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Answer from the brute-force reference oracle (small instances).
    Oracle {
        /// Problem file (JSON).
        input: PathBuf,
    },
    /// Run every problem file in a directory through both drivers and the
    /// oracle, and report agreement and ray counts.
    Bench {
        /// Directory of problem files (*.json).
        suite: PathBuf,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), FileError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| FileError::Write { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_result(result: &ResultFile, output: Option<&PathBuf>) -> Result<u8, FileError> {
    emit(&result.render(), output)?;
    if let Some(message) = &result.message {
        eprintln!("conelp: {message}");
    }
    Ok(result.status.exit_code())
}

fn run(cli: Cli) -> Result<u8, FileError> {
    match cli.command {
        Command::Feas { input, all } => {
            let problem = ProblemFile::read(&input)?;
            let result = cmd_feas(&problem, all, cli.tol)?;
            emit_result(&result, cli.output.as_ref())
        }
        Command::Solve { input, mode, all_solutions, trace } => {
            let problem = ProblemFile::read(&input)?;
            let mode = match mode {
                ModeArg::Enum => SolveMode::Enum,
                ModeArg::Evo => SolveMode::Evo,
            };
            let result = cmd_solve(&problem, mode, all_solutions, trace, cli.tol)?;
            emit_result(&result, cli.output.as_ref())
        }
        Command::Gen { n, m, kind } => {
            let kind = match kind {
                KindArg::Feasible => GenKind::Feasible,
                KindArg::Unrestricted => GenKind::Unrestricted,
                KindArg::Lp => GenKind::Lp,
            };
            let problem = generate(cli.seed, n, m, kind)
                .map_err(|e| FileError::Invalid { field: "n/m".into(), message: e.to_string() })?;
            emit(&problem.render(), cli.output.as_ref())?;
            Ok(0)
        }
        Command::Oracle { input } => {
            let problem = ProblemFile::read(&input)?;
            let result = cmd_oracle(&problem, cli.tol)?;
            emit_result(&result, cli.output.as_ref())
        }
        Command::Bench { suite } => {
            let report = bench::run_suite(&suite, cli.tol)?;
            if let Some(path) = cli.output.as_ref() {
                report.write(path)?;
            }
            print!("{}", bench::human_table(&report));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("conelp: {e}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}
