//! `frir`: optimal discrimination of two qubit states at a fixed rate of
//! inconclusive results.
//!
//! Exit codes: 0 success, 2 input or argument error, 3 verification failure,
//! 4 numeric or regime error.

mod check;
mod csv;
mod error;
mod input;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qubit_frir::solver::{solve_frir_with, sweep, sweep_failure_rate, Grid};
use qubit_frir::{derive, Tolerances, TwoStateEnsemble};

use crate::check::GridOptions;
use crate::error::{CliError, CliResult};
use crate::report::{Analysis, SolutionReport};

#[derive(Parser)]
#[command(name = "frir", version, about = "Optimal two-state qubit discrimination at a fixed failure rate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Confidences, special degrees and boundary regimes of an ensemble.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Optimal measurement at one failure rate.
    Solve {
        file: PathBuf,
        #[arg(long = "Q", value_name = "RATE")]
        q: f64,
        /// Member of the optimal family when the optimum is not unique.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate the optimum over a grid, as CSV.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        grid: SweepGrid,
        /// Output path; `-` writes to standard output.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check solutions against independent certificates and oracles.
    Verify {
        file: PathBuf,
        #[arg(long = "Q-grid", value_name = "N", default_value_t = 10)]
        q_grid: usize,
        #[arg(long, default_value_t = 2000)]
        directions: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Re-check the measurement stored in a `solve --json` document
        /// instead of running the grid.
        #[arg(long, value_name = "SOLUTION")]
        povm: Option<PathBuf>,
    },
    /// Analyze and tabulate the built-in demonstration ensemble.
    Demo,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SweepGrid {
    /// Number of inconclusive degrees strictly between the special degrees.
    #[arg(long = "q-grid", value_name = "N")]
    degree: Option<usize>,
    /// Number of failure rates `k/N`, `k = 0..N`.
    #[arg(long = "Q-grid", value_name = "N")]
    rate: Option<usize>,
}

/// Reference values for the demonstration ensemble, to four decimals.
const DEMO_REFERENCE: [(&str, f64); 7] = [
    ("|rho12|", 0.3075),
    ("C1", 0.8361),
    ("C2", 0.9657),
    ("chi", 0.6940),
    ("Q1", 0.6635),
    ("transition q", 0.7902),
    ("transition Q", 0.5805),
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn stdout_error(source: io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source }
}

fn run(command: Command, out: &mut impl Write) -> CliResult<()> {
    match command {
        Command::Analyze { file, json } => {
            let ens = input::load_ensemble(&file)?;
            let analysis = Analysis::new(&derive(&ens)?);
            if json {
                print_json(out, &analysis)
            } else {
                write!(out, "{analysis}").map_err(stdout_error)
            }
        }
        Command::Solve { file, q, epsilon, json } => {
            let ens = input::load_ensemble(&file)?;
            let report = SolutionReport::from(&solve_frir_with(&ens, q, epsilon, Tolerances::default())?);
            if json {
                print_json(out, &report)
            } else {
                write!(out, "{report}").map_err(stdout_error)
            }
        }
        Command::Sweep { file, grid, out: path } => {
            let ens = input::load_ensemble(&file)?;
            let grid = match (grid.degree, grid.rate) {
                (Some(n), _) => Grid::Degree(n),
                (None, Some(n)) => Grid::FailureRate(n),
                (None, None) => unreachable!("clap requires one grid"),
            };
            let table = sweep(&ens, grid)?;
            write_csv(&path, &table, out)
        }
        Command::Verify { file, q_grid, directions, samples, seed, povm } => {
            let ens = input::load_ensemble(&file)?;
            match povm {
                Some(path) => {
                    let (reported, povm) = input::load_solution(&path)?;
                    check::verify_povm(&ens, &reported, &povm, samples, seed, out)
                }
                None => check::verify_grid(&ens, &GridOptions { points: q_grid, directions, samples, seed }, out),
            }
        }
        Command::Demo => demo(out),
    }
}

fn print_json(out: &mut impl Write, value: &impl serde::Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}").map_err(stdout_error)
}

fn write_csv(path: &Path, table: &qubit_frir::solver::SweepTable, stdout: &mut impl Write) -> CliResult<()> {
    if path == Path::new("-") {
        return csv::write_table(stdout, table).map_err(stdout_error);
    }
    let io_error = |source| CliError::Io { path: path.display().to_string(), source };
    let mut w = BufWriter::new(File::create(path).map_err(io_error)?);
    csv::write_table(&mut w, table).map_err(io_error)
}

fn demo(out: &mut impl Write) -> CliResult<()> {
    let ens = TwoStateEnsemble::demo();
    let d = derive(&ens)?;
    let a = Analysis::new(&d);
    let (v1, v2) = ens.bloch_vectors();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_error);
    let vec_text = |v: qubit_frir::BlochVector| format!("({:.4}, {:.4}, {:.4})", v.x, v.y, v.z);
    w(out, format!("q1 = {:.4}, v1 = {}", ens.q1, vec_text(v1)))?;
    w(out, format!("q2 = {:.4}, v2 = {}", ens.q2, vec_text(v2)))?;
    w(out, String::new())?;
    write!(out, "{a}").map_err(stdout_error)?;
    w(out, String::new())?;

    let [tq, tp] = a.transition.unwrap_or([f64::NAN; 2]);
    let computed = [a.abs_rho12, a.c1, a.c2, a.chi.unwrap_or(f64::NAN), a.upper.interval[0], tq, tp];
    w(out, format!("{:<14} {:>10} {:>10}", "quantity", "computed", "reference"))?;
    for ((name, reference), value) in DEMO_REFERENCE.iter().zip(computed) {
        w(out, format!("{name:<14} {value:>10.6} {reference:>10.4}"))?;
    }
    w(out, String::new())?;

    w(out, format!("{:>6} {:>12} {:>12}  regime", "Q", "R_cor", "P_cor"))?;
    for row in sweep_failure_rate(&d, 10)? {
        w(out, format!("{:>6.2} {:>12.8} {:>12.8}  {}", row.failure_rate, row.r_cor, row.p_cor, row.regime))?;
    }
    Ok(())
}
