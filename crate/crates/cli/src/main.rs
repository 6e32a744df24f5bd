// SPDX-License-Identifier: MIT OR Apache-2.0

//! `segfit`: exact continuous piecewise-linear fits from the command line.

mod ingest;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use segfit::oracle::{brute_force_costs, brute_force_penalized};
use segfit::{
    instrumentation_report, solve_constrained_costs, solve_regularized_costs, Penalty, SignalKind, SolverOptions,
    StageTable, TransitionCosts,
};

use report::{Row, Stats};

const EXIT_CODES: &str = "\
Exit codes:
  0   success
  2   usage error (bad flags or flag combination)
  3   input could not be read or is not a valid signal
  4   infeasible segment budget (need 1 <= M <= N)
  5   invalid penalty (need a finite zeta >= 0)
  6   --oracle refused: exhaustive search too large
  70  internal error
  74  output could not be written";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Ingest(String),
    #[error(transparent)]
    Solver(#[from] segfit::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        use segfit::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Ingest(_) => 3,
            CliError::Solver(E::InvalidSignal(_)) => 3,
            CliError::Solver(E::InfeasibleBudget { .. }) => 4,
            CliError::Solver(E::InvalidPenalty(_)) => 5,
            CliError::Solver(E::SearchTooLarge { .. }) => 6,
            CliError::Solver(_) => 70,
            CliError::Output(_) => 74,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Best fit with M segments; --emit-all-m adds every smaller budget.
    Constrained,
    /// Squared error plus zeta per segment.
    Regularized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// One value per line, sampled at t = 0, 1, 2, ...
    Discrete,
    /// `t,g` rows of a piecewise-linear signal, header optional.
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Exact least-squares continuous piecewise-linear approximation with a
/// budgeted or penalized number of segments.
#[derive(Debug, Parser)]
#[command(name = "segfit", version, after_help = EXIT_CODES)]
struct Cli {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Segment budget M (constrained mode).
    #[arg(long, value_name = "M")]
    segments: Option<usize>,
    /// Cost per segment (regularized mode).
    #[arg(long, value_name = "Z", allow_negative_numbers = true)]
    zeta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Kind::Discrete)]
    kind: Kind,
    /// Signal file (CSV).
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Report every m = 1..=M, not only M (constrained mode).
    #[arg(long)]
    emit_all_m: bool,
    /// Append per-index envelope lengths and R; dump the final envelope to stderr.
    #[arg(long)]
    stats: bool,
    /// Solve by exhaustive enumeration instead (small inputs only).
    #[arg(long)]
    oracle: bool,
    /// Worker threads for the constrained solver.
    #[arg(long, value_name = "K", default_value_t = 1)]
    threads: usize,
}

struct Outcome {
    rows: Vec<Row>,
    stats: Option<Stats>,
}

fn row(fit: &segfit::FitResult) -> Row {
    Row {
        segments: fit.segments,
        objective: fit.objective,
        residual: fit.residual,
        indices: fit.indices.clone(),
        values: fit.values.clone(),
    }
}

fn stats_of(table: &StageTable, m: usize) -> Stats {
    let report = instrumentation_report(table);
    let dump = table.envelope(m, 0).map(|env| env.dump()).unwrap_or_default();
    Stats {
        max_len_by_index: report.max_len_by_index,
        r: report.r,
        bound_held: report.bound_held,
        index_bound_violations: report.index_bound_violations,
        dump,
    }
}

fn check_flags(cli: &Cli) -> Result<(), CliError> {
    let usage = |msg: &str| Err(CliError::Usage(msg.into()));
    match cli.mode {
        Mode::Constrained if cli.segments.is_none() => usage("--mode constrained needs --segments"),
        Mode::Constrained if cli.zeta.is_some() => usage("--zeta applies to --mode regularized only"),
        Mode::Regularized if cli.zeta.is_none() => usage("--mode regularized needs --zeta"),
        Mode::Regularized if cli.segments.is_some() => usage("--segments applies to --mode constrained only"),
        Mode::Regularized if cli.emit_all_m => usage("--emit-all-m applies to --mode constrained only"),
        _ if cli.oracle && cli.stats => usage("--stats describes the envelope solver and cannot be combined with --oracle"),
        _ if cli.threads == 0 => usage("--threads must be at least 1"),
        _ => Ok(()),
    }
}

fn solve(cli: &Cli, costs: &TransitionCosts) -> Result<Outcome, CliError> {
    let options = SolverOptions { threads: cli.threads, instrument: cli.stats, ..Default::default() };
    match cli.mode {
        Mode::Constrained => {
            let m = cli.segments.expect("checked");
            if cli.oracle {
                let budgets = if cli.emit_all_m { 1..=m } else { m..=m };
                let mut rows = Vec::new();
                for k in budgets {
                    let fit = brute_force_costs(costs, k)?;
                    rows.push(Row {
                        segments: k,
                        objective: fit.objective,
                        residual: fit.objective,
                        indices: fit.indices,
                        values: fit.values,
                    });
                }
                return Ok(Outcome { rows, stats: None });
            }
            let sol = solve_constrained_costs(costs, m, &options)?;
            let rows = if cli.emit_all_m { sol.fits.iter().map(row).collect() } else { vec![row(sol.best())] };
            let stats = sol.stages.as_ref().map(|t| stats_of(t, m));
            Ok(Outcome { rows, stats })
        }
        Mode::Regularized => {
            let penalty = Penalty::new(cli.zeta.expect("checked"))?;
            if cli.oracle {
                let (fit, m) = brute_force_penalized(costs, penalty.zeta())?;
                let rows = vec![Row {
                    segments: m,
                    objective: fit.objective + penalty.zeta() * m as f64,
                    residual: fit.objective,
                    indices: fit.indices,
                    values: fit.values,
                }];
                return Ok(Outcome { rows, stats: None });
            }
            let sol = solve_regularized_costs(costs, penalty, &options)?;
            let stats = sol.stages.as_ref().map(|t| stats_of(t, 0));
            Ok(Outcome { rows: vec![row(&sol.fit)], stats })
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    check_flags(cli)?;
    let kind = match cli.kind {
        Kind::Discrete => SignalKind::Discrete,
        Kind::Continuous => SignalKind::Continuous,
    };
    let signal = ingest::ingest(&cli.input, kind)?;
    let outcome = solve(cli, &TransitionCosts::new(&signal))?;

    let text = match cli.format {
        Format::Csv => report::csv(&outcome.rows, outcome.stats.as_ref()),
        Format::Json => {
            let mode = match cli.mode {
                Mode::Constrained => "constrained",
                Mode::Regularized => "regularized",
            };
            let main = outcome.rows.last().expect("at least one row");
            let all = cli.emit_all_m.then_some(outcome.rows.as_slice());
            report::json(mode, main, all, outcome.stats.as_ref())
        }
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    if let Some(stats) = &outcome.stats {
        let mut stderr = std::io::stderr().lock();
        writeln!(stderr, "# final envelope: lo hi a b c next_index")?;
        stderr.write_all(stats.dump.as_bytes())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("segfit: {err}");
            ExitCode::from(err.code())
        }
    }
}
