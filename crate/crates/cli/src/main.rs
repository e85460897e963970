use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mopg::bench::{
    render_summary, run_experiment_traced, summarize, write_csv, write_front,
    write_summary_csv, write_traces, RunPlan,
};
use mopg::problems::ProblemId;
use mopg::solvers::{Algorithm, SolverConfig};
use mopg::subproblem::DualSolverConfig;

#[derive(Debug, Parser)]
#[command(name = "mopg", version, about = "Multiobjective proximal gradient benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run PGM and/or Acc-PGM from shared random starts and write CSV results.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Jos1,
    #[value(name = "jos1-l1")]
    Jos1L1,
    Fds,
    #[value(name = "fds-nonneg")]
    FdsNonneg,
}

impl From<ProblemArg> for ProblemId {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Jos1 => ProblemId::Jos1,
            ProblemArg::Jos1L1 => ProblemId::Jos1L1,
            ProblemArg::Fds => ProblemId::Fds,
            ProblemArg::FdsNonneg => ProblemId::FdsNonneg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgArg {
    Pgm,
    Acc,
    Both,
}

impl AlgArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgArg::Pgm => vec![Algorithm::Pgm],
            AlgArg::Acc => vec![Algorithm::AccPgm],
            AlgArg::Both => vec![Algorithm::Pgm, Algorithm::AccPgm],
        }
    }
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "both")]
    alg: AlgArg,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    starts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    ell0: f64,
    #[arg(long, default_value_t = 2.0)]
    bt_factor: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    dual_tol: f64,
    /// Worker threads (default: available cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Per-run records.
    #[arg(long)]
    out: PathBuf,
    /// Terminal objective values.
    #[arg(long)]
    front_out: PathBuf,
    /// Directory for per-run iteration traces.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Summary table as CSV.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

impl BenchArgs {
    fn plan(&self) -> RunPlan {
        RunPlan {
            problem: self.problem.into(),
            algorithms: self.alg.algorithms(),
            n: self.n,
            starts: self.starts,
            seed: self.seed,
            solver: SolverConfig {
                epsilon: self.eps,
                ell_init: self.ell0,
                backtrack_factor: self.bt_factor,
                max_iterations: self.max_iter,
                dual: DualSolverConfig {
                    tolerance: self.dual_tol,
                    ..DualSolverConfig::default()
                },
                ..SolverConfig::default()
            },
            threads: self.threads,
        }
    }
}

/// Returns whether every start converged.
fn bench(args: &BenchArgs) -> anyhow::Result<bool> {
    let plan = args.plan();
    let outputs = run_experiment_traced(&plan).context("benchmark run failed")?;
    let records: Vec<_> = outputs.iter().map(|o| o.record.clone()).collect();

    write_csv(&records, &args.out)?;
    write_front(&records, &args.front_out)?;
    if let Some(dir) = &args.trace_dir {
        write_traces(&outputs, dir)?;
    }
    let summary = summarize(&records);
    if let Some(path) = &args.summary_out {
        write_summary_csv(&summary, path)?;
    }
    print!("{}", render_summary(&summary));
    Ok(records.iter().all(|r| r.converged()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Bench(args) => match bench(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(2),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
