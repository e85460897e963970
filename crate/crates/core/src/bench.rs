//! Seeded benchmark runs: shared random starts, paired PGM/Acc-PGM runs,
//! CSV output and per-algorithm summaries.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::{ProblemId, ProblemSpec};
use crate::solvers::{run, Algorithm, IterationTrace, SolverConfig, Status};

/// One benchmark experiment: a problem, the algorithms to compare and the
/// shared random starts.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub problem: ProblemId,
    pub algorithms: Vec<Algorithm>,
    pub n: usize,
    pub starts: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
}

impl RunPlan {
    /// Both algorithms, 100 starts, seed 42 and default solver settings.
    pub fn new(problem: ProblemId, n: usize) -> Self {
        RunPlan {
            problem,
            algorithms: vec![Algorithm::Pgm, Algorithm::AccPgm],
            n,
            starts: 100,
            seed: 42,
            solver: SolverConfig::default(),
            threads: None,
        }
    }

    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec::new(self.problem, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.n == 0 || self.algorithms.is_empty() {
            return Err(Error::InvalidConfig(
                "a plan needs n ≥ 1, at least one start and one algorithm".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be positive".into()));
        }
        self.solver.validate()
    }
}

/// The starting point with index `start_id`, drawn from its own ChaCha
/// stream so that it does not depend on how many other starts are drawn or
/// in which order.
pub fn sample_start(plan: &RunPlan, start_id: usize) -> Array1<f64> {
    let (lo, hi) = plan.problem.start_box();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(start_id as u64);
    (0..plan.n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// All starting points of the plan, uniform in the problem's start box.
pub fn sample_starts(plan: &RunPlan) -> Vec<Array1<f64>> {
    (0..plan.starts).map(|i| sample_start(plan, i)).collect()
}

/// One `(problem, algorithm, start)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub problem: ProblemId,
    pub algorithm: Algorithm,
    pub n: usize,
    pub start_id: usize,
    pub seed: u64,
    pub iterations: usize,
    pub backtracks: usize,
    pub final_ell: f64,
    pub wall_time_ms: f64,
    pub residual_inf: f64,
    pub objectives: Vec<f64>,
    pub status: String,
}

impl BenchmarkRecord {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged.as_str()
    }
}

/// A finished run together with its record.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: BenchmarkRecord,
    pub trace: IterationTrace,
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

/// Runs every `(algorithm, start)` pair of the plan.
///
/// Outputs are ordered by algorithm (in plan order) and then start id,
/// whatever order the workers finish in. A failing start is reported through
/// its status; it does not abort the experiment.
pub fn run_experiment_traced(plan: &RunPlan) -> Result<Vec<RunOutput>> {
    plan.validate()?;
    let spec = plan.spec();
    let problem = spec.build();
    let starts = sample_starts(plan);
    let jobs: Vec<(Algorithm, usize)> = plan
        .algorithms
        .iter()
        .flat_map(|&a| (0..plan.starts).map(move |i| (a, i)))
        .collect();

    let pool = build_pool(plan.threads)?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(algorithm, start_id)| {
                let x0 = starts[start_id].view();
                let clock = Instant::now();
                let trace = run(algorithm, problem.as_ref(), x0, &plan.solver)?;
                let wall_time_ms = clock.elapsed().as_secs_f64() * 1e3;
                let record = BenchmarkRecord {
                    problem: plan.problem,
                    algorithm,
                    n: plan.n,
                    start_id,
                    seed: plan.seed,
                    iterations: trace.iterations,
                    backtracks: trace.total_backtracks(),
                    final_ell: trace.final_ell().unwrap_or(plan.solver.ell_init),
                    wall_time_ms,
                    residual_inf: trace.final_residual().unwrap_or(f64::INFINITY),
                    objectives: trace.final_objectives().to_vec(),
                    status: trace.status.as_str().to_string(),
                };
                Ok(RunOutput { record, trace })
            })
            .collect()
    })
}

/// [`run_experiment_traced`] without the traces.
pub fn run_experiment(plan: &RunPlan) -> Result<Vec<BenchmarkRecord>> {
    Ok(run_experiment_traced(plan)?
        .into_iter()
        .map(|o| o.record)
        .collect())
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn objective_header(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|i| format!("F{i}"))
}

fn num_objectives(records: &[BenchmarkRecord]) -> usize {
    records
        .first()
        .map_or(0, |r| r.objectives.len())
}

fn write_rows(path: &Path, header: Vec<String>, rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err(path))?;
    w.write_record(&header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes the per-run records.
///
/// Header: `problem,algorithm,n,start_id,seed,iterations,backtracks,
/// final_ell,wall_time_ms,residual_inf,F1,...,Fm,status`.
pub fn write_csv(records: &[BenchmarkRecord], path: &Path) -> Result<()> {
    let m = num_objectives(records);
    let mut header: Vec<String> = [
        "problem",
        "algorithm",
        "n",
        "start_id",
        "seed",
        "iterations",
        "backtracks",
        "final_ell",
        "wall_time_ms",
        "residual_inf",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(objective_header(m));
    header.push("status".into());

    let rows = records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.problem.to_string(),
                r.algorithm.to_string(),
                r.n.to_string(),
                r.start_id.to_string(),
                r.seed.to_string(),
                r.iterations.to_string(),
                r.backtracks.to_string(),
                format_float(r.final_ell),
                format_float(r.wall_time_ms),
                format_float(r.residual_inf),
            ];
            row.extend(r.objectives.iter().map(|&v| format_float(v)));
            row.push(r.status.clone());
            row
        })
        .collect();
    write_rows(path, header, rows)
}

fn parse_field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = row
        .get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {i}")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("column {i}: cannot parse `{raw}`")))
}

/// Reads a file produced by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<BenchmarkRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = rdr.headers().map_err(csv_err(path))?.clone();
    if header.len() < 11 {
        return Err(Error::Parse("record header too short".into()));
    }
    let m = header.len() - 11;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err(path))?;
        let problem: String = parse_field(&row, 0)?;
        let algorithm: String = parse_field(&row, 1)?;
        out.push(BenchmarkRecord {
            problem: problem.parse()?,
            algorithm: algorithm.parse()?,
            n: parse_field(&row, 2)?,
            start_id: parse_field(&row, 3)?,
            seed: parse_field(&row, 4)?,
            iterations: parse_field(&row, 5)?,
            backtracks: parse_field(&row, 6)?,
            final_ell: parse_field(&row, 7)?,
            wall_time_ms: parse_field(&row, 8)?,
            residual_inf: parse_field(&row, 9)?,
            objectives: (0..m)
                .map(|i| parse_field(&row, 10 + i))
                .collect::<Result<_>>()?,
            status: parse_field(&row, 10 + m)?,
        });
    }
    Ok(out)
}

/// Writes terminal objective vectors, one row per run:
/// `problem,algorithm,start_id,F1,...,Fm`.
pub fn write_front(records: &[BenchmarkRecord], path: &Path) -> Result<()> {
    let mut header: Vec<String> = ["problem", "algorithm", "start_id"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(objective_header(num_objectives(records)));
    let rows = records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.problem.to_string(),
                r.algorithm.to_string(),
                r.start_id.to_string(),
            ];
            row.extend(r.objectives.iter().map(|&v| format_float(v)));
            row
        })
        .collect();
    write_rows(path, header, rows)
}

/// Writes one trace file per run, named `{problem}_{algorithm}_{start_id}.csv`,
/// with columns `k,residual_inf,ell,theta,backtracks,F1,...,Fm`.
pub fn write_traces(outputs: &[RunOutput], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::with_capacity(outputs.len());
    for out in outputs {
        let r = &out.record;
        let path = dir.join(format!("{}_{}_{}.csv", r.problem, r.algorithm, r.start_id));
        let mut header: Vec<String> = ["k", "residual_inf", "ell", "theta", "backtracks"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(objective_header(r.objectives.len()));
        let rows = out
            .trace
            .records
            .iter()
            .map(|rec| {
                let mut row = vec![
                    rec.k.to_string(),
                    format_float(rec.residual_inf),
                    format_float(rec.ell),
                    format_float(rec.theta),
                    rec.backtracks.to_string(),
                ];
                row.extend(rec.objectives.iter().map(|&v| format_float(v)));
                row
            })
            .collect();
        write_rows(&path, header, rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Aggregates for one `(problem, algorithm)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: ProblemId,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub converged: usize,
    /// Mean over every run.
    pub mean_iterations: f64,
    /// Mean over converged runs only; `NaN` if none converged.
    pub mean_iterations_converged: f64,
    pub mean_wall_time_ms: f64,
    pub total_wall_time_ms: f64,
}

impl SummaryRow {
    pub fn convergence_rate(&self) -> f64 {
        self.converged as f64 / self.runs as f64
    }
}

/// Per-`(problem, algorithm)` means, in first-appearance order.
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(ProblemId, Algorithm)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.problem, r.algorithm)) {
            keys.push((r.problem, r.algorithm));
        }
    }
    keys.into_iter()
        .map(|(problem, algorithm)| {
            let group: Vec<&BenchmarkRecord> = records
                .iter()
                .filter(|r| r.problem == problem && r.algorithm == algorithm)
                .collect();
            let runs = group.len();
            let conv: Vec<&&BenchmarkRecord> = group.iter().filter(|r| r.converged()).collect();
            let total_wall: f64 = group.iter().map(|r| r.wall_time_ms).sum();
            SummaryRow {
                problem,
                algorithm,
                runs,
                converged: conv.len(),
                mean_iterations: group.iter().map(|r| r.iterations as f64).sum::<f64>()
                    / runs as f64,
                mean_iterations_converged: if conv.is_empty() {
                    f64::NAN
                } else {
                    conv.iter().map(|r| r.iterations as f64).sum::<f64>() / conv.len() as f64
                },
                mean_wall_time_ms: total_wall / runs as f64,
                total_wall_time_ms: total_wall,
            }
        })
        .collect()
}

/// The summary as an aligned text table.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:<5} {:>6} {:>10} {:>12} {:>16} {:>14} {:>14}",
        "problem", "alg", "runs", "converged", "mean iters", "mean iters conv", "mean time ms", "total time s"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12} {:<5} {:>6} {:>9.1}% {:>12.1} {:>16.1} {:>14.3} {:>14.3}",
            r.problem.as_str(),
            r.algorithm.as_str(),
            r.runs,
            100.0 * r.convergence_rate(),
            r.mean_iterations,
            r.mean_iterations_converged,
            r.mean_wall_time_ms,
            r.total_wall_time_ms / 1e3,
        );
    }
    out
}

/// Writes the summary as CSV.
pub fn write_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let mut file = fs::File::create(path).map_err(io_err(path))?;
    let mut text = String::from(
        "problem,algorithm,runs,converged,mean_iterations,mean_iterations_converged,mean_wall_time_ms,total_wall_time_ms\n",
    );
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            r.problem,
            r.algorithm,
            r.runs,
            r.converged,
            format_float(r.mean_iterations),
            format_float(r.mean_iterations_converged),
            format_float(r.mean_wall_time_ms),
            format_float(r.total_wall_time_ms),
        );
    }
    file.write_all(text.as_bytes()).map_err(io_err(path))
}
