//! Proximal gradient (PGM) and accelerated proximal gradient (Acc-PGM)
//! outer loops.
//!
//! Both loops solve one subproblem per iteration, enlarging `ℓ` by a constant
//! factor until the accepted point satisfies
//! `F_i(p) − F_i(x) ≤ θ` for every objective. `ℓ` is carried over between
//! iterations and never decreases.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::problem::{eval_objectives, MultiObjectiveProblem};
use crate::subproblem::{solve_subproblem, DualSolverConfig, SubproblemInput, SubproblemSolution};

/// Largest number of `ℓ` increases tolerated in a single backtracking search.
pub const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Pgm,
    AccPgm,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Pgm => "pgm",
            Algorithm::AccPgm => "acc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pgm" => Ok(Algorithm::Pgm),
            "acc" => Ok(Algorithm::AccPgm),
            _ => Err(Error::Unsupported(format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `‖p − y‖_∞ < epsilon`.
    pub epsilon: f64,
    pub ell_init: f64,
    /// Multiplier applied to `ℓ` on each failed backtracking test.
    pub backtrack_factor: f64,
    pub max_iterations: usize,
    pub dual: DualSolverConfig,
    /// Relative slack in the backtracking test, scaled by `1 + |θ|`.
    pub backtrack_slack: f64,
    /// Keep every iterate (and extrapolation point) in the trace.
    pub record_points: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-5,
            ell_init: 1.0,
            backtrack_factor: 2.0,
            max_iterations: 10_000,
            dual: DualSolverConfig::default(),
            backtrack_slack: 1e-12,
            record_points: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.epsilon > 0.0
            && self.ell_init > 0.0
            && self.ell_init.is_finite()
            && self.backtrack_factor > 1.0
            && self.max_iterations >= 1
            && self.backtrack_slack >= 0.0;
        if !ok {
            return Err(Error::InvalidConfig(format!("{self:?}")));
        }
        self.dual.validate()
    }
}

/// State `(t_k, k)` of the extrapolation schedule, starting from `t₁ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumSchedule {
    pub t: f64,
    pub k: usize,
}

impl Default for MomentumSchedule {
    fn default() -> Self {
        MomentumSchedule { t: 1.0, k: 1 }
    }
}

impl MomentumSchedule {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Advances `t_{k+1} = √(t_k² + ¼) + ½` and returns `γ_k = (t_k − 1)/t_{k+1}`.
pub fn momentum_next(sched: MomentumSchedule) -> (MomentumSchedule, f64) {
    let t_next = (sched.t * sched.t + 0.25).sqrt() + 0.5;
    let gamma = (sched.t - 1.0) / t_next;
    (
        MomentumSchedule {
            t: t_next,
            k: sched.k + 1,
        },
        gamma,
    )
}

/// Outcome of [`backtrack_ell`].
#[derive(Debug, Clone)]
pub struct Backtracked {
    pub ell: f64,
    pub solution: SubproblemSolution,
    pub backtracks: usize,
}

/// Solves the subproblem at `(x, y)` and multiplies `ℓ` by the configured
/// factor until `max_i F_i(z*) − F_i(x) ≤ θ + slack·(1 + |θ|)`.
pub fn backtrack_ell(
    problem: &dyn MultiObjectiveProblem,
    x_anchor: ArrayView1<f64>,
    y: ArrayView1<f64>,
    ell_in: f64,
    cfg: &SolverConfig,
) -> Result<Backtracked> {
    let mut input = SubproblemInput::new(problem, x_anchor, y, ell_in)?;
    let fx = input.anchor_objectives().to_owned();
    let mut ell = ell_in;
    let mut backtracks = 0;
    loop {
        let solution = solve_subproblem(problem, &input, &cfg.dual)?;
        let theta = solution.theta;
        let bound = theta + cfg.backtrack_slack * (1.0 + theta.abs());
        let accepted = eval_objectives(problem, solution.z_star.view())?
            .to_finite()
            .is_some_and(|fz| fz.iter().zip(fx.iter()).all(|(a, b)| a - b <= bound));
        if accepted {
            return Ok(Backtracked {
                ell,
                solution,
                backtracks,
            });
        }
        backtracks += 1;
        ell *= cfg.backtrack_factor;
        if backtracks > MAX_BACKTRACKS || !ell.is_finite() {
            return Err(Error::BacktrackDiverged { backtracks, ell });
        }
        input.set_ell(ell);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Converged,
    MaxIterations,
    SubproblemFailure(String),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::SubproblemFailure(_) => "subproblem_failure",
        }
    }
}

/// One subproblem solve of an outer loop.
///
/// Record `k` holds the candidate `x^k`: `p_ℓ(x^{k−1})` for PGM and
/// `p_ℓ(x^{k−1}, y^k)` for Acc-PGM. The final record of a converged run is
/// the solve that passed the stopping test.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `F(x^k)`
    pub objectives: Vec<f64>,
    /// `‖x^k − x^{k−1}‖_∞` (PGM) or `‖x^k − y^k‖_∞` (Acc-PGM)
    pub residual_inf: f64,
    pub ell: f64,
    pub theta: f64,
    pub backtracks: usize,
    pub lambda: Vec<f64>,
    pub point: Option<Array1<f64>>,
    /// `y^k`, Acc-PGM only
    pub extrapolation: Option<Array1<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub algorithm: Algorithm,
    pub initial_point: Array1<f64>,
    pub initial_objectives: Vec<f64>,
    pub records: Vec<IterationRecord>,
    pub status: Status,
    /// The last candidate on convergence, otherwise the last iterate.
    pub final_point: Array1<f64>,
    /// Number of accepted updates.
    pub iterations: usize,
}

impl IterationTrace {
    pub fn total_backtracks(&self) -> usize {
        self.records.iter().map(|r| r.backtracks).sum()
    }

    pub fn final_ell(&self) -> Option<f64> {
        self.records.last().map(|r| r.ell)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.last().map(|r| r.residual_inf)
    }

    pub fn final_objectives(&self) -> &[f64] {
        self.records
            .last()
            .map_or(&self.initial_objectives, |r| &r.objectives)
    }

    /// `x^k`, available when points were recorded (`x⁰` always is).
    pub fn iterate(&self, k: usize) -> Option<ArrayView1<'_, f64>> {
        if k == 0 {
            return Some(self.initial_point.view());
        }
        self.records.get(k - 1)?.point.as_ref().map(|p| p.view())
    }
}

fn start(
    problem: &dyn MultiObjectiveProblem,
    x0: ArrayView1<f64>,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    eval_objectives(problem, x0)?
        .to_finite()
        .map(|f| f.to_vec())
        .ok_or(Error::InfeasibleStart)
}

fn sup_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
}

fn record(
    problem: &dyn MultiObjectiveProblem,
    k: usize,
    bt: &Backtracked,
    y: ArrayView1<f64>,
    cfg: &SolverConfig,
    extrapolation: Option<Array1<f64>>,
) -> Result<IterationRecord> {
    let sol = &bt.solution;
    let objectives = eval_objectives(problem, sol.z_star.view())?.to_f64();
    Ok(IterationRecord {
        k,
        objectives,
        residual_inf: sup_dist(sol.z_star.view(), y),
        ell: bt.ell,
        theta: sol.theta,
        backtracks: bt.backtracks,
        lambda: sol.lambda_star.weights().to_vec(),
        point: cfg.record_points.then(|| sol.z_star.clone()),
        extrapolation,
    })
}

/// Runs the proximal gradient method from `x0`.
///
/// Errors only on invalid input (`x0 ∉ dom F`, bad config, dimension);
/// failures inside the loop end the trace with
/// [`Status::SubproblemFailure`].
pub fn run_pgm(
    problem: &dyn MultiObjectiveProblem,
    x0: ArrayView1<f64>,
    cfg: &SolverConfig,
) -> Result<IterationTrace> {
    let initial_objectives = start(problem, x0, cfg)?;
    let mut x = x0.to_owned();
    let mut ell = cfg.ell_init;
    let mut records = Vec::new();
    let mut iterations = 0;

    let status = loop {
        let bt = match backtrack_ell(problem, x.view(), x.view(), ell, cfg) {
            Ok(bt) => bt,
            Err(e) => break Status::SubproblemFailure(e.to_string()),
        };
        ell = bt.ell;
        let rec = record(problem, iterations + 1, &bt, x.view(), cfg, None)?;
        let done = rec.residual_inf < cfg.epsilon;
        records.push(rec);
        x = bt.solution.z_star;
        if done {
            break Status::Converged;
        }
        iterations += 1;
        if iterations >= cfg.max_iterations {
            break Status::MaxIterations;
        }
    };

    Ok(IterationTrace {
        algorithm: Algorithm::Pgm,
        initial_point: x0.to_owned(),
        initial_objectives,
        records,
        status,
        final_point: x,
        iterations,
    })
}

/// Runs the accelerated proximal gradient method from `x0`.
///
/// Same error contract as [`run_pgm`]. Objective values are not monotone
/// along the run but never exceed `F(x⁰)`.
pub fn run_accpgm(
    problem: &dyn MultiObjectiveProblem,
    x0: ArrayView1<f64>,
    cfg: &SolverConfig,
) -> Result<IterationTrace> {
    let initial_objectives = start(problem, x0, cfg)?;
    let mut x_prev = x0.to_owned();
    let mut y = x0.to_owned();
    let mut sched = MomentumSchedule::new();
    let mut ell = cfg.ell_init;
    let mut records = Vec::new();
    let mut iterations = 0;

    let (status, final_point) = loop {
        let bt = match backtrack_ell(problem, x_prev.view(), y.view(), ell, cfg) {
            Ok(bt) => bt,
            Err(e) => break (Status::SubproblemFailure(e.to_string()), x_prev),
        };
        ell = bt.ell;
        let extrap = cfg.record_points.then(|| y.clone());
        let rec = record(problem, sched.k, &bt, y.view(), cfg, extrap)?;
        let done = rec.residual_inf < cfg.epsilon;
        records.push(rec);
        let x = bt.solution.z_star;
        if done {
            break (Status::Converged, x);
        }
        let (next, gamma) = momentum_next(sched);
        sched = next;
        y = &x + &((&x - &x_prev) * gamma);
        x_prev = x;
        iterations += 1;
        if iterations >= cfg.max_iterations {
            break (Status::MaxIterations, x_prev);
        }
    };

    Ok(IterationTrace {
        algorithm: Algorithm::AccPgm,
        initial_point: x0.to_owned(),
        initial_objectives,
        records,
        status,
        final_point,
        iterations,
    })
}

/// Dispatches to [`run_pgm`] or [`run_accpgm`].
pub fn run(
    algorithm: Algorithm,
    problem: &dyn MultiObjectiveProblem,
    x0: ArrayView1<f64>,
    cfg: &SolverConfig,
) -> Result<IterationTrace> {
    match algorithm {
        Algorithm::Pgm => run_pgm(problem, x0, cfg),
        Algorithm::AccPgm => run_accpgm(problem, x0, cfg),
    }
}
