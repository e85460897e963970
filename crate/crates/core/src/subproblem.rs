//! The per-iteration subproblem and its dual.
//!
//! Given an anchor `x ∈ dom F`, an extrapolated point `y` and `ℓ > 0`, the
//! subproblem is
//!
//! ```text
//! min_z  max_i ψ_i(z),   ψ_i(z) = ⟨∇f_i(y), z − y⟩ + g_i(z) + f_i(y) − F_i(x) + (ℓ/2)‖z − y‖².
//! ```
//!
//! With `y = x` it is the plain proximal gradient subproblem. It is solved
//! through the concave dual over the simplex `Δᵐ`,
//!
//! ```text
//! ω(λ) = min_z Σ_i λ_i ψ_i(z),
//! ```
//!
//! whose inner minimizer is a single proximal step,
//! `z_λ = prox_{(1/ℓ)Σλ_i g_i}(y − (1/ℓ)Σλ_i ∇f_i(y))`, and whose gradient is
//! `∇ω(λ) = g(z_λ) + J_f(y)(z_λ − y) + f(y) − F(x)`. The dual is maximized by
//! projected Newton and projected gradient steps, and the primal solution is
//! recovered from the dual maximizer with one more proximal step.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::problem::{check_dim, eval_objectives, MultiObjectiveProblem};
use crate::prox::moreau_envelope_value;

/// Relative slack used when deciding which objectives attain the max.
pub const ACTIVE_TOLERANCE: f64 = 1e-8;

/// Anchor, extrapolation point and proximal parameter, plus the values at
/// `y` and `x` that every dual evaluation needs.
#[derive(Debug, Clone)]
pub struct SubproblemInput {
    x_anchor: Array1<f64>,
    y_extrap: Array1<f64>,
    ell: f64,
    f_y: Array1<f64>,
    jac_y: Array2<f64>,
    f_anchor: Array1<f64>,
    /// `f(y) − F(x)`
    offset: Array1<f64>,
}

impl SubproblemInput {
    /// Caches `f(y)`, `J_f(y)` and `F(x)`.
    ///
    /// Fails if `x` lies outside `dom F`, if `ℓ ≤ 0`, or on a dimension
    /// mismatch. `y` may lie outside `dom F`.
    pub fn new(
        problem: &dyn MultiObjectiveProblem,
        x_anchor: ArrayView1<f64>,
        y_extrap: ArrayView1<f64>,
        ell: f64,
    ) -> Result<Self> {
        check_dim(problem, y_extrap)?;
        let f_anchor = eval_objectives(problem, x_anchor)?
            .to_finite()
            .ok_or(Error::InfeasibleStart)?;
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidConfig(format!("ell must be positive, got {ell}")));
        }
        let f_y = problem.smooth_values(y_extrap);
        let jac_y = problem.smooth_jacobian(y_extrap);
        if f_y.iter().chain(jac_y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue("smooth part at the extrapolated point"));
        }
        let offset = &f_y - &f_anchor;
        Ok(SubproblemInput {
            x_anchor: x_anchor.to_owned(),
            y_extrap: y_extrap.to_owned(),
            ell,
            f_y,
            jac_y,
            f_anchor,
            offset,
        })
    }

    pub fn x_anchor(&self) -> ArrayView1<'_, f64> {
        self.x_anchor.view()
    }

    pub fn y_extrap(&self) -> ArrayView1<'_, f64> {
        self.y_extrap.view()
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Re-targets the cached input to another `ℓ`.
    pub fn set_ell(&mut self, ell: f64) {
        assert!(ell > 0.0 && ell.is_finite());
        self.ell = ell;
    }

    /// `F(x)` at the anchor.
    pub fn anchor_objectives(&self) -> ArrayView1<'_, f64> {
        self.f_anchor.view()
    }

    /// `max_i F_i(y) − F_i(x)`, an upper bound on the optimal value.
    pub fn value_at_extrapolation(&self, problem: &dyn MultiObjectiveProblem) -> ExtReal {
        problem
            .nonsmooth_values(self.y_extrap.view())
            .into_iter()
            .zip(self.offset.iter())
            .map(|(g, &c)| g + c)
            .fold(ExtReal::Finite(f64::NEG_INFINITY), |a, b| if b > a { b } else { a })
    }

    fn num_objectives(&self) -> usize {
        self.f_y.len()
    }
}

/// A point of the standard simplex `Δᵐ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint(Array1<f64>);

impl DualPoint {
    pub fn uniform(m: usize) -> Self {
        DualPoint(Array1::from_elem(m, 1.0 / m as f64))
    }

    pub fn vertex(m: usize, i: usize) -> Self {
        let mut l = Array1::zeros(m);
        l[i] = 1.0;
        DualPoint(l)
    }

    /// Accepts `weights` if they are nonnegative and sum to one within `1e-12`.
    pub fn new(weights: Array1<f64>) -> Option<Self> {
        let ok = weights.iter().all(|&w| w >= 0.0) && (weights.sum() - 1.0).abs() <= 1e-12;
        ok.then_some(DualPoint(weights))
    }

    pub fn weights(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Euclidean projection onto `Δᵐ` by sorting and thresholding.
pub fn project_simplex(v: ArrayView1<f64>) -> DualPoint {
    assert!(!v.is_empty(), "cannot project onto an empty simplex");
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            tau = t;
        }
    }
    let mut lam = v.mapv(|vi| (vi - tau).max(0.0));
    // renormalize away the rounding in the cumulative sum
    let s = lam.sum();
    lam /= s;
    DualPoint(lam)
}

/// Projection onto the face of `Δᵐ` spanned by the coordinates in `free`;
/// the other coordinates are set to zero.
fn project_simplex_on(v: ArrayView1<f64>, free: &[bool]) -> Array1<f64> {
    let idx: Vec<usize> = (0..v.len()).filter(|&i| free[i]).collect();
    let sub: Array1<f64> = idx.iter().map(|&i| v[i]).collect();
    let p = project_simplex(sub.view());
    let mut out = Array1::zeros(v.len());
    for (k, &i) in idx.iter().enumerate() {
        out[i] = p.0[k];
    }
    out
}

/// Settings for the dual ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSolverConfig {
    /// Bound on the projected-gradient stationarity measure.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Step shrink factor in the Armijo search.
    pub armijo_factor: f64,
    /// Sufficient-increase constant in the Armijo test.
    pub sufficient_increase: f64,
    /// Step `s` of the stationarity measure `‖λ − Π(λ + s∇ω(λ))‖ / s`.
    pub probe_step: f64,
}

impl Default for DualSolverConfig {
    fn default() -> Self {
        DualSolverConfig {
            tolerance: 1e-10,
            max_iterations: 500,
            armijo_factor: 0.5,
            sufficient_increase: 1e-4,
            probe_step: 1.0,
        }
    }
}

impl DualSolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tolerance > 0.0
            && self.max_iterations >= 1
            && self.armijo_factor > 0.0
            && self.armijo_factor < 1.0
            && self.sufficient_increase > 0.0
            && self.sufficient_increase < 1.0
            && self.probe_step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }
}

/// Solution of one subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    /// The minimizer `p_ℓ(x, y)`.
    pub z_star: Array1<f64>,
    pub lambda_star: DualPoint,
    /// Optimal value, reported as `ω(λ*)`.
    pub theta: f64,
    /// `ψ(z*)`.
    pub psi: Vec<ExtReal>,
    /// Objectives attaining `max_i ψ_i(z*)` up to [`ACTIVE_TOLERANCE`].
    pub active_set: Vec<usize>,
    /// `‖z* − y‖_∞`
    pub residual_inf: f64,
    pub dual_stationarity: f64,
    pub dual_iterations: usize,
}

impl SubproblemSolution {
    /// `max_i ψ_i(z*)`, the primal objective at `z*`.
    pub fn primal_value(&self) -> ExtReal {
        max_ext(&self.psi)
    }
}

fn max_ext(v: &[ExtReal]) -> ExtReal {
    v.iter()
        .copied()
        .fold(ExtReal::Finite(f64::NEG_INFINITY), |a, b| if b > a { b } else { a })
}

/// `ψ(z)` for the given input.
pub fn psi_values(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    z: ArrayView1<f64>,
) -> Result<Vec<ExtReal>> {
    check_dim(problem, z)?;
    let d = &z - &input.y_extrap;
    let quad = 0.5 * input.ell * d.dot(&d);
    let lin = input.jac_y.dot(&d);
    let g = problem.nonsmooth_values(z);
    Ok(g.into_iter()
        .enumerate()
        .map(|(i, gi)| gi + (lin[i] + input.offset[i] + quad))
        .collect())
}

/// Recovers `z_λ = prox_{(1/ℓ)Σλ_i g_i}(y − (1/ℓ)Σλ_i ∇f_i(y))`.
pub fn primal_from_dual(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
) -> Array1<f64> {
    let (w, v) = prox_arguments(input, lam);
    problem.weighted_prox(w.view(), v.view())
}

/// Floor on the prox weights. A zero weight would let `z_λ` leave the domain
/// of an indicator-valued `g_i`; the floor evaluates the prox in the limit
/// `λ_i → 0⁺` instead, which is where the dual supremum lives, and moves
/// finite-valued terms by far less than one ulp.
const WEIGHT_FLOOR: f64 = 1e-300;

fn prox_arguments(input: &SubproblemInput, lam: &DualPoint) -> (Array1<f64>, Array1<f64>) {
    let w = lam.0.mapv(|l| (l / input.ell).max(WEIGHT_FLOOR));
    let step = input.jac_y.t().dot(&lam.0) / input.ell;
    (w, &input.y_extrap - &step)
}

/// Everything one prox call yields at a dual point.
#[derive(Debug, Clone)]
struct DualEval {
    z: Array1<f64>,
    psi: Vec<ExtReal>,
    omega: f64,
    /// `∇ω`, `+∞` where `g_i(z_λ) = +∞`
    grad: Vec<ExtReal>,
}

fn evaluate(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
) -> Result<DualEval> {
    let z = primal_from_dual(problem, input, lam);
    let psi = psi_values(problem, input, z.view())?;
    let d = &z - &input.y_extrap;
    let quad = 0.5 * input.ell * d.dot(&d);
    let omega = psi
        .iter()
        .zip(lam.0.iter())
        .fold(ExtReal::ZERO, |acc, (p, &l)| acc + p.scale(l));
    let omega = match omega {
        ExtReal::Finite(v) if v.is_finite() => v,
        _ => return Err(Error::NonFiniteValue("dual objective")),
    };
    let grad = psi
        .iter()
        .map(|p| match *p {
            ExtReal::Finite(v) => ExtReal::Finite(v - quad),
            ExtReal::PosInf => ExtReal::PosInf,
        })
        .collect();
    Ok(DualEval { z, psi, omega, grad })
}

/// `ω(λ)`, computed as `Σ_i λ_i ψ_i(z_λ)`.
pub fn dual_value(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
) -> Result<f64> {
    Ok(evaluate(problem, input, lam)?.omega)
}

/// `ω(λ)` written with the Moreau envelope:
/// `ℓ·env_{(1/ℓ)Σλ_i g_i}(v) − (1/2ℓ)‖Σλ_i∇f_i(y)‖² + Σλ_i(f_i(y) − F_i(x))`.
pub fn dual_value_via_envelope(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
) -> f64 {
    let (w, v) = prox_arguments(input, lam);
    let env = moreau_envelope_value(problem, w.view(), v.view()).to_f64();
    let comb = input.jac_y.t().dot(&lam.0);
    input.ell * env - comb.dot(&comb) / (2.0 * input.ell) + lam.0.dot(&input.offset)
}

/// `∇ω(λ) = g(z_λ) + J_f(y)(z_λ − y) + f(y) − F(x)`.
///
/// A `+∞` entry means `z_λ` left the domain of that objective's `g_i`.
pub fn dual_gradient(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
) -> Result<Vec<ExtReal>> {
    let z = primal_from_dual(problem, input, lam);
    let d = &z - &input.y_extrap;
    let lin = input.jac_y.dot(&d);
    Ok(problem
        .nonsmooth_values(z.view())
        .into_iter()
        .enumerate()
        .map(|(i, gi)| gi + (lin[i] + input.offset[i]))
        .collect())
}

/// Splits an extended gradient into finite ascent values and the mask of
/// coordinates allowed to move. A `+∞` entry at `λ_i = 0` freezes `λ_i`.
fn ascent_gradient(grad: &[ExtReal], lam: &DualPoint) -> Result<(Array1<f64>, Vec<bool>)> {
    let mut g = Array1::zeros(grad.len());
    let mut free = vec![true; grad.len()];
    for (i, gi) in grad.iter().enumerate() {
        match gi.finite() {
            Some(v) => g[i] = v,
            None if lam.0[i] == 0.0 => free[i] = false,
            None => return Err(Error::NonFiniteValue("dual gradient at a positive weight")),
        }
    }
    // Moves stay on the simplex, so a common shift of the free entries changes
    // neither the projected steps nor ⟨∇ω, Δλ⟩. Centering keeps that inner
    // product from being swamped by roundoff in Δλ.
    let center: f64 = (0..g.len()).filter(|&i| free[i]).map(|i| lam.0[i] * g[i]).sum();
    for i in (0..g.len()).filter(|&i| free[i]) {
        g[i] -= center;
    }
    Ok((g, free))
}

/// Smallest stationarity resolvable in double precision. A change of one ulp
/// in `λ` moves `∇ω` by up to `ε‖J‖²_F/ℓ`, which dominates for badly scaled
/// Jacobians.
fn roundoff_floor(input: &SubproblemInput, grad: &Array1<f64>) -> f64 {
    let curvature = input.jac_y.iter().map(|v| v * v).sum::<f64>() / input.ell;
    let scale = grad.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    1e3 * f64::EPSILON * (curvature + scale)
}

fn stationarity(lam: &DualPoint, grad: &Array1<f64>, free: &[bool], s: f64) -> f64 {
    let trial = &lam.0 + &(grad * s);
    let proj = project_simplex_on(trial.view(), free);
    (&lam.0 - &proj).mapv(|v| v * v).sum().sqrt() / s
}

fn finish(
    input: &SubproblemInput,
    lam: DualPoint,
    eval: DualEval,
    dual_stationarity: f64,
    dual_iterations: usize,
) -> SubproblemSolution {
    let best = max_ext(&eval.psi).to_f64();
    let cut = best - ACTIVE_TOLERANCE * (1.0 + best.abs());
    let active_set = eval
        .psi
        .iter()
        .enumerate()
        .filter(|(_, p)| p.to_f64() >= cut)
        .map(|(i, _)| i)
        .collect();
    let residual_inf = (&eval.z - &input.y_extrap)
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    SubproblemSolution {
        z_star: eval.z,
        lambda_star: lam,
        theta: eval.omega,
        psi: eval.psi,
        active_set,
        residual_inf,
        dual_stationarity,
        dual_iterations,
    }
}

/// Largest number of objectives for which the Newton model is maximized by
/// enumerating the faces of the simplex.
const NEWTON_MAX_OBJECTIVES: usize = 8;

/// Increment for the forward differences of `∇ω`.
const HESSIAN_STEP: f64 = 1e-7;

/// The sufficient-increase test for a move from `λ` to `λ⁺ = λ + dir`.
///
/// By concavity `ω(λ⁺) ≥ ω(λ) + ⟨∇ω(λ⁺), dir⟩`, so the slope at `λ⁺` can
/// certify the increase when the two values of `ω` agree to roundoff.
fn sufficient_increase(
    cfg: &DualSolverConfig,
    eval: &DualEval,
    cand: &DualPoint,
    cand_eval: &DualEval,
    dir: &Array1<f64>,
    gain: f64,
) -> bool {
    if cand_eval.omega >= eval.omega + cfg.sufficient_increase * gain {
        return true;
    }
    let end_slope = ascent_gradient(&cand_eval.grad, cand)
        .map(|(g, _)| g.dot(dir))
        .unwrap_or(f64::NEG_INFINITY);
    end_slope >= cfg.sufficient_increase * gain
}

/// Armijo search along the projection arc `Π(λ + α∇ω)`.
#[allow(clippy::too_many_arguments)]
fn gradient_step(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    cfg: &DualSolverConfig,
    lam: &DualPoint,
    eval: &DualEval,
    grad: &Array1<f64>,
    free: &[bool],
    step: f64,
) -> Result<Option<(DualPoint, DualEval)>> {
    let mut alpha = step;
    while alpha >= 1e-30 {
        let trial = &lam.0 + &(grad * alpha);
        let cand = DualPoint(project_simplex_on(trial.view(), free));
        let dir = &cand.0 - &lam.0;
        let gain = grad.dot(&dir);
        if gain <= 0.0 {
            // not an ascent direction at machine precision
            return Ok(None);
        }
        let cand_eval = evaluate(problem, input, &cand)?;
        if sufficient_increase(cfg, eval, &cand, &cand_eval, &dir, gain) {
            return Ok(Some((cand, cand_eval)));
        }
        alpha *= cfg.armijo_factor;
    }
    Ok(None)
}

/// Projected Newton step with backtracking along the segment to the
/// maximizer of the quadratic model.
fn newton_step(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    cfg: &DualSolverConfig,
    lam: &DualPoint,
    eval: &DualEval,
    grad: &Array1<f64>,
    free: &[bool],
) -> Result<Option<(DualPoint, DualEval)>> {
    let Some(hess) = dual_hessian(problem, input, lam, eval, free) else {
        return Ok(None);
    };
    let Some(target) = model_maximizer(lam, grad, &hess, free) else {
        return Ok(None);
    };
    let dir = &target - &lam.0;
    let slope = grad.dot(&dir);
    if slope <= 0.0 {
        return Ok(None);
    }
    let mut alpha = 1.0;
    for _ in 0..40 {
        let d = &dir * alpha;
        let cand = DualPoint(&lam.0 + &d);
        let cand_eval = evaluate(problem, input, &cand)?;
        if sufficient_increase(cfg, eval, &cand, &cand_eval, &d, alpha * slope) {
            return Ok(Some((cand, cand_eval)));
        }
        alpha *= cfg.armijo_factor;
    }
    Ok(None)
}

/// Symmetrized forward-difference Hessian of `ω` on the free coordinates.
/// `ω` is piecewise quadratic for the usual regularizers, so the differences
/// are exact away from kinks.
fn dual_hessian(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    lam: &DualPoint,
    eval: &DualEval,
    free: &[bool],
) -> Option<Array2<f64>> {
    let m = lam.len();
    let mut h = Array2::zeros((m, m));
    for j in (0..m).filter(|&j| free[j]) {
        let mut probe = lam.0.clone();
        probe[j] += HESSIAN_STEP;
        let shifted = evaluate(problem, input, &DualPoint(probe)).ok()?;
        for i in (0..m).filter(|&i| free[i]) {
            h[[i, j]] = (shifted.grad[i].finite()? - eval.grad[i].finite()?) / HESSIAN_STEP;
        }
    }
    let sym = (&h + &h.t()) * 0.5;
    sym.iter().all(|v| v.is_finite()).then_some(sym)
}

/// Maximizer over the free face of the simplex of
/// `q(μ) = ⟨g, μ − λ⟩ + ½(μ − λ)ᵀ(H − rI)(μ − λ)`, where the small ridge `r`
/// makes the model strictly concave. Every support is tried; the best
/// feasible stationary point of a face is the global maximizer.
fn model_maximizer(
    lam: &DualPoint,
    grad: &Array1<f64>,
    hess: &Array2<f64>,
    free: &[bool],
) -> Option<Array1<f64>> {
    let m = lam.len();
    let idx: Vec<usize> = (0..m).filter(|&i| free[i]).collect();
    let scale = hess.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let ridge = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut h = hess.clone();
    for i in 0..m {
        h[[i, i]] -= ridge;
    }
    let rhs = h.dot(&lam.0) - grad;

    let mut best: Option<(f64, Array1<f64>)> = None;
    for mask in 1u32..(1 << idx.len()) {
        let support: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &i)| i)
            .collect();
        let k = support.len();
        // [H_SS  −1] [μ_S]   [(Hλ − g)_S]
        // [1ᵀ     0] [ν  ] = [     1     ]
        let mut a = Array2::zeros((k + 1, k + 1));
        let mut b = Array1::zeros(k + 1);
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                a[[r, c]] = h[[i, j]];
            }
            a[[r, k]] = -1.0;
            a[[k, r]] = 1.0;
            b[r] = rhs[i];
        }
        b[k] = 1.0;
        let Some(sol) = solve_dense(a, b) else { continue };
        if sol.iter().take(k).any(|&v| v < -1e-12) {
            continue;
        }
        let mut mu = Array1::zeros(m);
        for (r, &i) in support.iter().enumerate() {
            mu[i] = sol[r].max(0.0);
        }
        let total = mu.sum();
        if !(total > 0.0) {
            continue;
        }
        mu /= total;
        let d = &mu - &lam.0;
        let value = grad.dot(&d) + 0.5 * d.dot(&h.dot(&d));
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((value, mu));
        }
    }
    best.map(|(_, mu)| mu)
}

/// Gaussian elimination with partial pivoting; `None` if numerically singular.
fn solve_dense(mut a: Array2<f64>, mut b: Array1<f64>) -> Option<Array1<f64>> {
    let n = b.len();
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&p, &q| a[[p, col]].abs().total_cmp(&a[[q, col]].abs()))?;
        if a[[piv, col]].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap([piv, c], [col, c]);
            }
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let f = a[[r, col]] / a[[col, col]];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[[r, c]] -= f * a[[col, c]];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = Array1::zeros(n);
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[[r, c]] * x[c]).sum();
        x[r] = (b[r] - tail) / a[[r, r]];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Solves the subproblem by maximizing `ω` over `Δᵐ`.
///
/// Each iteration first tries a projected Newton step: the Hessian of `ω` is
/// taken from gradient differences and the quadratic model is maximized
/// exactly over the simplex. If that step fails the sufficient-increase test,
/// a projected gradient step with Barzilai–Borwein trial length and Armijo
/// backtracking is taken instead. For a single objective the dual is the
/// point `λ = (1)` and one prox step solves the problem.
///
/// The stopping tolerance is raised to the level that double precision can
/// resolve when the Jacobian is badly scaled.
pub fn solve_subproblem(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    cfg: &DualSolverConfig,
) -> Result<SubproblemSolution> {
    cfg.validate()?;
    let m = input.num_objectives();
    if m == 1 {
        let lam = DualPoint::vertex(1, 0);
        let eval = evaluate(problem, input, &lam)?;
        return Ok(finish(input, lam, eval, 0.0, 0));
    }

    let s = cfg.probe_step;
    let mut lam = DualPoint::uniform(m);
    let mut eval = evaluate(problem, input, &lam)?;
    let (mut grad, mut free) = ascent_gradient(&eval.grad, &lam)?;
    let mut step = s;
    let mut stat = stationarity(&lam, &grad, &free, s);
    let tolerance = cfg.tolerance.max(roundoff_floor(input, &grad));

    for it in 0..cfg.max_iterations {
        if stat <= tolerance {
            return Ok(finish(input, lam, eval, stat, it));
        }

        let newton = if m <= NEWTON_MAX_OBJECTIVES {
            newton_step(problem, input, cfg, &lam, &eval, &grad, &free)?
        } else {
            None
        };
        let accepted = match newton {
            Some(found) => Some(found),
            None => gradient_step(problem, input, cfg, &lam, &eval, &grad, &free, step)?,
        };
        let Some((cand, cand_eval)) = accepted else {
            return Err(Error::MaxIterationsExceeded {
                iterations: it,
                stationarity: stat,
                best: Box::new(finish(input, lam, eval, stat, it)),
            });
        };

        let (cand_grad, cand_free) = ascent_gradient(&cand_eval.grad, &cand)?;
        // Barzilai–Borwein length for the next trial step; ω is concave so
        // −⟨Δλ, Δ∇ω⟩ ≥ 0
        let dl = &cand.0 - &lam.0;
        let dg = &cand_grad - &grad;
        let curv = -dl.dot(&dg);
        step = if curv > 0.0 {
            (dl.dot(&dl) / curv).clamp(1e-12, 1e12)
        } else {
            (step * 2.0).min(1e12)
        };

        lam = cand;
        eval = cand_eval;
        grad = cand_grad;
        free = cand_free;
        stat = stationarity(&lam, &grad, &free, s);
    }

    if stat <= tolerance {
        return Ok(finish(input, lam, eval, stat, cfg.max_iterations));
    }
    Err(Error::MaxIterationsExceeded {
        iterations: cfg.max_iterations,
        stationarity: stat,
        best: Box::new(finish(input, lam, eval, stat, cfg.max_iterations)),
    })
}
