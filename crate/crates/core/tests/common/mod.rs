//! Oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use mopg::problems::{QuadraticComposite, Regularizer};
use mopg::subproblem::{psi_values, SubproblemInput};
use mopg::MultiObjectiveProblem;
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Array1<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn sup_norm(v: &Array1<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Minimizer of a convex function of one variable on `[lo, hi]`: a grid pass
/// then golden-section refinement. Tolerates `+∞` values.
pub fn grid_argmin_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> f64 {
    let h = (hi - lo) / steps as f64;
    let mut best = lo;
    let mut best_val = f(lo);
    for k in 1..=steps {
        let t = lo + h * k as f64;
        let v = f(t);
        if v < best_val {
            best = t;
            best_val = v;
        }
    }
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..120 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    // at a domain boundary the bracket may straddle it, so compare all ends
    [a, 0.5 * (a + b), b]
        .into_iter()
        .map(|t| (t, f(t)))
        .fold((best, best_val), |acc, c| if c.1 < acc.1 { c } else { acc })
        .0
}

/// A random quadratic composite problem with `m` objectives in `ℝⁿ`, mixing
/// zero, shifted ℓ₁ and nonnegativity regularizers.
pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize, m: usize) -> QuadraticComposite {
    let mut hessians = Vec::with_capacity(m);
    let mut linear = Vec::with_capacity(m);
    let mut constants = Vec::with_capacity(m);
    let mut regularizers = Vec::with_capacity(m);
    for _ in 0..m {
        let b = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
        hessians.push(b.t().dot(&b) / n as f64);
        linear.push(uniform_point(rng, n, -1.0, 1.0));
        constants.push(rng.gen_range(-1.0..1.0));
        regularizers.push(match rng.gen_range(0..3) {
            0 => Regularizer::Zero,
            1 => Regularizer::L1 {
                scale: rng.gen_range(0.0..1.0),
                shift: rng.gen_range(-1.0..1.0),
            },
            _ => Regularizer::NonnegIndicator,
        });
    }
    QuadraticComposite::new(hessians, linear, constants, regularizers)
}

/// A random subproblem `(problem, x, y, ℓ)` with `x ∈ dom F`.
pub fn random_subproblem(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
) -> (QuadraticComposite, Array1<f64>, Array1<f64>, f64) {
    let problem = random_quadratic(rng, n, m);
    let constrained = problem
        .regularizers()
        .iter()
        .any(|r| matches!(r, Regularizer::NonnegIndicator));
    let lo = if constrained { 0.0 } else { -1.0 };
    let x = uniform_point(rng, n, lo, 1.0);
    let y = uniform_point(rng, n, -1.0, 1.0);
    let ell = rng.gen_range(1.0..4.0);
    (problem, x, y, ell)
}

/// `max_i ψ_i(z)`, the primal subproblem objective.
pub fn primal_objective(
    problem: &dyn MultiObjectiveProblem,
    input: &SubproblemInput,
    z: &Array1<f64>,
) -> f64 {
    psi_values(problem, input, z.view())
        .unwrap()
        .iter()
        .map(|p| p.to_f64())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Exhaustive minimizer of `max_i ψ_i` for a [`QuadraticComposite`].
///
/// On every cell of the breakpoint arrangement of the regularizers each `ψ_i`
/// is the common quadratic `(ℓ/2)‖z − y‖²` plus an affine function, so the
/// minimizer solves `min ψ_a` subject to `ψ_i = ψ_a` for the active objectives
/// and the pinned coordinates. Every (cell, active set) pair is solved in
/// closed form and the candidate with the smallest true objective wins. Uses
/// only primal quantities.
pub fn brute_force_primal(p: &QuadraticComposite, input: &SubproblemInput) -> (Array1<f64>, f64) {
    let n = p.dim();
    let m = p.num_objectives();
    let ell = input.ell();
    let y = input.y_extrap().to_owned();
    let x = input.x_anchor().to_owned();
    let jac = p.smooth_jacobian(y.view());
    let fx: Vec<f64> = mopg::eval_objectives(p, x.view()).unwrap().to_f64();
    let offset = &p.smooth_values(y.view()) - &Array1::from(fx);
    let regs = p.regularizers();
    let constrained = regs.iter().any(|r| matches!(r, Regularizer::NonnegIndicator));

    // per coordinate: breakpoints, then cells as (pinned value or interior sample)
    let mut breaks: Vec<f64> = regs
        .iter()
        .filter_map(|r| match *r {
            Regularizer::L1 { scale, shift } if scale > 0.0 => Some(shift),
            _ => None,
        })
        .collect();
    if constrained {
        breaks.push(0.0);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    #[derive(Clone, Copy)]
    enum Cell {
        Pinned(f64),
        Open(f64),
    }
    let mut cells = Vec::new();
    let mut samples = Vec::new();
    if let (Some(first), Some(last)) = (breaks.first(), breaks.last()) {
        samples.push(first - 1.0);
        samples.extend(breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        samples.push(last + 1.0);
    } else {
        samples.push(0.0);
    }
    for s in samples {
        if !(constrained && s < 0.0) {
            cells.push(Cell::Open(s));
        }
    }
    for &b in &breaks {
        if !(constrained && b < 0.0) {
            cells.push(Cell::Pinned(b));
        }
    }

    let phi = |z: &Array1<f64>| primal_objective(p, input, z);
    let mut best = y.clone();
    let mut best_val = phi(&best);
    let total = cells.len().pow(n as u32);
    for combo in 0..total {
        // affine part a_i·z + e_i over the free coordinates
        let mut a = Array2::<f64>::zeros((m, n));
        let mut e = offset.clone() - jac.dot(&y);
        let mut pinned = vec![None; n];
        let mut rest = combo;
        for j in 0..n {
            let cell = cells[rest % cells.len()];
            rest /= cells.len();
            match cell {
                Cell::Pinned(v) => pinned[j] = Some(v),
                Cell::Open(_) => {}
            }
            for i in 0..m {
                let slope = match (regs[i], cell) {
                    (Regularizer::L1 { scale, shift }, Cell::Open(r)) => {
                        let sign = if r > shift { 1.0 } else { -1.0 };
                        e[i] -= scale * sign * shift;
                        scale * sign
                    }
                    (Regularizer::L1 { scale, shift }, Cell::Pinned(v)) => {
                        e[i] += scale * (v - shift).abs();
                        0.0
                    }
                    _ => 0.0,
                };
                match pinned[j] {
                    Some(v) => e[i] += jac[[i, j]] * v,
                    None => a[[i, j]] = jac[[i, j]] + slope,
                }
            }
        }
        // pinned coordinates are fixed; free ones minimize over the active set
        let free: Vec<usize> = (0..n).filter(|&j| pinned[j].is_none()).collect();
        for mask in 1u32..(1 << m) {
            let support: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            let lead = support[0];
            let rows: Vec<usize> = support[1..].to_vec();
            // z_F = y_F − (a_lead + Σ μ_k D_k)/ℓ with D_k = a_k − a_lead
            let d: Vec<Array1<f64>> = rows
                .iter()
                .map(|&k| free.iter().map(|&j| a[[k, j]] - a[[lead, j]]).collect())
                .collect();
            let a_lead: Array1<f64> = free.iter().map(|&j| a[[lead, j]]).collect();
            let y_f: Array1<f64> = free.iter().map(|&j| y[j]).collect();
            let r = rows.len();
            let mut gram = Array2::<f64>::zeros((r, r));
            let mut rhs = Array1::<f64>::zeros(r);
            for u in 0..r {
                for v in 0..r {
                    gram[[u, v]] = d[u].dot(&d[v]);
                }
                let target = e[lead] - e[rows[u]];
                rhs[u] = ell * d[u].dot(&y_f) - d[u].dot(&a_lead) - ell * target;
            }
            let Some(mu) = solve_small(gram, rhs) else { continue };
            let mut step = a_lead.clone();
            for u in 0..r {
                step = step + &d[u] * mu[u];
            }
            let mut z = Array1::zeros(n);
            for (idx, &j) in free.iter().enumerate() {
                z[j] = y_f[idx] - step[idx] / ell;
            }
            for j in 0..n {
                if let Some(v) = pinned[j] {
                    z[j] = v;
                }
            }
            let v = phi(&z);
            if v < best_val {
                best_val = v;
                best = z;
            }
        }
    }
    (best, best_val)
}

/// Gaussian elimination with partial pivoting for tiny systems.
fn solve_small(mut a: Array2<f64>, mut b: Array1<f64>) -> Option<Array1<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&p, &q| a[[p, c]].abs().total_cmp(&a[[q, c]].abs()))?;
        if a[[piv, c]].abs() < 1e-12 {
            return None;
        }
        for k in 0..n {
            a.swap([piv, k], [c, k]);
        }
        b.swap(piv, c);
        for r in c + 1..n {
            let f = a[[r, c]] / a[[c, c]];
            for k in c..n {
                a[[r, k]] -= f * a[[c, k]];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = Array1::zeros(n);
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|k| a[[r, k]] * x[k]).sum();
        x[r] = (b[r] - tail) / a[[r, r]];
    }
    Some(x)
}
