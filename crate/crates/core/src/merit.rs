//! Numerical oracles for the merit function
//! `u₀(x) = sup_z min_i F_i(x) − F_i(z)` and the rate constant `R`.
//!
//! `u₀` is nonnegative and vanishes exactly at weakly Pareto optimal points.
//! With `ℓ ≥ L`, PGM satisfies `u₀(x^k) ≤ ℓR/(2k)` and Acc-PGM satisfies
//! `u₀(x^k) ≤ 2ℓR/(k + 1)²`, where
//! `R = sup_{F* ∈ F(X* ∩ L(F(x⁰)))} inf_{z ∈ F⁻¹(F*)} ‖z − x⁰‖²`.
//!
//! Neither quantity has a computable closed form in general. The routines
//! here are best-effort estimates for small `n`, meant for tests and
//! diagnostics; no solver calls them.

use ndarray::{Array1, Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{eval_objectives, MultiObjectiveProblem};
use crate::subproblem::project_simplex;

#[derive(Debug, Clone, PartialEq)]
pub struct MeritConfig {
    /// Lower corner of the search box for `z`.
    pub lower: Array1<f64>,
    /// Upper corner of the search box for `z`.
    pub upper: Array1<f64>,
    /// Random starting points in addition to `x` and the box center.
    pub starts: usize,
    pub ascent_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl MeritConfig {
    /// The box `[lo, hi]ⁿ` with default budgets.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        MeritConfig {
            lower: Array1::from_elem(n, lo),
            upper: Array1::from_elem(n, hi),
            starts: 8,
            ascent_iterations: 400,
            tolerance: 1e-9,
            seed: 0,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ok = self.lower.len() == n
            && self.upper.len() == n
            && self.lower.iter().zip(self.upper.iter()).all(|(a, b)| a <= b)
            && self.ascent_iterations >= 1
            && self.tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig("merit search box or budget".into()))
        }
    }

    fn clip(&self, z: &mut Array1<f64>) {
        for ((v, &lo), &hi) in z.iter_mut().zip(self.lower.iter()).zip(self.upper.iter()) {
            *v = v.clamp(lo, hi);
        }
    }
}

/// `min_i F_i(x) − F_i(z)`, `−∞` outside `dom F`.
struct Inner<'a> {
    problem: &'a dyn MultiObjectiveProblem,
    fx: Array1<f64>,
}

impl Inner<'_> {
    fn terms(&self, z: ArrayView1<f64>) -> Option<Array1<f64>> {
        let fz = eval_objectives(self.problem, z).ok()?.to_finite()?;
        Some(&self.fx - &fz)
    }

    fn value(&self, z: ArrayView1<f64>) -> f64 {
        self.terms(z)
            .map_or(f64::NEG_INFINITY, |t| t.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Gradients of `F_i(x) − F_i(z)` in `z`: the smooth Jacobian plus a
    /// central difference of the nonsmooth part.
    fn gradients(&self, z: ArrayView1<f64>) -> Array2<f64> {
        let mut jac = -self.problem.smooth_jacobian(z);
        let h = 1e-7;
        let mut zp = z.to_owned();
        for j in 0..z.len() {
            let orig = zp[j];
            zp[j] = orig + h;
            let gp = self.problem.nonsmooth_values(zp.view());
            zp[j] = orig - h;
            let gm = self.problem.nonsmooth_values(zp.view());
            zp[j] = orig;
            for i in 0..jac.nrows() {
                if let (Some(a), Some(b)) = (gp[i].finite(), gm[i].finite()) {
                    jac[[i, j]] -= (a - b) / (2.0 * h);
                }
            }
        }
        jac
    }
}

/// Minimum-norm point of the convex hull of the rows of `g`.
fn min_norm_combination(g: &Array2<f64>) -> Array1<f64> {
    let k = g.nrows();
    if k == 1 {
        return g.row(0).to_owned();
    }
    let gram = g.dot(&g.t());
    let lip = gram.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    let mut mu = Array1::from_elem(k, 1.0 / k as f64);
    for _ in 0..500 {
        let grad = gram.dot(&mu);
        let next = project_simplex((&mu - &(grad / lip)).view());
        let done = (&next.weights() - &mu).iter().all(|d| d.abs() < 1e-15);
        mu = next.weights().to_owned();
        if done {
            break;
        }
    }
    g.t().dot(&mu)
}

fn ascend(inner: &Inner, cfg: &MeritConfig, mut z: Array1<f64>) -> (Array1<f64>, f64) {
    let mut val = inner.value(z.view());
    if !val.is_finite() {
        return (z, val);
    }
    let mut slack = 1e-2;
    let mut step = 1.0;
    for _ in 0..cfg.ascent_iterations {
        let Some(terms) = inner.terms(z.view()) else { break };
        let grads = inner.gradients(z.view());
        let active: Vec<usize> = (0..terms.len()).filter(|&i| terms[i] <= val + slack).collect();
        let g = grads.select(ndarray::Axis(0), &active);
        let d = min_norm_combination(&g);
        if d.dot(&d).sqrt() < 1e-12 {
            if slack < cfg.tolerance {
                break;
            }
            slack *= 0.1;
            continue;
        }
        let mut alpha = step;
        let mut moved = false;
        while alpha > 1e-14 {
            let mut cand = &z + &(&d * alpha);
            cfg.clip(&mut cand);
            let cv = inner.value(cand.view());
            if cv > val {
                z = cand;
                val = cv;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if moved {
            step = (alpha * 2.0).min(1e3);
        } else {
            if slack < cfg.tolerance {
                break;
            }
            slack *= 0.1;
            step = 1.0;
        }
    }
    (z, val)
}

/// Compass search over coordinate and pairwise-diagonal directions.
fn pattern_search(inner: &Inner, cfg: &MeritConfig, mut z: Array1<f64>, mut val: f64) -> f64 {
    let n = z.len();
    let mut dirs: Vec<Array1<f64>> = Vec::new();
    for j in 0..n {
        let mut e = Array1::zeros(n);
        e[j] = 1.0;
        dirs.push(e.clone());
        dirs.push(-e);
        for k in (j + 1)..n {
            for sign in [1.0, -1.0] {
                let mut d = Array1::zeros(n);
                d[j] = std::f64::consts::FRAC_1_SQRT_2;
                d[k] = sign * std::f64::consts::FRAC_1_SQRT_2;
                dirs.push(d.clone());
                dirs.push(-d);
            }
        }
    }
    let mut h = 0.1;
    while h > 1e-10 {
        let mut improved = false;
        for d in &dirs {
            let mut cand = &z + &(d * h);
            cfg.clip(&mut cand);
            let cv = inner.value(cand.view());
            if cv > val {
                z = cand;
                val = cv;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    val
}

/// Lower estimate of `u₀(x)` over the configured box.
///
/// Multistart ascent along the minimum-norm element of the active gradients,
/// polished by a pattern search. The value at `z = x` is `0`, so the result
/// is never negative.
pub fn u0_estimate(
    problem: &dyn MultiObjectiveProblem,
    x: ArrayView1<f64>,
    cfg: &MeritConfig,
) -> Result<f64> {
    let n = problem.dim();
    cfg.validate(n)?;
    let fx = eval_objectives(problem, x)?
        .to_finite()
        .ok_or(Error::InfeasibleStart)?;
    let inner = Inner { problem, fx };

    let mut starts = Vec::with_capacity(cfg.starts + 2);
    let mut x0 = x.to_owned();
    cfg.clip(&mut x0);
    starts.push(x0);
    starts.push((&cfg.lower + &cfg.upper) * 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.starts {
        starts.push(
            cfg.lower
                .iter()
                .zip(cfg.upper.iter())
                .map(|(&lo, &hi)| if lo < hi { rng.gen_range(lo..hi) } else { lo })
                .collect(),
        );
    }

    let mut best = 0.0f64;
    for z in starts {
        let (z, val) = ascend(&inner, cfg, z);
        if !val.is_finite() {
            continue;
        }
        best = best.max(pattern_search(&inner, cfg, z, val));
    }
    Ok(best)
}

/// A parametric description of a problem's weakly Pareto optimal set.
#[derive(Debug, Clone, PartialEq)]
pub enum ParetoHint {
    /// The segment `[from, to]`; each of its points is the only preimage of
    /// its objective vector.
    Segment { from: Array1<f64>, to: Array1<f64> },
}

/// Estimate of `R` by discretizing the Pareto set hint.
///
/// Keeps the sampled Pareto points whose objective vector is dominated by
/// `F(x⁰)` and returns the largest squared distance to `x⁰`; `0` when the
/// only such point is `x⁰` itself or none is sampled.
pub fn rate_constant(
    problem: &dyn MultiObjectiveProblem,
    x0: ArrayView1<f64>,
    hint: Option<&ParetoHint>,
) -> Result<f64> {
    let Some(ParetoHint::Segment { from, to }) = hint else {
        return Err(Error::Unsupported("rate constant needs a Pareto set hint".into()));
    };
    let f0 = eval_objectives(problem, x0)?
        .to_finite()
        .ok_or(Error::InfeasibleStart)?;
    let samples = 20_000;
    let mut r = 0.0f64;
    for s in 0..=samples {
        let t = s as f64 / samples as f64;
        let p = from + &((to - from) * t);
        let Some(fp) = eval_objectives(problem, p.view())?.to_finite() else {
            continue;
        };
        let in_level_set = fp
            .iter()
            .zip(f0.iter())
            .all(|(a, b)| *a <= b + 1e-12 * (1.0 + b.abs()));
        if in_level_set {
            let d = &p - &x0;
            r = r.max(d.dot(&d));
        }
    }
    Ok(r)
}
