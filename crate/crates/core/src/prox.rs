//! Proximal operators and Moreau envelopes.
//!
//! For a closed proper convex `h`, `prox_h(v) = argmin_y h(y) + ½‖v − y‖²`
//! and the Moreau envelope `env_h(v)` is the optimal value of that problem.
//! The envelope is differentiable even when `h` is not, with
//! `∇ env_h(v) = v − prox_h(v)`.

use ndarray::{Array1, ArrayView1};

use crate::ext::ExtReal;
use crate::problem::{weighted_nonsmooth, MultiObjectiveProblem};

/// Soft-thresholding, the proximal operator of `τ|·|`.
pub fn soft_threshold(x: f64, tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if x >= tau {
        x - tau
    } else if x > -tau {
        0.0
    } else {
        x + tau
    }
}

/// Projection onto the nonnegative orthant.
pub fn project_nonneg(v: ArrayView1<f64>) -> Array1<f64> {
    v.mapv(|vi| vi.max(0.0))
}

/// `env_h(v)` for `h = Σ_i w_i g_i`, evaluated through the problem's prox.
///
/// Infinite only if the prox oracle breaks its contract.
pub fn moreau_envelope_value(
    problem: &dyn MultiObjectiveProblem,
    w: ArrayView1<f64>,
    v: ArrayView1<f64>,
) -> ExtReal {
    let z = problem.weighted_prox(w, v);
    let dist2 = (&v - &z).mapv(|d| d * d).sum();
    weighted_nonsmooth(problem, w, z.view()) + 0.5 * dist2
}

/// Exact prox of a separable 1-D piecewise-linear function.
///
/// Minimizes `Σ_j a_j |y − s_j| + ½(y − v)²` over `y ≥ 0` when `nonneg` is
/// set and over `ℝ` otherwise. All `a_j` must be nonnegative.
pub fn prox_abs_sum_1d(v: f64, kinks: &[(f64, f64)], nonneg: bool) -> f64 {
    // The objective's subdifferential is monotone; walk the breakpoints and
    // find where it brackets zero.
    let mut pts: Vec<(f64, f64)> = kinks.iter().copied().filter(|&(a, _)| a > 0.0).collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));

    // derivative of the linear part on the open interval right of breakpoint
    // index `k` (k = 0 means left of every breakpoint)
    let total: f64 = pts.iter().map(|p| p.0).sum();
    let mut slope_left = -total;
    let lower = if nonneg { 0.0 } else { f64::NEG_INFINITY };

    let mut prev = f64::NEG_INFINITY;
    for k in 0..=pts.len() {
        let next = if k < pts.len() { pts[k].1 } else { f64::INFINITY };
        // stationary point of the smooth piece on (prev, next)
        let cand = v - slope_left;
        if cand > prev && cand < next {
            return cand.max(lower);
        }
        if k < pts.len() {
            let slope_right = slope_left + 2.0 * pts[k].0;
            // 0 ∈ [slope_left, slope_right] + (s_k − v)
            let lo = slope_left + next - v;
            let hi = slope_right + next - v;
            if lo <= 0.0 && hi >= 0.0 {
                return next.max(lower);
            }
            slope_left = slope_right;
        }
        prev = next;
    }
    // unreachable for finite input; the loop always brackets zero
    v.max(lower)
}
