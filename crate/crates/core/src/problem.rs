//! Composite multiobjective problems `F_i = f_i + g_i`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// A composite multiobjective problem with `m` objectives on `ℝⁿ`.
///
/// Each `f_i` is convex and continuously differentiable, each `g_i` is closed,
/// proper and convex (possibly an indicator). Solvers only ever touch `g`
/// through [`nonsmooth_values`](Self::nonsmooth_values) and the weighted
/// proximal oracle, which must return `prox_{Σ w_i g_i}(v)`.
///
/// Implementations are immutable and shared between concurrent solver runs.
pub trait MultiObjectiveProblem: Send + Sync {
    fn num_objectives(&self) -> usize;

    fn dim(&self) -> usize;

    /// `f(x)`.
    fn smooth_values(&self, x: ArrayView1<f64>) -> Array1<f64>;

    /// The `m × n` Jacobian of `f`; row `i` is `∇f_i(x)`.
    fn smooth_jacobian(&self, x: ArrayView1<f64>) -> Array2<f64>;

    /// `g(x)`, with `+∞` outside the domain of an indicator-type term.
    fn nonsmooth_values(&self, x: ArrayView1<f64>) -> Vec<ExtReal>;

    /// `prox_{Σ_i w_i g_i}(v)` for nonnegative weights `w`.
    ///
    /// Must be non-expansive in `v`, return `v` for `w = 0`, and land in the
    /// domain of every `g_i` with `w_i > 0`.
    fn weighted_prox(&self, w: ArrayView1<f64>, v: ArrayView1<f64>) -> Array1<f64>;

    /// A known bound `L ≥ max_i L_i` on the gradient Lipschitz constants.
    ///
    /// Advisory; the solvers backtrack regardless.
    fn lipschitz_hint(&self) -> Option<f64> {
        None
    }
}

/// `F(x) = f(x) + g(x)`, one extended-real entry per objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<ExtReal>);

impl ObjectiveVector {
    pub fn new(values: Vec<ExtReal>) -> Self {
        ObjectiveVector(values)
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// The finite values, or `None` if any entry is `+∞`.
    pub fn to_finite(&self) -> Option<Array1<f64>> {
        self.0.iter().map(|v| v.finite()).collect::<Option<Vec<_>>>().map(Array1::from)
    }

    /// Entries as `f64`, `+∞` mapped to `f64::INFINITY`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.to_f64()).collect()
    }
}

impl std::ops::Index<usize> for ObjectiveVector {
    type Output = ExtReal;

    fn index(&self, i: usize) -> &ExtReal {
        &self.0[i]
    }
}

pub(crate) fn check_dim(problem: &dyn MultiObjectiveProblem, x: ArrayView1<f64>) -> Result<()> {
    if x.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Evaluates `F(x) = f(x) + g(x)`.
pub fn eval_objectives(
    problem: &dyn MultiObjectiveProblem,
    x: ArrayView1<f64>,
) -> Result<ObjectiveVector> {
    check_dim(problem, x)?;
    let f = problem.smooth_values(x);
    let g = problem.nonsmooth_values(x);
    let values = f
        .iter()
        .zip(g)
        .map(|(&fi, gi)| {
            if fi.is_nan() {
                Err(Error::NonFiniteValue("smooth objective"))
            } else {
                Ok(gi + fi)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObjectiveVector(values))
}

/// `Σ_i w_i g_i(x)` with `0 · ∞ = 0`.
pub fn weighted_nonsmooth(
    problem: &dyn MultiObjectiveProblem,
    w: ArrayView1<f64>,
    x: ArrayView1<f64>,
) -> ExtReal {
    problem
        .nonsmooth_values(x)
        .into_iter()
        .zip(w.iter())
        .fold(ExtReal::ZERO, |acc, (gi, &wi)| acc + gi.scale(wi))
}
