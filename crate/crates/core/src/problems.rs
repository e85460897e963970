//! Benchmark problems and a general quadratic-composite family.
//!
//! | id           | m | f                              | g                          | start box   |
//! |--------------|---|--------------------------------|----------------------------|-------------|
//! | `jos1`       | 2 | `‖x‖²/n`, `‖x − 2‖²/n`          | `0`                        | `[−2, 4]ⁿ`  |
//! | `jos1-l1`    | 2 | as `jos1`                      | `‖x‖₁/n`, `‖x − 1‖₁/(2n)`  | `[−2, 4]ⁿ`  |
//! | `fds`        | 3 | quartic, exp + quadratic, exp  | `0`                        | `[−2, 2]ⁿ`  |
//! | `fds-nonneg` | 3 | as `fds`                       | indicator of `ℝⁿ₊`         | `[0, 2]ⁿ`   |

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::merit::ParetoHint;
use crate::problem::MultiObjectiveProblem;
use crate::prox::{prox_abs_sum_1d, project_nonneg, soft_threshold};

/// Identifier of a shipped benchmark problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    Jos1,
    Jos1L1,
    Fds,
    FdsNonneg,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [
        ProblemId::Jos1,
        ProblemId::Jos1L1,
        ProblemId::Fds,
        ProblemId::FdsNonneg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Jos1 => "jos1",
            ProblemId::Jos1L1 => "jos1-l1",
            ProblemId::Fds => "fds",
            ProblemId::FdsNonneg => "fds-nonneg",
        }
    }

    /// Per-coordinate bounds `(b̲, b̄)` for random starting points.
    pub fn start_box(self) -> (f64, f64) {
        match self {
            ProblemId::Jos1 | ProblemId::Jos1L1 => (-2.0, 4.0),
            ProblemId::Fds => (-2.0, 2.0),
            ProblemId::FdsNonneg => (0.0, 2.0),
        }
    }

    pub fn num_objectives(self) -> usize {
        match self {
            ProblemId::Jos1 | ProblemId::Jos1L1 => 2,
            ProblemId::Fds | ProblemId::FdsNonneg => 3,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown problem `{s}`")))
    }
}

/// A benchmark problem id together with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub n: usize,
}

impl ProblemSpec {
    pub fn new(id: ProblemId, n: usize) -> Self {
        ProblemSpec { id, n }
    }

    pub fn start_box(&self) -> (f64, f64) {
        self.id.start_box()
    }

    pub fn build(&self) -> Box<dyn MultiObjectiveProblem> {
        match self.id {
            ProblemId::Jos1 => Box::new(Jos1::new(self.n)),
            ProblemId::Jos1L1 => Box::new(Jos1L1::new(self.n)),
            ProblemId::Fds => Box::new(Fds::new(self.n)),
            ProblemId::FdsNonneg => Box::new(Fds::nonneg(self.n)),
        }
    }
}

fn jos1_values(x: ArrayView1<f64>) -> Array1<f64> {
    let n = x.len() as f64;
    let f1 = x.iter().map(|v| v * v).sum::<f64>() / n;
    let f2 = x.iter().map(|v| (v - 2.0).powi(2)).sum::<f64>() / n;
    Array1::from(vec![f1, f2])
}

fn jos1_jacobian(x: ArrayView1<f64>) -> Array2<f64> {
    let n = x.len();
    let s = 2.0 / n as f64;
    let mut jac = Array2::zeros((2, n));
    for (j, &v) in x.iter().enumerate() {
        jac[[0, j]] = s * v;
        jac[[1, j]] = s * (v - 2.0);
    }
    jac
}

/// Two convex quadratics with minimizers `0` and `2·1`; `g = 0`.
#[derive(Debug, Clone)]
pub struct Jos1 {
    n: usize,
}

impl Jos1 {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Jos1 { n }
    }
}

impl MultiObjectiveProblem for Jos1 {
    fn num_objectives(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn smooth_values(&self, x: ArrayView1<f64>) -> Array1<f64> {
        jos1_values(x)
    }

    fn smooth_jacobian(&self, x: ArrayView1<f64>) -> Array2<f64> {
        jos1_jacobian(x)
    }

    fn nonsmooth_values(&self, _x: ArrayView1<f64>) -> Vec<ExtReal> {
        vec![ExtReal::ZERO; 2]
    }

    fn weighted_prox(&self, _w: ArrayView1<f64>, v: ArrayView1<f64>) -> Array1<f64> {
        v.to_owned()
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        Some(2.0 / self.n as f64)
    }
}

/// [`Jos1`] plus `g₁ = ‖x‖₁/n` and `g₂ = ‖x − 1‖₁/(2n)`.
#[derive(Debug, Clone)]
pub struct Jos1L1 {
    n: usize,
}

impl Jos1L1 {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Jos1L1 { n }
    }
}

impl MultiObjectiveProblem for Jos1L1 {
    fn num_objectives(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn smooth_values(&self, x: ArrayView1<f64>) -> Array1<f64> {
        jos1_values(x)
    }

    fn smooth_jacobian(&self, x: ArrayView1<f64>) -> Array2<f64> {
        jos1_jacobian(x)
    }

    fn nonsmooth_values(&self, x: ArrayView1<f64>) -> Vec<ExtReal> {
        let n = self.n as f64;
        let g1 = x.iter().map(|v| v.abs()).sum::<f64>() / n;
        let g2 = x.iter().map(|v| (v - 1.0).abs()).sum::<f64>() / (2.0 * n);
        vec![ExtReal::Finite(g1), ExtReal::Finite(g2)]
    }

    /// Closed form for `prox_{w₁g₁ + w₂g₂}`: nested soft-thresholding,
    /// `O_b(O_a(v + b) − b − 1) + 1` with `a = w₁/n`, `b = w₂/(2n)`.
    fn weighted_prox(&self, w: ArrayView1<f64>, v: ArrayView1<f64>) -> Array1<f64> {
        let n = self.n as f64;
        let a = w[0] / n;
        let b = w[1] / (2.0 * n);
        v.mapv(|vi| soft_threshold(soft_threshold(vi + b, a) - b - 1.0, b) + 1.0)
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        Some(2.0 / self.n as f64)
    }
}

/// The tri-objective problem with a quartic, an exponential-plus-quadratic and
/// a weighted sum of decaying exponentials.
///
/// The `nonneg` variant adds the indicator of the nonnegative orthant to every
/// objective.
#[derive(Debug, Clone)]
pub struct Fds {
    n: usize,
    nonneg: bool,
}

impl Fds {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Fds { n, nonneg: false }
    }

    pub fn nonneg(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Fds { n, nonneg: true }
    }
}

impl MultiObjectiveProblem for Fds {
    fn num_objectives(&self) -> usize {
        3
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn smooth_values(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let n = self.n as f64;
        let mut f1 = 0.0;
        let mut f3 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            let i = (j + 1) as f64;
            f1 += i * (v - i).powi(4);
            f3 += i * (n - i + 1.0) * (-v).exp();
        }
        f1 /= n * n;
        f3 /= n * (n + 1.0);
        let f2 = (x.sum() / n).exp() + x.dot(&x);
        Array1::from(vec![f1, f2, f3])
    }

    fn smooth_jacobian(&self, x: ArrayView1<f64>) -> Array2<f64> {
        let n = self.n as f64;
        let e = (x.sum() / n).exp() / n;
        let mut jac = Array2::zeros((3, self.n));
        for (j, &v) in x.iter().enumerate() {
            let i = (j + 1) as f64;
            jac[[0, j]] = 4.0 * i / (n * n) * (v - i).powi(3);
            jac[[1, j]] = e + 2.0 * v;
            jac[[2, j]] = -i * (n - i + 1.0) / (n * (n + 1.0)) * (-v).exp();
        }
        jac
    }

    fn nonsmooth_values(&self, x: ArrayView1<f64>) -> Vec<ExtReal> {
        let g = if self.nonneg && x.iter().any(|&v| v < 0.0) {
            ExtReal::PosInf
        } else {
            ExtReal::ZERO
        };
        vec![g; 3]
    }

    fn weighted_prox(&self, w: ArrayView1<f64>, v: ArrayView1<f64>) -> Array1<f64> {
        if self.nonneg && w.iter().any(|&wi| wi > 0.0) {
            project_nonneg(v)
        } else {
            v.to_owned()
        }
    }
}

/// A nonsmooth term for [`QuadraticComposite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularizer {
    Zero,
    /// `scale · ‖x − shift·1‖₁`, `scale ≥ 0`.
    L1 { scale: f64, shift: f64 },
    /// Indicator of the nonnegative orthant.
    NonnegIndicator,
}

impl Regularizer {
    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        match *self {
            Regularizer::Zero => ExtReal::ZERO,
            Regularizer::L1 { scale, shift } => {
                ExtReal::Finite(scale * x.iter().map(|v| (v - shift).abs()).sum::<f64>())
            }
            Regularizer::NonnegIndicator => {
                if x.iter().all(|&v| v >= 0.0) {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
        }
    }
}

/// `f_i(x) = ½xᵀA_i x + b_iᵀx + c_i` with separable regularizers `g_i`.
///
/// Any mix of [`Regularizer`]s has an exact weighted prox, computed
/// coordinatewise from the breakpoints of the combined `ℓ₁` terms.
#[derive(Debug, Clone)]
pub struct QuadraticComposite {
    hessians: Vec<Array2<f64>>,
    linear: Vec<Array1<f64>>,
    constants: Vec<f64>,
    regularizers: Vec<Regularizer>,
}

impl QuadraticComposite {
    /// Panics if the pieces disagree in count or dimension.
    pub fn new(
        hessians: Vec<Array2<f64>>,
        linear: Vec<Array1<f64>>,
        constants: Vec<f64>,
        regularizers: Vec<Regularizer>,
    ) -> Self {
        let m = hessians.len();
        assert!(m >= 1);
        assert!(linear.len() == m && constants.len() == m && regularizers.len() == m);
        let n = linear[0].len();
        for (a, b) in hessians.iter().zip(&linear) {
            assert_eq!(a.dim(), (n, n));
            assert_eq!(b.len(), n);
        }
        QuadraticComposite {
            hessians,
            linear,
            constants,
            regularizers,
        }
    }

    pub fn regularizers(&self) -> &[Regularizer] {
        &self.regularizers
    }
}

impl MultiObjectiveProblem for QuadraticComposite {
    fn num_objectives(&self) -> usize {
        self.hessians.len()
    }

    fn dim(&self) -> usize {
        self.linear[0].len()
    }

    fn smooth_values(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.hessians
            .iter()
            .zip(&self.linear)
            .zip(&self.constants)
            .map(|((a, b), c)| 0.5 * x.dot(&a.dot(&x)) + b.dot(&x) + c)
            .collect()
    }

    fn smooth_jacobian(&self, x: ArrayView1<f64>) -> Array2<f64> {
        let mut jac = Array2::zeros((self.num_objectives(), self.dim()));
        for (i, (a, b)) in self.hessians.iter().zip(&self.linear).enumerate() {
            jac.row_mut(i).assign(&(a.dot(&x) + b));
        }
        jac
    }

    fn nonsmooth_values(&self, x: ArrayView1<f64>) -> Vec<ExtReal> {
        self.regularizers.iter().map(|r| r.value(x)).collect()
    }

    fn weighted_prox(&self, w: ArrayView1<f64>, v: ArrayView1<f64>) -> Array1<f64> {
        let mut kinks = Vec::new();
        let mut nonneg = false;
        for (r, &wi) in self.regularizers.iter().zip(w.iter()) {
            if wi <= 0.0 {
                continue;
            }
            match *r {
                Regularizer::Zero => {}
                Regularizer::L1 { scale, shift } => kinks.push((wi * scale, shift)),
                Regularizer::NonnegIndicator => nonneg = true,
            }
        }
        v.mapv(|vi| prox_abs_sum_1d(vi, &kinks, nonneg))
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        // Frobenius norm bounds the spectral norm
        self.hessians
            .iter()
            .map(|a| a.iter().map(|v| v * v).sum::<f64>().sqrt())
            .reduce(f64::max)
    }
}

/// Euclidean distance from `x` to the weakly Pareto optimal set of `jos1`,
/// the segment `{c·1 : c ∈ [0, 2]}`.
pub fn jos1_pareto_distance(x: ArrayView1<f64>) -> f64 {
    let c = x.mean().unwrap_or(0.0).clamp(0.0, 2.0);
    x.iter().map(|v| (v - c).powi(2)).sum::<f64>().sqrt()
}

/// The `jos1` Pareto set as a segment hint for [`crate::merit::rate_constant`].
pub fn jos1_pareto_hint(n: usize) -> ParetoHint {
    ParetoHint::Segment {
        from: Array1::zeros(n),
        to: Array1::from_elem(n, 2.0),
    }
}

#[cfg(test)]
mod tests {
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::problem::eval_objectives;
    use crate::testing::{fd_gradient, grid_argmin_1d, rel_err};

    fn shipped(n: usize) -> Vec<(ProblemId, Box<dyn MultiObjectiveProblem>)> {
        ProblemId::ALL
            .into_iter()
            .map(|id| (id, ProblemSpec::new(id, n).build()))
            .collect()
    }

    #[test]
    fn ids_round_trip() {
        for id in ProblemId::ALL {
            assert_eq!(id.as_str().parse::<ProblemId>().unwrap(), id);
        }
        assert!("zdt1".parse::<ProblemId>().is_err());
    }

    #[test]
    fn jos1_values_and_gradient() {
        let n = 50;
        let p = Jos1::new(n);
        let one = Array1::from_elem(n, 1.0);
        assert_eq!(eval_objectives(&p, one.view()).unwrap().to_f64(), vec![1.0, 1.0]);
        let jac = p.smooth_jacobian(one.view());
        for &g in jac.row(0) {
            assert!((g - 2.0 / n as f64).abs() < 1e-15);
        }
        let fd = fd_gradient(|x| p.smooth_values(x)[0], one.view(), 1e-6);
        for (&a, &b) in fd.iter().zip(jac.row(0)) {
            assert!(rel_err(a, b) < 1e-8);
        }
    }

    #[test]
    fn fds_at_origin() {
        let p = Fds::new(1);
        let f = p.smooth_values(array![0.0].view());
        assert!((f[0] - 1.0).abs() < 1e-15);
        assert!((f[1] - 1.0).abs() < 1e-15);
        assert!((f[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fds_nonneg_prox() {
        let p = Fds::nonneg(2);
        let w = array![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        assert_eq!(p.weighted_prox(w.view(), array![-1.0, 2.0].view()), array![0.0, 2.0]);
        assert_eq!(p.weighted_prox(w.view(), array![0.5, 2.0].view()), array![0.5, 2.0]);
        assert_eq!(
            p.weighted_prox(array![0.0, 0.0, 0.0].view(), array![-1.0, 2.0].view()),
            array![-1.0, 2.0]
        );
    }

    #[test]
    fn jos1_l1_prox_examples() {
        let p = Jos1L1::new(1);
        // zero weights: identity up to the rounding of the ±1 shifts
        let z = p.weighted_prox(array![0.0, 0.0].view(), array![-0.3].view());
        assert!((z[0] + 0.3).abs() < 1e-15);
        let z = p.weighted_prox(array![1.0, 0.0].view(), array![2.5].view());
        assert!((z[0] - 1.5).abs() < 1e-15);
        assert_eq!(z[0], soft_threshold(2.5, 1.0));

        let z = p.weighted_prox(array![0.4, 0.6].view(), array![-0.2].view());
        let y = grid_argmin_1d(
            |y| 0.4 * y.abs() + 0.3 * (y - 1.0).abs() + 0.5 * (y + 0.2).powi(2),
            -5.0,
            5.0,
        );
        assert!((z[0] - y).abs() < 1e-6, "{} vs {}", z[0], y);
    }

    #[test]
    fn pareto_distance() {
        assert_eq!(jos1_pareto_distance(array![1.0, 1.0, 1.0].view()), 0.0);
        assert_eq!(jos1_pareto_distance(array![3.0].view()), 1.0);
        let d = jos1_pareto_distance(array![0.0, 2.0].view());
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5] {
            for (id, p) in shipped(n) {
                let (lo, hi) = id.start_box();
                for _ in 0..100 {
                    let x: Array1<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
                    let jac = p.smooth_jacobian(x.view());
                    for i in 0..p.num_objectives() {
                        let fd = fd_gradient(|z| p.smooth_values(z)[i], x.view(), 1e-6);
                        for (&a, &b) in fd.iter().zip(jac.row(i)) {
                            assert!(rel_err(a, b) < 1e-5, "{id} f{i}: fd {a} vs {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f3_is_positive() {
        let p = Fds::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x: Array1<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert!(p.smooth_values(x.view())[2] > 0.0);
        }
    }

    #[test]
    fn convexity_probe() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (id, p) in shipped(3) {
            let (lo, hi) = id.start_box();
            for _ in 0..200 {
                let x: Array1<f64> = (0..3).map(|_| rng.gen_range(lo..=hi)).collect();
                let y: Array1<f64> = (0..3).map(|_| rng.gen_range(lo..=hi)).collect();
                let a: f64 = rng.gen_range(0.0..1.0);
                let mid = &x * a + &y * (1.0 - a);
                let fx = eval_objectives(p.as_ref(), x.view()).unwrap().to_f64();
                let fy = eval_objectives(p.as_ref(), y.view()).unwrap().to_f64();
                let fm = eval_objectives(p.as_ref(), mid.view()).unwrap().to_f64();
                for i in 0..fx.len() {
                    let bound = a * fx[i] + (1.0 - a) * fy[i];
                    assert!(fm[i] <= bound + 1e-9 * (1.0 + bound.abs()), "{id} F{i}");
                }
            }
        }
    }
}
