//! Proximal gradient methods for convex composite multiobjective problems
//!
//! ```text
//! min_x  F(x) = (f_1(x) + g_1(x), …, f_m(x) + g_m(x))
//! ```
//!
//! with smooth convex `f_i` and closed proper convex (possibly nonsmooth or
//! indicator-valued) `g_i`. The crate provides
//!
//! - the problem model and proximal toolkit ([`problem`], [`prox`]),
//! - the per-iteration subproblem solved through its dual over the simplex
//!   ([`subproblem`]),
//! - the proximal gradient method and its accelerated variant ([`solvers`]),
//! - merit-function and rate-constant oracles for checking convergence rates
//!   ([`merit`]),
//! - the benchmark problems and harness ([`problems`], [`bench`]).
//!
//! ```
//! use mopg::problems::Jos1;
//! use mopg::solvers::{run_accpgm, SolverConfig, Status};
//! use ndarray::Array1;
//!
//! let problem = Jos1::new(10);
//! let x0 = Array1::from_elem(10, 3.5);
//! let trace = run_accpgm(&problem, x0.view(), &SolverConfig::default()).unwrap();
//! assert_eq!(trace.status, Status::Converged);
//! ```
//!
//! The guide in `book/` walks through the mathematics; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod bench;
pub mod error;
pub mod ext;
pub mod merit;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod solvers;
pub mod subproblem;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub use problem::{eval_objectives, MultiObjectiveProblem, ObjectiveVector};

// Runs the code listings of the guide as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/proximal.md")]
    mod proximal {}
    #[doc = include_str!("../../../book/src/subproblem.md")]
    mod subproblem {}
    #[doc = include_str!("../../../book/src/methods.md")]
    mod methods {}
    #[doc = include_str!("../../../book/src/merit.md")]
    mod merit {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
