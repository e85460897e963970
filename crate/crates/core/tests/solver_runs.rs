mod common;

use common::{rng, uniform_point};
use mopg::merit::{u0_estimate, MeritConfig};
use mopg::problems::{jos1_pareto_distance, Fds, Jos1, Jos1L1};
use mopg::solvers::{run, Algorithm, SolverConfig, Status};
use mopg::{eval_objectives, MultiObjectiveProblem};
use ndarray::Array1;

const BOTH: [Algorithm; 2] = [Algorithm::Pgm, Algorithm::AccPgm];

#[test]
fn jos1_runs_end_on_the_pareto_segment() {
    let p = Jos1::new(4);
    let mut rng = rng(11);
    for _ in 0..10 {
        let x0 = uniform_point(&mut rng, 4, -2.0, 4.0);
        for alg in BOTH {
            let t = run(alg, &p, x0.view(), &SolverConfig::default()).unwrap();
            assert_eq!(t.status, Status::Converged);
            assert!(jos1_pareto_distance(t.final_point.view()) <= 1e-3);
        }
    }
}

#[test]
fn merit_vanishes_at_terminals_only() {
    let p = Jos1::new(2);
    let merit = MeritConfig::cube(2, -2.0, 4.0);
    let x0 = Array1::from(vec![3.5, -1.5]);
    for alg in BOTH {
        let t = run(alg, &p, x0.view(), &SolverConfig::default()).unwrap();
        assert!(u0_estimate(&p, t.final_point.view(), &merit).unwrap() <= 1e-3);
    }
    assert!(u0_estimate(&p, x0.view(), &merit).unwrap() >= 1e-3);
}

#[test]
fn jos1_l1_reaches_a_stationary_point() {
    let p = Jos1L1::new(3);
    let merit = MeritConfig::cube(3, -2.0, 4.0);
    let x0 = Array1::from(vec![2.0, -1.0, 3.0]);
    for alg in BOTH {
        let t = run(alg, &p, x0.view(), &SolverConfig::default()).unwrap();
        assert_eq!(t.status, Status::Converged);
        assert!(u0_estimate(&p, t.final_point.view(), &merit).unwrap() <= 1e-3);
    }
}

#[test]
fn fds_nonneg_stays_feasible() {
    let p = Fds::nonneg(5);
    let mut rng = rng(3);
    let x0 = uniform_point(&mut rng, 5, 0.0, 2.0);
    let cfg = SolverConfig { record_points: true, ..SolverConfig::default() };
    for alg in BOTH {
        let t = run(alg, &p, x0.view(), &cfg).unwrap();
        assert_eq!(t.status, Status::Converged);
        for k in 0..t.records.len() {
            let x = t.iterate(k).unwrap();
            assert!(x.iter().all(|&v| v >= 0.0));
            assert!(eval_objectives(&p, x).unwrap().to_finite().is_some());
        }
    }
}

#[test]
fn accelerated_run_is_faster_on_fds() {
    let p = Fds::new(10);
    let mut rng = rng(5);
    let x0 = uniform_point(&mut rng, 10, -2.0, 2.0);
    let cfg = SolverConfig::default();
    let pgm = run(Algorithm::Pgm, &p, x0.view(), &cfg).unwrap();
    let acc = run(Algorithm::AccPgm, &p, x0.view(), &cfg).unwrap();
    assert_eq!(acc.status, Status::Converged);
    assert!(acc.iterations < pgm.iterations);
    assert_eq!(p.num_objectives(), 3);
}

#[test]
fn infeasible_start_is_rejected() {
    let p = Fds::nonneg(3);
    let x0 = Array1::from(vec![1.0, -1.0, 1.0]);
    for alg in BOTH {
        assert!(run(alg, &p, x0.view(), &SolverConfig::default()).is_err());
    }
}
