use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mopg::bench::read_csv;

fn mopg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mopg")).args(args).output().unwrap()
}

fn bench(dir: &Path, extra: &[&str]) -> Output {
    let out = dir.join("runs.csv");
    let front = dir.join("front.csv");
    let mut args = vec![
        "bench",
        "--problem",
        "jos1",
        "--n",
        "3",
        "--starts",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--front-out",
        front.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    mopg(&args)
}

#[test]
fn converged_benchmark_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces");
    let summary = dir.path().join("summary.csv");
    let output = bench(
        dir.path(),
        &["--trace-dir", traces.to_str().unwrap(), "--summary-out", summary.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));

    let records = read_csv(&dir.path().join("runs.csv")).unwrap();
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r.converged() && r.n == 3 && r.seed == 42));

    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert!(runs.starts_with(
        "problem,algorithm,n,start_id,seed,iterations,backtracks,final_ell,wall_time_ms,residual_inf,F1,F2,status\n"
    ));
    let front = fs::read_to_string(dir.path().join("front.csv")).unwrap();
    assert_eq!(front.lines().count(), 7);
    assert_eq!(fs::read_dir(&traces).unwrap().count(), 6);
    assert!(summary.exists());
    assert!(String::from_utf8_lossy(&output.stdout).contains("acc"));
}

#[test]
fn non_converged_starts_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let output = bench(dir.path(), &["--max-iter", "2", "--alg", "pgm"]);
    assert_eq!(output.status.code(), Some(2));
    let records = read_csv(&dir.path().join("runs.csv")).unwrap();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| !r.converged()));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mopg(&["bench", "--problem", "nope"]).status.code(), Some(1));
    assert_eq!(mopg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bench(dir.path(), &["--eps", "-1"]).status.code(), Some(1));
    assert_eq!(bench(dir.path(), &["--starts", "0"]).status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("runs.csv");
    let front = dir.path().join("front.csv");
    let output = mopg(&[
        "bench", "--problem", "jos1", "--n", "2", "--starts", "1",
        "--out", bad.to_str().unwrap(), "--front-out", front.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(mopg(&["--help"]).status.code(), Some(0));
    assert_eq!(mopg(&["bench", "--help"]).status.code(), Some(0));
    assert_eq!(mopg(&["--version"]).status.code(), Some(0));
}
