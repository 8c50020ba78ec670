//! Black-box tests of the `sptrsv` binary: every subcommand is exercised
//! through a real process, checking exit codes, output, and written files.

use std::path::Path;
use std::process::{Command, Output};

fn sptrsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sptrsv"))
        .args(args)
        .env_remove("SPTRSV_WORKERS")
        .output()
        .expect("binary runs")
}

fn sptrsv_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sptrsv"))
        .args(args)
        .env_remove("SPTRSV_WORKERS")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn gen_writes_a_loadable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lap.mtx");
    let out = sptrsv(&["gen", "--grid", "6x5x4", "--stencil", "27", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("grid3d-6x5x4-27pt"));

    let a = sptrsv::read_matrix_market::<f64>(&path).unwrap();
    assert_eq!(a.n(), 120);
    // Interior points of a 27-point stencil see all 26 neighbors plus
    // themselves; boundary rows are shorter.
    assert!(a.nnz() > 120 && a.nnz() < 120 * 27);
}

#[test]
fn analyze_reports_level_structure() {
    let out = sptrsv(&["analyze", "--grid", "16x16", "--workers", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("unknowns: 256"));
    assert!(text.contains("lower factor: 31 levels"));
    assert!(text.contains("upper factor: 31 levels"));
    assert!(text.contains("level width histogram"));
}

#[test]
fn analyze_agrees_across_setup_modes() {
    let seq = sptrsv(&["analyze", "--grid", "9x7x5", "--setup", "seq", "--workers", "1"]);
    let kahn = sptrsv(&["analyze", "--grid", "9x7x5", "--setup", "kahn", "--workers", "3"]);
    assert!(seq.status.success() && kahn.status.success());
    // 9 + 7 + 5 - 2 level sets in both factors, whichever builder ran.
    for out in [&seq, &kahn] {
        assert!(stdout(out).contains("lower factor: 19 levels"), "{}", stdout(out));
    }
}

#[test]
fn workers_resolve_from_flag_then_env() {
    let from_env = sptrsv_with_env(&["analyze", "--grid", "4x4"], "SPTRSV_WORKERS", "3");
    assert!(from_env.status.success());
    assert!(stdout(&from_env).contains("workers: 3"));

    let flag_wins = sptrsv_with_env(
        &["analyze", "--grid", "4x4", "--workers", "2"],
        "SPTRSV_WORKERS",
        "3",
    );
    assert!(flag_wins.status.success());
    assert!(stdout(&flag_wins).contains("workers: 2"));

    let bad_env = sptrsv_with_env(&["analyze", "--grid", "4x4"], "SPTRSV_WORKERS", "soon");
    assert!(!bad_env.status.success());
    assert!(stderr(&bad_env).contains("SPTRSV_WORKERS"));
}

#[test]
fn solve_writes_a_verified_solution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solution.txt");
    let out = sptrsv(&[
        "solve", "--grid", "8x8", "--solver", "self-row", "--setup", "kahn",
        "--workers", "2", "--rhs", "random:5", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("verification: relative round-trip error"));

    let text = std::fs::read_to_string(&path).unwrap();
    let values: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 64);
    assert!(values.iter().all(|v| v.is_finite()));
}

#[test]
fn solve_factor_choices_differ() {
    let run = |factor: &str| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        let out = sptrsv(&[
            "solve", "--grid", "6x6", "--factor", factor, "--rhs", "random:9",
            "--workers", "1", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        std::fs::read_to_string(&path).unwrap()
    };
    let lower = run("lower");
    let upper = run("upper");
    let pair = run("pair");
    assert_ne!(lower, upper);
    assert_ne!(lower, pair);
}

#[test]
fn solve_verification_gate_fails_the_command() {
    // An impossible gate: relative error is nonnegative, so it can never
    // fall at or below -1.
    let out = sptrsv(&["solve", "--grid", "8x8", "--rhs", "random:2", "--verify-tol=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("verification failed"));
}

#[test]
fn unknown_solver_names_are_usage_errors() {
    let out = sptrsv(&["solve", "--grid", "4x4", "--solver", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("seq-row"), "{}", stderr(&out));
}

#[test]
fn grid_and_mtx_are_mutually_exclusive() {
    let out = sptrsv(&["analyze", "--grid", "4x4", "--mtx", "whatever.mtx"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_emits_csv_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let out = sptrsv(&[
        "bench", "--grid", "10x8", "--stencil", "5", "--solvers", "seq-row,level-row",
        "--setup", "kahn", "--workers", "2", "--runs", "2", "--rhs", "random:1",
        "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], sptrsv::CSV_COLUMNS.join(","));
    for (line, solver) in lines[1..].iter().zip(["seq-row", "level-row"]) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), sptrsv::CSV_COLUMNS.len());
        assert_eq!(cells[1], "grid2d-10x8-5pt");
        assert_eq!(cells[6], solver);
        let gflops: f64 = cells[9].parse().unwrap();
        assert!(gflops > 0.0 && gflops.is_finite());
        let ratio: f64 = cells[11].parse().unwrap();
        assert!(ratio >= 0.0 && ratio.is_finite());
    }
}

#[test]
fn bench_caps_the_grid_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("capped.csv");
    let out = sptrsv(&[
        "bench", "--table2", "--max-n", "300", "--runs", "1", "--solvers", "seq-row",
        "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        let n: usize = cells[2].parse().unwrap();
        assert!(n <= 300, "capped run produced n = {n}");
    }
}

#[test]
fn bench_failures_set_the_exit_code() {
    let out = sptrsv(&["bench", "--mtx", "/nonexistent/matrix.mtx", "--runs", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("failed:"));
}

#[test]
fn bench_requires_a_source() {
    let out = sptrsv(&["bench", "--runs", "1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--table2"));
}

#[test]
fn solution_files_round_trip_through_the_rhs_flag() {
    // Solve the lower system, feed the solution back as a right-hand side
    // for the upper system; this equals the pair solve exactly.
    let dir = tempfile::tempdir().unwrap();
    let mid = dir.path().join("mid.txt");
    let pair = dir.path().join("pair.txt");
    let final_x = dir.path().join("final.txt");

    let out = sptrsv(&[
        "solve", "--grid", "7x6", "--factor", "lower", "--rhs", "random:4",
        "--workers", "1", "--out", mid.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rhs_arg = format!("file:{}", mid.display());
    let out = sptrsv(&[
        "solve", "--grid", "7x6", "--factor", "upper", "--rhs", &rhs_arg,
        "--workers", "1", "--out", final_x.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = sptrsv(&[
        "solve", "--grid", "7x6", "--factor", "pair", "--rhs", "random:4",
        "--workers", "1", "--out", pair.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let read = |p: &Path| std::fs::read_to_string(p).unwrap();
    assert_eq!(read(&final_x), read(&pair));
}
