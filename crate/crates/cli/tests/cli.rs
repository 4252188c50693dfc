//! End-to-end checks of the command-line surface: output formats, exit
//! codes, cache persistence, and thread-count independence.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubewaring"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn residues_mod_nine_row() {
    assert_eq!(stdout(&["cubes", "residues", "--mod", "9"]), "0,1,2,3,6,7,8\n");
}

#[test]
fn rho_at_two() {
    let line = stdout(&["smooth", "rho", "--x", "2"]);
    let v: f64 = line.trim().parse().unwrap();
    assert!((v - (1.0 - 2f64.ln())).abs() < 1e-8);
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["cubes", "residues", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_error_exits_three() {
    let out = run(&["cubes", "build", "--limit", "99999999999"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validation_error_exits_two() {
    let out = run(&["smooth", "psi", "--bound", "10", "--u", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_round_trip_and_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["cubes", "build", "--limit", "50000", "--counts"])
        .env("CUBEWARING_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let path = dir.path().join("cube-cache-50000.bin");
    assert!(path.exists(), "cache written into the env dir");
    let row = stdout(&["cubes", "query", "--n", "10", "--cache", path.to_str().unwrap()]);
    assert_eq!(row, "10,1,3\n");
    let row = stdout(&["cubes", "query", "--n", "4", "--cache", path.to_str().unwrap()]);
    assert_eq!(row, "4,0,0\n");
    // the flag overrides the environment
    let flag_dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["cubes", "build", "--limit", "1000"])
        .arg("--cache-dir")
        .arg(flag_dir.path())
        .env("CUBEWARING_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_dir.path().join("cube-cache-1000.bin").exists());
    assert!(!dir.path().join("cube-cache-1000.bin").exists());
}

fn file_bytes(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn cache_files_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for threads in ["1", "4"] {
        let out = bin()
            .args([
                "--threads",
                threads,
                "cubes",
                "build",
                "--limit",
                "30000",
                "--counts",
                "--out",
            ])
            .arg(dir.path().join(format!("t{threads}.bin")))
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(
        file_bytes(&dir.path().join("t1.bin")),
        file_bytes(&dir.path().join("t4.bin"))
    );
}

#[test]
fn eval_rows_thread_independent() {
    let args = [
        "expsum", "eval", "--k", "2", "--n", "100000000000", "--eta", "0.25", "--grid", "16",
    ];
    let a = stdout(&{
        let mut v = vec!["--threads", "1"];
        v.extend_from_slice(&args);
        v
    });
    let b = stdout(&{
        let mut v = vec!["--threads", "3"];
        v.extend_from_slice(&args);
        v
    });
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 16);
    for line in a.lines() {
        assert_eq!(line.split(',').count(), 4);
    }
}

#[test]
fn soluble_table_rows() {
    let out = stdout(&[
        "local", "soluble", "--exponent", "6", "--vars", "8", "--modulus", "8", "--unit-first",
    ]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 8);
    for (n, row) in rows.iter().enumerate() {
        assert_eq!(*row, format!("{n},1"));
    }
    // squares mod 4 with one variable: 2 and 3 insoluble, exit code 1
    let out = run(&["local", "soluble", "--exponent", "2", "--vars", "1", "--modulus", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn quartic_and_coverage_json() {
    let doc = stdout(&["local", "quartic", "--m", "19", "--n", "991", "--cutoff", "50"]);
    let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["positive"], true);
    let doc = stdout(&["search", "coverage"]);
    let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["covered"], true);
}

#[test]
fn repcount_toy() {
    // P = 8 toy: plain values from y in [4, 8], slice value 29, prime 2;
    // target 66^2 + (8 * 29)^2 = 58180 has exactly one representation
    let out = stdout(&[
        "search", "repcount", "--mode", "r", "--k", "2", "--target", "58180",
        "--a-range", "4:8", "--b-range", "3:3", "--primes", "2", "--s", "1", "--t", "1",
    ]);
    assert_eq!(out, "58180,1\n");
}

#[test]
fn verify_suite_passes_and_is_deterministic() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("[PASS]").count(), 13);
    assert!(text.contains("OK: 13/13"));
}

#[test]
fn count_row_combined() {
    let row = stdout(&[
        "expsum", "count", "--q", "3", "--k", "2", "--p-limit", "2", "--h13", "2",
        "--primes", "2,3",
    ]);
    let fields: Vec<&str> = row.trim().split(',').collect();
    assert_eq!(fields[0], "3");
    assert_eq!(fields[2], "1888"); // the pinned R count
    assert_eq!(fields.len(), 3);
    let row = stdout(&["expsum", "count", "--q", "3", "--k", "2", "--p-limit", "2"]);
    assert_eq!(row, "3,1888\n");
}

#[test]
fn query_range_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    let out = bin()
        .args(["cubes", "build", "--limit", "100", "--counts", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows = stdout(&[
        "cubes", "query", "--lo", "1", "--hi", "12", "--cache", path.to_str().unwrap(),
    ]);
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[2], "3,1,1");
    assert_eq!(lines[9], "10,1,3");
    assert_eq!(lines[3], "4,0,0");
}
