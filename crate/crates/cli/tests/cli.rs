use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn shufflesor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shufflesor"))
        .args(args)
        .output()
        .expect("spawn shufflesor")
}

fn ok(args: &[&str]) -> String {
    let out = shufflesor(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path) {
    ok(&["generate", "--kind", "lowrank", "--n", "8", "--r", "2", "--seed", "7", "--out-dir", dir.to_str().unwrap()]);
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("missing {key} in\n{report}"))
}

#[test]
fn generate_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(a.path());
    generate(b.path());
    for file in ["matrix.mtx", "rhs.mtx", "solution.mtx", "factor.mtx", "meta.txt"] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
    let matrix = fs::read_to_string(a.path().join("matrix.mtx")).unwrap();
    assert!(matrix.starts_with("%%MatrixMarket matrix array real general\n"));
    assert!(matrix.contains("% problem: lowrank n=8 r=2 seed=7"));
}

#[test]
fn compare_with_one_trial_reproduces_solve() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let p = dir.path().to_str().unwrap();
    let solve_csv = dir.path().join("solve.csv");
    let compare_csv = dir.path().join("compare.csv");
    let common = ["--dir", p, "--seed", "3", "--sweeps", "5"];
    let solve = ok(&[&["solve", "--strategy", "shuffled", "--out", solve_csv.to_str().unwrap()], &common[..]].concat());
    let compare = ok(&[
        &["compare", "--strategies", "shuffled", "--trials", "1", "--out", compare_csv.to_str().unwrap()],
        &common[..],
    ]
    .concat());
    assert_eq!(fs::read(&solve_csv).unwrap(), fs::read(&compare_csv).unwrap());
    assert_eq!(value(&solve, "empirical_rate"), value(&compare, "rate.shuffled.empirical"));
}

#[test]
fn fan_rate_through_kaczmarz() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["generate", "--kind", "fan", "--m", "4", "--out-dir", dir.path().to_str().unwrap()]);
    let report = ok(&[
        "solve",
        "--dir",
        dir.path().to_str().unwrap(),
        "--method",
        "kaczmarz",
        "--sweeps",
        "20",
        "--target",
        "0",
        "--out",
        dir.path().join("h.csv").to_str().unwrap(),
    ]);
    let rate: f64 = value(&report, "empirical_rate").parse().unwrap();
    assert!((rate - (std::f64::consts::PI / 8.0).cos().powi(16)).abs() < 1e-12, "{rate}");
}

#[test]
fn bounds_report_for_fan() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["generate", "--kind", "fan", "--m", "4", "--out-dir", dir.path().to_str().unwrap()]);
    let report = ok(&["bounds", "--dir", dir.path().to_str().unwrap()]);
    let shuffled: f64 = value(&report, "rate_shuffled").parse().unwrap();
    assert!((shuffled - 0.84).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let p = dir.path().to_str().unwrap();
    for args in [
        vec!["solve", "--dir", p, "--omega", "2"],
        vec!["generate", "--kind", "fan", "--m", "0", "--out-dir", p],
        vec!["solve", "--dir", p, "--strategy", "fixed"],
        vec!["frobnicate"],
    ] {
        let out = shufflesor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn missing_input_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = shufflesor(&["solve", "--dir", dir.path().join("absent").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn plot_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "a,b\n1,2\n").unwrap();
    let out = shufflesor(&["plot", "--input", csv.to_str().unwrap(), "--output", dir.path().join("p.svg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
