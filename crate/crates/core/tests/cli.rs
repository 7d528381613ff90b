use std::path::Path;
use std::process::{Command, Output};

use qudit_rb::channels::depolarizing;

fn qrb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrb")).args(args).current_dir(dir).output().expect("spawn qrb")
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

fn last_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().last().unwrap_or_default().to_string()
}

#[test]
fn exact_run_reports_error_rate() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "exp.toml", "d = 3\nmax_len = 20\nnum_seq = 10\nmode = \"exact\"\n[noise]\nmodel = \"depolarizing\"\np = 0.95\n");
    let out = qrb(&["run", "exp.toml", "--out", "o", "--emit-plot"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: f64 = last_line(&out).parse().unwrap();
    assert!((r - 0.05 * 2.0 / 3.0).abs() < 1e-6);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("o/fit.json")).unwrap()).unwrap();
    assert!((report["p_hat"].as_f64().unwrap() - 0.95).abs() < 1e-6);
    assert!(tmp.path().join("o/decay.svg").exists());
    let ds: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("o/dataset.json")).unwrap()).unwrap();
    assert_eq!(ds["schema"], 1);
}

#[test]
fn non_prime_dimension_is_invalid_input() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "exp.toml", "d = 4\n[noise]\nmodel = \"none\"\n");
    let out = qrb(&["run", "exp.toml", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
}

#[test]
fn malformed_specs_are_invalid_input() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "exp.toml", "d = 3\nnum_seq = -1\n[noise]\nmodel = \"none\"\n");
    let out = qrb(&["run", "exp.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("num_seq"));
    let out = qrb(&["run", "missing.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn noiseless_sampled_run_has_no_error() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "exp.toml", "d = 3\nmax_len = 10\n[noise]\nmodel = \"none\"\n");
    let out = qrb(&["run", "exp.toml", "--out", "o"], tmp.path());
    assert!(out.status.success());
    let r: f64 = last_line(&out).parse().unwrap();
    assert!(r < 1e-3);
}

#[test]
fn repeated_runs_write_identical_datasets() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "exp.toml", "d = 2\nmax_len = 8\nnum_seq = 20\nnum_copies = 50\n[noise]\nmodel = \"over-rotation\"\nangle = 0.2\n");
    for (dir, threads) in [("a", "1"), ("b", "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_qrb"))
            .args(["run", "exp.toml", "--seed", "3", "--out", dir])
            .env("QRB_THREADS", threads)
            .current_dir(tmp.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["dataset.json", "dataset.csv", "fit.json"] {
        let a = std::fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn kraus_file_noise_and_spam_blocks() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "noise.json", &depolarizing(0.9, 3).unwrap().to_json().unwrap());
    write(
        tmp.path(),
        "exp.toml",
        "d = 3\nmax_len = 15\nnum_seq = 5\nmode = \"exact\"\n[noise]\nmodel = \"kraus-file\"\npath = \"noise.json\"\n[prep_noise]\nmodel = \"depolarizing\"\np = 0.8\n",
    );
    let out = qrb(&["run", "exp.toml", "--out", "o"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: f64 = last_line(&out).parse().unwrap();
    assert!((r - 0.1 * 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn verify_suites() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qrb(&["verify", "cardinality"], tmp.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("24, 216, 3000: all match"));
    let out = qrb(&["verify", "counterexample"], tmp.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("absent"));
    let out = qrb(&["verify", "design"], tmp.path());
    assert!(out.status.success());
    let out = qrb(&["verify", "everything"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_with_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qrb(&["enumerate", "3", "1", "--cache", "g.bin"], tmp.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("216"));
    let first = std::fs::read(tmp.path().join("g.bin")).unwrap();
    let out = qrb(&["enumerate", "3", "1", "--cache", "g.bin"], tmp.path());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("loaded 216"));
    assert_eq!(std::fs::read(tmp.path().join("g.bin")).unwrap(), first);
    let out = qrb(&["enumerate", "2", "1", "--cache", "g.bin"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = qrb(&["enumerate", "6", "1"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}
