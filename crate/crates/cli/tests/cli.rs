use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qknot(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qknot"))
        .env("QKNOT_CACHE", cache)
        .args(args)
        .output()
        .expect("qknot runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The output without provenance comment lines.
fn body(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn jones_prints_polynomials_and_fills_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = qknot(dir.path(), &["jones", "--p", "0", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(body(&o), vec!["-1*q^8+1*q^5+1*q^3"]);
    assert!(stdout(&o).starts_with("# provenance {"));
    let cached = dir.path().join("jones/p0/n2.poly");
    assert_eq!(fs::read_to_string(&cached).unwrap().trim(), "-1*q^8+1*q^5+1*q^3");
    let o = qknot(dir.path(), &["jones", "--p", "0", "--n", "1"]);
    assert_eq!(body(&o), vec!["1"]);
    // a second run reads the cache and spot-checks it
    let o = qknot(dir.path(), &["jones", "--p", "0", "--n", "2"]);
    assert!(o.status.success());
}

#[test]
fn corrupted_cache_entries_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qknot(dir.path(), &["jones", "--p", "1", "--n", "3"]).status.success());
    fs::write(dir.path().join("jones/p1/n3.poly"), "1*q^2\n").unwrap();
    let o = qknot(dir.path(), &["jones", "--p", "1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn provenance_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = qknot(dir.path(), &["--format", "json", "jones", "--p", "-1", "--n", "4", "--stats"]);
    let b = qknot(dir.path(), &["--format", "json", "jones", "--p", "-1", "--n", "4", "--stats"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["provenance"]["seed"], 0x5eed);
    assert!(v["result"]["stats"][0]["stats"]["max_exp"].is_i64());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qknot(dir.path(), &["jones", "--n", "3"]).status.code(), Some(2));
    assert_eq!(qknot(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qknot(dir.path(), &["verify", "--operator", "/nonexistent.op", "--p", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qknot(dir.path(), &["guess", "--p", "0", "--order", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn guess_verify_and_consistency_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("Am2.op");
    let o = qknot(dir.path(), &["guess", "--p", "-2", "--out", op.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(body(&o)[0].contains("translation 5"));
    let text = fs::read_to_string(&op).unwrap();
    assert!(text.contains("qknot-operator/1"));

    let o = qknot(dir.path(), &["verify", "--operator", op.to_str().unwrap(), "--range", "-10:12", "--jobs", "2"]);
    assert!(o.status.success());

    let o = qknot(dir.path(), &["consistency", "--operator", op.to_str().unwrap(), "--loop"]);
    assert!(o.status.success());
    assert!(body(&o)[0].starts_with("loop"));

    // the same operator does not annihilate the sequence of another knot
    let o = qknot(dir.path(), &["verify", "--operator", op.to_str().unwrap(), "--p", "2", "--range", "0:3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kashaev_csv_feeds_volfit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let o = qknot(
        dir.path(),
        &["kashaev", "--p", "2", "--N", "40:120", "--step", "8", "--precision", "64", "--csv", csv.to_str().unwrap()],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# provenance"));
    assert_eq!(lines[1], "N,a_N,re,im,err");
    assert_eq!(lines.len(), 2 + 11);
    assert!(lines[2..].iter().all(|l| l.split(',').count() == 5));

    let o = qknot(dir.path(), &["--format", "json", "volfit", "--csv", csv.to_str().unwrap(), "--window", "40:120"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["points"], 11);
    let c0 = v["result"]["c0"].as_f64().unwrap();
    assert!((2.7..3.0).contains(&c0), "{c0}");

    // too few points in the window is a usage error
    let o = qknot(dir.path(), &["volfit", "--csv", csv.to_str().unwrap(), "--window", "40:41"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhausted_precision_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = qknot(
        dir.path(),
        &["kashaev", "--p", "2", "--N", "60", "--precision", "8", "--max-err", "1e-30"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn epsilon_palindromy_needs_no_operator() {
    let dir = tempfile::tempdir().unwrap();
    for p in -5..=5 {
        let p = p.to_string();
        let o = qknot(dir.path(), &["consistency", "--p", &p, "--epsilon"]);
        assert!(o.status.success(), "p = {p}");
        assert!(body(&o)[0].starts_with("epsilon-palindromy holds"));
    }
}
