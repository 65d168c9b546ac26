use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stablemaps"));
    cmd.env_remove("STABLEMAPS_CACHE");
    match cache {
        Some(p) => cmd.env("STABLEMAPS_CACHE", p),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn args(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

#[test]
fn betti_projective_line() {
    let o = run(&args("betti --n 1 --d 1 --m 1"), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + q\n[1, 1]\n");
}

#[test]
fn betti_both_methods_agree() {
    let o = run(&args("betti --n 2 --d 2 --m 2 --method both"), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "1 + 5q + 13q^2 + 20q^3 + 20q^4 + 13q^5 + 5q^6 + q^7\n[1, 5, 13, 20, 20, 13, 5, 1]\n"
    );
}

#[test]
fn betti_json() {
    let o = run(
        &args("betti --n 1 --d 2 --m 1 --method direct --json"),
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["method"], "direct");
    let coeffs: Vec<u64> = serde_json::from_value(v["poincare"].clone()).unwrap();
    assert_eq!(coeffs.len(), 4);
    assert_eq!(coeffs.first(), Some(&1));
    assert_eq!(coeffs.last(), Some(&1));
}

#[test]
fn invalid_input_exits_with_two() {
    for a in [
        "betti --n 0 --d 1 --m 1",
        "betti --n 1 --d 0 --m 1",
        "basis --n 1 --d 1 --m 1 --k 2",
        "basis --n 1 --d 5 --m 1 --k 0 --expand-sym",
        "relations --n 1 --d 5 --m 4",
        "trees --m 0 --d 1",
        "betti --n 1 --d 1",
        "betti --n 1 --d 1 --m 1 --method magic",
    ] {
        let o = run(&args(a), None);
        assert_eq!(o.status.code(), Some(2), "{a}");
        assert!(o.stdout.is_empty(), "{a}");
        assert!(!o.stderr.is_empty(), "{a}");
    }
}

#[test]
fn trees_of_degree_two_with_two_marks() {
    let basis = run(&args("trees --m 2 --d 2"), None);
    assert_eq!(basis.status.code(), Some(0));
    assert_eq!(stdout(&basis).lines().count(), 7);
    let all = run(&args("trees --m 2 --d 2 --all"), None);
    assert_eq!(stdout(&all).lines().count(), 10);
    let json = run(&args("trees --m 2 --d 2 --json"), None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 7);
    for t in list {
        assert!(t["d"].is_u64());
        assert!(t["leaves"].as_array().unwrap().contains(&1.into()));
        assert!(t["children"].is_array());
    }
}

#[test]
fn basis_listing() {
    let o = run(&args("basis --n 1 --d 1 --m 1 --k 1"), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&args("basis --n 2 --d 2 --m 2 --k 3 --json"), None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 20);
    let o = run(&args("basis --n 1 --d 2 --m 2 --k 1 --expand-sym"), None);
    assert!(stdout(&o).contains("(1/2) T{2_M,2_D} + (1/2) T{2_M,1_D}"));
}

#[test]
fn relations_listing() {
    let o = run(&args("relations --n 1 --d 1 --m 2"), None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().nth(1) == Some("H^2")));
    let o = run(&args("relations --n 1 --d 1 --m 2 --json"), None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["family"], "1");
    assert_eq!(first["terms"][0]["H"], 2);
}

#[test]
fn output_is_deterministic() {
    for a in [
        "betti --n 2 --d 3 --m 2 --method both --json",
        "trees --m 3 --d 2 --json",
        "basis --n 2 --d 2 --m 2 --k 2 --expand-sym --json",
        "relations --n 1 --d 2 --m 2 --json",
    ] {
        let first = run(&args(a), None);
        let second = run(&args(a), None);
        assert_eq!(first.status.code(), Some(0), "{a}");
        assert_eq!(first.stdout, second.stdout, "{a}");
    }
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("cache.json");
    for a in [
        "betti --n 2 --d 3 --m 3",
        "betti --n 2 --d 2 --m 1 --json",
        "betti --n 3 --d 2 --m 2",
    ] {
        let uncached = run(&args(a), None);
        let cold = run(&args(a), Some(&path));
        let warm = run(&args(a), Some(&path));
        assert_eq!(cold.status.code(), Some(0), "{a}");
        assert_eq!(uncached.stdout, cold.stdout, "{a}");
        assert_eq!(cold.stdout, warm.stdout, "{a}");
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["version"].is_string());
    let keys: Vec<&String> = v["entries"].as_object().unwrap().keys().collect();
    assert!(keys
        .iter()
        .any(|k| k.starts_with("P:") && k.ends_with(",2")));
    assert!(keys.iter().any(|k| k.ends_with(",3")));
}

#[test]
fn stale_cache_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    // A wrong value under an old version string must not leak into results.
    std::fs::write(
        &path,
        r#"{"version":"stablemaps-cache-0","entries":{"P:1,1,1,1":["5"]}}"#,
    )
    .unwrap();
    let o = run(&args("betti --n 1 --d 1 --m 1"), Some(&path));
    assert_eq!(stdout(&o), "1 + q\n[1, 1]\n");
    std::fs::write(&path, "garbage").unwrap();
    let o = run(&args("betti --n 1 --d 1 --m 1"), Some(&path));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + q\n[1, 1]\n");
}
