use std::process::{Command, Output};

use serde_json::Value;

fn onerel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onerel")).args(args).output().expect("spawn onerel")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn classify_dinf_example() {
    let o = onerel(&["classify", "-r", "a b A b^2", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("out_class: Dinf\n"), "{out}");
    assert!(out.ends_with('\n'));
}

#[test]
fn classify_trace_lists_decision() {
    let out = stdout(&onerel(&["classify", "-r", "a b A b^2", "-n", "3", "--trace"]));
    assert!(out.contains("beta(0): InvertsRelator"), "{out}");
    assert!(out.contains("decision: Dinf"), "{out}");
}

#[test]
fn classify_json_schema() {
    let o = onerel(&["classify", "-r", "a b A b^2", "-n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["out_class", "witnesses", "balanced", "scan", "presentations", "note", "trace"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["out_class"], "Dinf");
    assert_eq!(v["witnesses"]["delta"], true);
    assert_eq!(v["witnesses"]["betas"], serde_json::json!([0]));
}

#[test]
fn check_map_beta_inverts() {
    let o = onerel(&["check-map", "-r", "a b A b^2", "-n", "2", "-m", "beta(0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "InvertsRelator\n");
}

#[test]
fn check_map_explicit_images() {
    let o = onerel(&["check-map", "-r", "a b A b^2", "-n", "2", "-m", "a -> a b; b -> b"]);
    assert_eq!(stdout(&o), "FixesRelator\n");
}

#[test]
fn check_map_rejects_non_basis() {
    let o = onerel(&["check-map", "-r", "a b A b^2", "-n", "2", "-m", "a -> a^2; b -> b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn balance_example() {
    let o = onerel(&["balance", "-r", "a^2 b^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("s = b A b a\n"));
    let v: Value = serde_json::from_slice(&onerel(&["balance", "-r", "a^2 b^2", "--json"]).stdout).unwrap();
    assert_eq!(v["s"], "b A b a");
    assert_eq!(v["gcd"], 2);
}

#[test]
fn parse_error_exits_one_with_offset() {
    let o = onerel(&["classify", "-r", "a c", "-n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("offset 2"), "{err}");
}

#[test]
fn bad_exponent_exits_one() {
    assert_eq!(onerel(&["classify", "-r", "a b A b^2", "-n", "1"]).status.code(), Some(1));
}

#[test]
fn oracle_single_relator() {
    let o = onerel(&["oracle", "-r", "a b A b^2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scan_power_crosscheck"], true);
    assert_eq!(v["primitive_whitehead"], false);
}

#[test]
fn oracle_sampling_is_sound() {
    let o = onerel(&["oracle", "--samples", "10", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("sound on 10"));
}

fn write_temp(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("onerel-sc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn sc_check_power_relator() {
    let rel = vec!["a b A b^2"; 30].join(" ");
    let path = write_temp("pow.txt", &format!("# (a b A b^2)^30\n{rel}\n"));
    let o = onerel(&["sc-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("C'(1/24): true"), "{out}");
    let v: Value = serde_json::from_slice(&onerel(&["sc-check", path.to_str().unwrap(), "--json"]).stdout).unwrap();
    assert_eq!(v["max_piece"], 1);
}

#[test]
fn sc_check_lists_each_failed_hypothesis() {
    let path = write_temp("c6.txt", "b_order = infinite\nA^2 b^2 A b A B a b^2 a^3 b\n");
    let o = onerel(&["sc-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("C'(1/6): true"), "{out}");
    assert_eq!(out.matches("hypothesis failed:").count(), 3, "{out}");
}

#[test]
fn sc_check_missing_file() {
    assert_eq!(onerel(&["sc-check", "/nonexistent/onerel.txt"]).status.code(), Some(1));
}
