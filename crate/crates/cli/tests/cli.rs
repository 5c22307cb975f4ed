use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_borcherds")).args(args).env_remove("BORCHERDS_CACHE_DIR").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(&[&["--format", "json"], args].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn atlas_is_deterministic_and_passes() {
    let a = run(&["--format", "json", "atlas", "--all"]);
    let b = run(&["--format", "json", "atlas", "--all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 24);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["atlas"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--cusp", "24A1", "--what", "product"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--cusp", "24A1", "--what", "phi0", "--q", "1/5"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--cusp", "nope", "--what", "phi0"]).status.code(), Some(2));
    assert_eq!(run(&["cache", "list"]).status.code(), Some(2));
}

#[test]
fn thm12_full_tier_for_24a1() {
    let v = json(&["verify", "thm12", "--cusp", "24A1", "--tier", "full"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["reports"][0]["sign"], 1);
    assert_eq!(v["runtime_seconds"], 0.0);
}

#[test]
fn phi0_expansion_document() {
    let v = json(&["expand", "--cusp", "24A1", "--what", "phi0", "--q", "0"]);
    assert_eq!(v["what"], "phi0");
    assert_eq!(v["weight2"], 0);
    assert_eq!(v["index24"], 24);
    assert!(!v["series"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn leech_suite_counts_norm_4_vectors() {
    let v = json(&["verify", "leech"]);
    assert_eq!(v["status"], "pass");
    let d = &v["reports"][0]["details"];
    assert_eq!(d["norm4_count"], "196560");
    assert_eq!(d["tau2"], "-24");
}

fn cache_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn cache_quarantines_corrupt_entries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = json(&["--cache-dir", d, "cache", "list"]);
    assert!(v["files"].as_array().unwrap().is_empty());
    std::fs::write(dir.path().join("bogus-n2-full.json"), "{").unwrap();
    run(&["--cache-dir", d, "cache", "validate"]);
    assert_eq!(cache_files(dir.path()), vec!["bogus-n2-full.json.quarantined".to_string()]);
    let v = json(&["--cache-dir", d, "cache", "gc"]);
    assert_eq!(v["removed"].as_array().unwrap().len(), 1);
    assert!(cache_files(dir.path()).is_empty());
}
