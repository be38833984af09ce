use std::fs;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["segre"];
    full.extend_from_slice(args);
    let code = segre_cli::run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?} exited {code}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn quadrics_of_the_three_fold_product() {
    let v = json(&["betti", "--config", "segre:1,1,1", "--degree", "2", "--index", "0"]);
    assert_eq!(v["total"], 9);
    let entries = v["entries"].as_array().unwrap();
    let sum: u64 = entries.iter().map(|e| e["rank"].as_u64().unwrap()).sum();
    assert_eq!(sum, 9);
    assert!(entries.iter().all(|e| e["j"] == 0 && e["t"] == 2 && e["b"].as_array().unwrap().len() == 6));
}

#[test]
fn csv_has_one_row_per_entry() {
    let (code, out) = run(&["--format", "csv", "betti", "--config", "segre:1,1", "--degree", "2", "--index", "0"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["j,t,b,rank", "0,2,1;1;1;1,1"]);
}

#[test]
fn np_check_passes_and_fails_where_expected() {
    let v = json(&["np-check", "--config", "segre:1,1,1", "-p", "2", "--max-degree", "5"]);
    assert_eq!(v["status"], "verified-through-5");
    let (code, out) = run(&["np-check", "--config", "segre:1,1,1", "-p", "4", "--max-degree", "6"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "failed");
}

#[test]
fn witness_exit_code_reports_a_failure() {
    let (code, out) = run(&["witness", "--config", "segre:1,1,1", "-p", "4", "--degree", "6"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witnesses"][0]["rank"], 1);
    let (code, _) = run(&["witness", "--config", "segre:1,1,1", "-p", "2", "--degree", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn koszul_check_reports_the_verdict() {
    let v = json(&["koszul-check", "--config", "segre:1,1,1", "-p", "1", "-q", "1"]);
    assert_eq!(v["verdict"], "match: 9 = 9");
    let (code, _) = run(&["koszul-check", "--config", "segre:2,2", "-p", "3", "-q", "2", "--term-limit", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["betti", "--config", "segre:1,1,1"][..],
        &["betti", "--config", "nonsense", "--degree", "2", "--index", "0"],
        &["np-check", "--config", "veronese:2,2", "-p", "1"],
        &["--jobs", "0", "betti", "--config", "segre:1,1", "--degree", "2", "--index", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "betti", "--config", "segre:2,1", "--degree", "3", "--index", "1"];
    let (c1, cold) = run(&args);
    let lines = fs::read_to_string(dir.path().join("betti.jsonl")).unwrap();
    let (c2, warm) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(cold, warm);
    assert_eq!(fs::read_to_string(dir.path().join("betti.jsonl")).unwrap(), lines);
    let stats = json(&["--cache-dir", d, "cache", "stats"]);
    assert_eq!(stats["slices"], 1);
    assert_eq!(run(&["--cache-dir", d, "cache", "clear"]).0, 0);
    assert_eq!(json(&["--cache-dir", d, "cache", "stats"])["entries"], 0);
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "betti", "--config", "segre:1,1,1", "--degree", "2", "--index", "0"];
    let (_, clean) = run(&args);
    let path = dir.path().join("betti.jsonl");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, format!("garbage\n{text}{{\"kind\":\"entry\",\"rank\":0}}\n")).unwrap();
    let (code, again) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(clean, again);
    assert_eq!(json(&["--cache-dir", d, "cache", "stats"])["skipped_lines"], 2);
}

#[test]
fn ufo_demo_instances_replay() {
    let dir = tempfile::tempdir().unwrap();
    for lemma in ["simple", "subc", "ufo24", "push", "step2", "step1"] {
        let v = json(&["ufo-demo", lemma, "--config", "segre:2,1,1", "--sample-seed", "3"]);
        assert_eq!(v["verified"], true, "{lemma}");
        let path = dir.path().join(format!("{lemma}.json"));
        fs::write(&path, v["instance"].to_string()).unwrap();
        let again = json(&["ufo-demo", lemma, "--instance", path.to_str().unwrap()]);
        assert_eq!(again["certificate"], v["certificate"], "{lemma}");
    }
}

#[test]
fn broken_instance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["ufo-demo", "simple", "--config", "segre:1,1,1"]);
    let mut inst = v["instance"].clone();
    inst["coord"] = 0.into();
    let path = dir.path().join("bad.json");
    fs::write(&path, inst.to_string()).unwrap();
    assert_eq!(run(&["ufo-demo", "simple", "--instance", path.to_str().unwrap()]).0, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_segre");
    let ok = Command::new(bin)
        .args(["betti", "--config", "segre:1,1", "--degree", "2", "--index", "0"])
        .env_remove("SEGRE_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["betti"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

fn token() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "betti", "np-check", "witness", "koszul-check", "cache", "stats", "--config", "segre:1,1", "segre:9",
        "--degree", "--index", "-p", "-q", "0", "1", "2", "-1", "x", "--format", "csv", "--jobs",
    ])
    .prop_map(str::to_string)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_invocation_exits_zero_one_or_two(args in prop::collection::vec(token(), 0..7)) {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _) = run(&refs);
        prop_assert!((0..=2).contains(&code));
    }
}
