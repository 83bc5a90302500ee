use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn besynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besynth")).args(args).output().expect("binary runs")
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

struct Counter1 {
    _dir: tempfile::TempDir,
    env: PathBuf,
    goal: PathBuf,
    part: PathBuf,
}

fn counter_1_1() -> Counter1 {
    let dir = tempfile::tempdir().unwrap();
    let env = file(dir.path(), "env.ltlf", "F add\n");
    let goal = file(
        dir.path(),
        "goal.ltlf",
        "!b0 && G(((add && grant) -> ((b0 -> WX !b0) && (!b0 -> WX b0))) && (!(add && grant) -> ((b0 -> WX b0) && (!b0 -> WX !b0)))) && F b0\n",
    );
    let part = file(dir.path(), "counter.part", ".inputs: add\n.outputs: grant b0\n");
    Counter1 { _dir: dir, env, goal, part }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_prints_verdict_then_json() {
    let c = counter_1_1();
    let json_out = c._dir.path().join("out.json");
    let dot_out = c._dir.path().join("out.dot");
    let out = besynth(&[
        "synth", "--env", s(&c.env), "--goal", s(&c.goal), "--part", s(&c.part), "--alg", "3",
        "--json", s(&json_out), "--dot", s(&dot_out),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "REALIZABLE");
    let v: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(v["algorithm"], 3);
    assert_eq!(v["verdict"], "realizable");
    assert!(std::fs::read_to_string(json_out).unwrap().contains("timings_by_stage_ms"));
    assert!(std::fs::read_to_string(dot_out).unwrap().starts_with("digraph"));
}

#[test]
fn every_algorithm_agrees_from_the_command_line() {
    let c = counter_1_1();
    for alg in ["1", "2", "3"] {
        let out = besynth(&["synth", "--env", s(&c.env), "--goal", s(&c.goal), "--part", s(&c.part), "--alg", alg]);
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("REALIZABLE"), "alg {alg}");
    }
}

#[test]
fn missing_part_is_a_usage_error() {
    let c = counter_1_1();
    let out = besynth(&["synth", "--env", s(&c.env), "--goal", s(&c.goal)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_formula_is_a_usage_error() {
    let c = counter_1_1();
    let bad = file(c._dir.path(), "bad.ltlf", "F (add &&\n");
    let out = besynth(&["synth", "--env", s(&bad), "--goal", s(&c.goal), "--part", s(&c.part)]);
    assert_eq!(out.status.code(), Some(1));
    let undeclared = file(c._dir.path(), "u.ltlf", "F zzz\n");
    let out = besynth(&["synth", "--env", s(&undeclared), "--goal", s(&c.goal), "--part", s(&c.part)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tiny_timeout_exits_with_two() {
    let c = counter_1_1();
    let out = besynth(&[
        "synth", "--env", s(&c.env), "--goal", s(&c.goal), "--part", s(&c.part), "--timeout", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_counter_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = besynth(&["bench", "counter", "--n-max", "2", "--k-max", "3", "--algs", "1,2,3", "--timeout", "60", "--csv", s(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,K,alg,verdict,t_translate_ms,t_product_ms,t_adv_ms,t_coop_ms,t_extract_ms,t_total_ms,timeout"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r.ends_with(",false")));
}

#[test]
fn bench_rejects_out_of_range_grid() {
    let out = besynth(&["bench", "counter", "--n-max", "11", "--k-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_undominated() {
    let c = counter_1_1();
    let out = besynth(&["validate", "--env", s(&c.env), "--goal", s(&c.goal), "--part", s(&c.part)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("UNDOMINATED"));
    let out = besynth(&[
        "validate", "--env", s(&c.env), "--goal", s(&c.goal), "--part", s(&c.part), "--max-states", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dfa_writes_dot_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "f.ltlf", "F a\n");
    let part = file(dir.path(), "p.part", ".inputs: a\n.outputs:\n");
    let dot = dir.path().join("f.dot");
    let text = dir.path().join("f.dfa");
    let out = besynth(&["dfa", "--formula", s(&f), "--part", s(&part), "--dot", s(&dot), "--text", s(&text)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "states 2");
    assert!(std::fs::read_to_string(dot).unwrap().contains("doublecircle"));
    assert!(std::fs::read_to_string(text).unwrap().starts_with("dfa v1"));
}
