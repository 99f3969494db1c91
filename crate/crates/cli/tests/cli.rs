use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonepower"))
        .args(args)
        .current_dir(root())
        .env_remove("CLONEPOWER_MAX_EXHAUSTIVE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    let v: Value =
        serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

fn masked(mut v: Value) -> Value {
    v["timing_ms"] = Value::from(0);
    v
}

const REPORT_KEYS: [&str; 7] = [
    "command",
    "counterexample",
    "inputs",
    "oracle_checked",
    "outputs",
    "timing_ms",
    "verdict",
];

#[test]
fn classify_examples() {
    let cases = [
        ("data/bases/monotone.base", "LACKS(MONOTONE)"),
        ("data/bases/d.base", "LACKS(SELF_DUAL)"),
        ("data/bases/xor_one.base", "LACKS(LINEAR)"),
        ("data/bases/nand.base", "FULL(AND_OR_NOT)"),
        ("data/bases/gadget_or.base", "FULL(OR_AND_NOT)"),
    ];
    for (base, verdict) in cases {
        let (v, code) = json(&["classify", base]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], verdict, "{base}");
    }
    let (v, _) = json(&["classify", "data/bases/nand.base"]);
    assert_eq!(v["oracle_checked"], true);
    assert!(v["outputs"]["witness"].as_str().unwrap().contains("NAND"));
}

#[test]
fn report_matches_golden_file() {
    let (v, _) = json(&["classify", "data/bases/nand.base"]);
    let golden: Value = serde_json::from_str(include_str!("golden/classify_nand.json"))
        .expect("golden file parses");
    assert_eq!(masked(v), golden);
}

#[test]
fn every_command_shares_the_report_schema() {
    let runs: [&[&str]; 9] = [
        &["classify", "data/bases/and.base"],
        &["closure", "data/bases/and.base", "--arity", "2"],
        &["synthesize", "data/bases/nand.base", "--target", "10:1"],
        &[
            "determinize",
            "data/bases/monotone.base",
            "data/circuits/mono_guess.circ",
        ],
        &[
            "lift",
            "data/bases/gadget_and.base",
            "data/circuits/gadget_const.circ",
            "--gadget",
            "and",
        ],
        &[
            "noteliminate",
            "data/circuits/or_via_nots.circ",
            "--polarity",
            "1",
        ],
        &[
            "eval",
            "--base",
            "data/bases/monotone.base",
            "data/circuits/mono_guess.circ",
        ],
        &[
            "equiv",
            "--base",
            "data/bases/monotone.base",
            "data/circuits/mono_guess.circ",
            "data/circuits/x1.circ",
        ],
        &[
            "noteliminate",
            "data/circuits/xor_aon.circ",
            "--polarity",
            "1",
        ],
    ];
    for args in runs {
        let (v, _) = json(args);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, REPORT_KEYS, "{args:?}");
        assert_eq!(v["command"], args[0]);
        for input in v["inputs"].as_array().unwrap() {
            assert_eq!(input["sha256"].as_str().unwrap().len(), 64);
        }
    }
}

#[test]
fn closure_and_synthesis() {
    let (v, _) = json(&["closure", "data/bases/and.base", "--arity", "2"]);
    assert_eq!(v["outputs"]["counts_by_arity"][2], 3);
    let (v, _) = json(&["synthesize", "data/bases/nand.base", "--target", "10:1"]);
    assert_eq!(v["outputs"]["gates"], 1);
    assert!(v["outputs"]["witness"]
        .as_str()
        .unwrap()
        .contains("NAND x1 x1"));
    let (v, code) = json(&["synthesize", "data/bases/and.base", "--target", "0111:2"]);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("not a member", 0));
}

#[test]
fn determinizers_end_to_end() {
    let (v, code) = json(&[
        "determinize",
        "data/bases/self_dual.base",
        "data/circuits/sd_masked.circ",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["mode"], "selfdual");

    let (v, code) = json(&[
        "determinize",
        "data/bases/self_dual.base",
        "data/circuits/sd_bad.circ",
        "--mode",
        "selfdual",
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "error");

    let (v, code) = json(&[
        "determinize",
        "data/bases/linear.base",
        "data/circuits/lin_guess.circ",
    ]);
    assert_eq!(code, 0);
    assert!(v["outputs"]["netlist"]
        .as_str()
        .unwrap()
        .contains("XNOR x1 x1"));

    let (v, _) = json(&[
        "determinize",
        "data/bases/linear.base",
        "data/circuits/lin_cancel.circ",
    ]);
    assert_eq!(v["outputs"]["mode"], "linear");
    assert!(v["outputs"]["gates"].as_u64().unwrap() <= 2);
}

#[test]
fn output_file_is_written_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("det.circ");
    let o = run(&[
        "determinize",
        "data/bases/monotone.base",
        "data/circuits/mono_guess.circ",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&[
        "equiv",
        "--base",
        "data/bases/monotone.base",
        "data/circuits/mono_guess.circ",
        out.to_str().unwrap(),
        "--right-semantics",
        "det",
    ]);
    assert!(stdout(&o).starts_with("equiv: equal"));
}

#[test]
fn rejected_transforms_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.circ");
    let o = run(&[
        "noteliminate",
        "data/circuits/xor_aon.circ",
        "--polarity",
        "1",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn lift_and_not_elimination() {
    let (v, code) = json(&[
        "lift",
        "data/bases/gadget_and.base",
        "data/circuits/gadget_const.circ",
        "--gadget",
        "and",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["contract_rows"], 8);
    assert!(!v["outputs"]["netlist"].as_str().unwrap().contains("const"));

    let (v, _) = json(&[
        "noteliminate",
        "data/circuits/or_via_nots.circ",
        "--polarity",
        "1",
    ]);
    assert_eq!(v["outputs"]["table"], "0111");
    let (v, _) = json(&[
        "noteliminate",
        "data/circuits/and_via_nots.circ",
        "--polarity",
        "0",
        "--target-base",
        "data/bases/gadget_or.base",
    ]);
    assert_eq!(v["outputs"]["table"], "0001");
    assert!(v["oracle_checked"].as_bool().unwrap());
}

#[test]
fn equivalence_reports_counterexamples() {
    let (v, _) = json(&[
        "equiv",
        "--base",
        "data/bases/monotone.base",
        "data/circuits/mono_guess.circ",
        "data/circuits/x1.circ",
        "--right-semantics",
        "det",
    ]);
    assert_eq!(v["verdict"], "equal");
    let (v, code) = json(&[
        "equiv",
        "--base",
        "data/bases/and_or_not.base",
        "data/circuits/or_via_nots.circ",
        "data/circuits/and_via_nots.circ",
    ]);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("different", 0));
    assert_eq!(v["counterexample"], "10");
}

#[test]
fn eval_single_assignment() {
    let o = run(&[
        "eval",
        "--base",
        "data/bases/monotone.base",
        "data/circuits/mono_guess.circ",
        "--x",
        "1",
    ]);
    assert!(stdout(&o).starts_with("eval: 1"));
    let o = run(&[
        "eval",
        "--base",
        "data/bases/monotone.base",
        "data/circuits/mono_guess.circ",
        "--semantics",
        "det",
        "--x",
        "1",
        "--y",
        "0",
    ]);
    assert!(stdout(&o).starts_with("eval: 0"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["classify", "data/bases/missing.base"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.base");
    std::fs::write(&bad, "AND 2 0001\nOR 2 011\n").unwrap();
    let o = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn exhaustive_bound_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_clonepower"))
        .args([
            "eval",
            "--base",
            "data/bases/monotone.base",
            "data/circuits/mono_guess.circ",
        ])
        .current_dir(root())
        .env("CLONEPOWER_MAX_EXHAUSTIVE", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
