use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_seatcheck");

const LATTICE_MODEL: &str = r#"{
  "semiring": {"kind": "powerset-lattice", "roles": ["r1", "r2"]},
  "states": ["x", "y", "z"],
  "subbasis": [["x"], ["x", "y"]],
  "annotation": [
    {"open": ["x", "y", "z"], "generators": ["{r1,r2}"]},
    {"open": ["x", "y"], "state": "x", "generators": ["{r1}"]},
    {"open": ["x"], "state": "y", "generators": ["{r2}"]},
    {"open": [], "generators": ["{}"]}
  ],
  "valuation": {"p": ["x"]}
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn gallery(dir: &Path, names: &[&str]) {
    let mut args = vec!["gallery"];
    args.extend_from_slice(names);
    let out = dir.to_str().unwrap();
    args.extend_from_slice(&["-o", out]);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn weighted_box_on_the_counterexample() {
    let d = tempfile::tempdir().unwrap();
    gallery(d.path(), &["inta_counterexample", "a12_m1"]);
    let m = file(d.path(), "inta_counterexample.json");
    let o = run(&["check", "--model", &m, "--formula", "box[42] p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "{x}");
    let o = run(&["--json", "check", "--model", &m, "--formula", "box[42] p"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["extent"], serde_json::json!(["x"]));
}

#[test]
fn point_queries_exit_with_the_truth_value() {
    let d = tempfile::tempdir().unwrap();
    gallery(d.path(), &["inta_counterexample", "a12_m1"]);
    let m = file(d.path(), "inta_counterexample.json");
    let o = run(&[
        "check",
        "--model",
        &m,
        "--formula",
        "box[42] p",
        "--state",
        "x",
    ]);
    assert_eq!(
        (code(&o), stdout(&o).trim().to_string()),
        (0, "true".to_string())
    );
    let o = run(&[
        "check",
        "--model",
        &m,
        "--formula",
        "box[42] p",
        "--state",
        "y",
    ]);
    assert_eq!(
        (code(&o), stdout(&o).trim().to_string()),
        (1, "false".to_string())
    );
}

#[test]
fn structural_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.json", LATTICE_MODEL);
    let m = m.to_str().unwrap();
    assert_eq!(code(&run(&["check", "--model", m, "--formula", "p &"])), 2);
    assert_eq!(code(&run(&["check", "--model", m, "--formula", "q"])), 2);
    assert_eq!(
        code(&run(&[
            "check",
            "--model",
            "/nonexistent.json",
            "--formula",
            "p"
        ])),
        2
    );
    let bad = write(d.path(), "bad.json", "{\"states\": []");
    assert_eq!(
        code(&run(&["classify", "--model", bad.to_str().unwrap()])),
        2
    );
    let capped = Command::new(BIN)
        .args(["check", "--model", m, "--formula", "p"])
        .env("SEATCHECK_MAX_STATES", "2")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);
    assert!(String::from_utf8_lossy(&capped.stderr).contains("SEATCHECK_MAX_STATES"));
}

#[test]
fn s4k_is_valid_on_a_small_lattice_seat() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.json", LATTICE_MODEL);
    let m = m.to_str().unwrap();
    let o = run(&[
        "axioms",
        "--model",
        m,
        "--suite",
        "s4k",
        "--mode",
        "exhaustive",
        "--expect-valid",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.contains(" valid ")).count(),
        10
    );
}

#[test]
fn refutation_and_inconclusive_codes() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.json", LATTICE_MODEL);
    let m = m.to_str().unwrap();
    // the seat is not uniform, so the uniformity schemes are refuted
    let o = run(&[
        "--json",
        "axioms",
        "--model",
        m,
        "--suite",
        "s4sub-forall",
        "--expect-valid",
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "counterexample");
    let refuted: Vec<&Value> = v["schemes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["status"] == "counterexample")
        .collect();
    assert!(refuted.iter().any(|s| s["scheme"] == "all-uniform"));
    assert!(refuted[0]["counterexample"]["instance"].is_string());
    // without --expect-valid a refutation is just reported
    let o = run(&["axioms", "--model", m, "--suite", "s4sub-forall"]);
    assert_eq!(code(&o), 0);
    // sampling cannot certify validity
    let o = run(&[
        "axioms",
        "--model",
        m,
        "--suite",
        "s4k",
        "--mode",
        "random",
        "--samples",
        "20",
        "--seed",
        "3",
        "--expect-valid",
    ]);
    assert_eq!(code(&o), 3);
    // a tiny budget leaves the exhaustive check unfinished
    let o = run(&["axioms", "--model", m, "--suite", "s4k", "--budget", "5"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn random_mode_is_deterministic_per_seed() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.json", LATTICE_MODEL);
    let m = m.to_str().unwrap();
    let args = [
        "--json",
        "axioms",
        "--model",
        m,
        "--suite",
        "s4sub-forall",
        "--mode",
        "random",
        "--samples",
        "200",
        "--seed",
        "9",
        "--vars",
        "r,s",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert!(a.contains("\"r\""));
}

#[test]
fn fixture_bisimulations() {
    let d = tempfile::tempdir().unwrap();
    gallery(
        d.path(),
        &[
            "a12_m1",
            "a12_m2",
            "z12",
            "a13_m1",
            "a13_m1_amended",
            "a13_m2",
            "z13",
        ],
    );
    let f = |n: &str| file(d.path(), n);
    let o = run(&[
        "bisim",
        "--left",
        &f("a12_m1.json"),
        "--right",
        &f("a12_m2.json"),
        "--relation",
        &f("z12.json"),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("ok"));
    let o = run(&[
        "bisim",
        "--left",
        &f("a12_m1.json"),
        "--right",
        &f("a12_m2.json"),
        "--relation",
        &f("z12.json"),
        "--depth",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // the printed three-point model differs from its partner on the empty set
    let o = run(&[
        "--json",
        "bisim",
        "--left",
        &f("a13_m1.json"),
        "--right",
        &f("a13_m2.json"),
        "--relation",
        &f("z13.json"),
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violation"]["clause"], "iv");
    assert_eq!(v["violation"]["open"], serde_json::json!([]));
    let o = run(&[
        "bisim",
        "--left",
        &f("a13_m1_amended.json"),
        "--right",
        &f("a13_m2.json"),
        "--relation",
        &f("z13.json"),
        "--depth",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("with A"));
}

#[test]
fn computed_relation_round_trips() {
    let d = tempfile::tempdir().unwrap();
    gallery(d.path(), &["a12_m1", "a12_m2"]);
    let f = |n: &str| file(d.path(), n);
    let z = f("z.json");
    let o = run(&[
        "bisim",
        "--left",
        &f("a12_m1.json"),
        "--right",
        &f("a12_m2.json"),
        "-o",
        &z,
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(x1, x2)"));
    let o = run(&[
        "bisim",
        "--left",
        &f("a12_m1.json"),
        "--right",
        &f("a12_m2.json"),
        "--relation",
        &z,
    ]);
    assert_eq!(code(&o), 0);
    // no global bisimulation exists: y2 has no partner
    let o = run(&[
        "--json",
        "bisim",
        "--left",
        &f("a12_m1.json"),
        "--right",
        &f("a12_m2.json"),
        "--global",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["relation"]["global"], false);
}

#[test]
fn union_classify_and_validate() {
    let d = tempfile::tempdir().unwrap();
    gallery(d.path(), &["rbac", "graph", "agents", "borel", "streams"]);
    let f = |n: &str| file(d.path(), n);
    let u = f("u.json");
    let o = run(&["union", &f("rbac.json"), &f("rbac.json"), "-o", &u]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--json", "classify", "--model", &u]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["strong"], true);
    let o = run(&["--json", "classify", "--model", &f("graph.json")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["strong"].clone(), v["one_bounded"].clone()),
        (Value::Bool(true), Value::Bool(true))
    );
    assert!(v["uniform"].is_object());
    for n in ["rbac", "graph", "agents", "borel", "streams", "u"] {
        let o = run(&["validate", "--model", &f(&format!("{n}.json"))]);
        assert_eq!(code(&o), 0, "{n}: {}", stdout(&o));
    }
    // mixing semirings is rejected
    assert_eq!(
        code(&run(&[
            "union",
            &f("rbac.json"),
            &f("borel.json"),
            "-o",
            &u
        ])),
        2
    );
}

#[test]
fn validate_reports_literal_violations() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.json", LATTICE_MODEL);
    let o = run(&["--json", "validate", "--model", m.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    let conditions: Vec<u64> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["condition"].as_u64().unwrap())
        .collect();
    assert!(conditions.contains(&2));
}

#[test]
fn borel_costs() {
    let d = tempfile::tempdir().unwrap();
    let m = d.path().join("borel.json");
    let o = run(&["gallery", "borel", "-o", m.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m = m.to_str().unwrap();
    let o = run(&["cost", "--model", m, "--open", "a,b", "--state", "d"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = run(&["--json", "cost", "--model", m, "--open", "", "--state", "a"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cost"], "1");
    assert_eq!(v["attained"], true);
    assert_eq!(
        code(&run(&["cost", "--model", m, "--open", "c", "--state", "a"])),
        2
    );
}

#[test]
fn gallery_params_and_unknown_names() {
    let d = tempfile::tempdir().unwrap();
    let params = write(
        d.path(),
        "agents.json",
        r#"{"states": ["s1", "s2"], "partitions": {"ann": [["s1"], ["s2"]]}}"#,
    );
    let out = file(d.path(), "agents-model.json");
    let o = run(&[
        "gallery",
        "agents",
        "--params",
        params.to_str().unwrap(),
        "-o",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&[
        "check",
        "--model",
        &out,
        "--formula",
        "F[{ann}] p",
        "--state",
        "s1",
    ]);
    assert!(matches!(code(&o), 0 | 1));
    assert_eq!(code(&run(&["gallery", "nope", "-o", &out])), 2);
}
