//! End-to-end CLI behavior: exit codes, determinism, schema conformance, formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patkit"))
}

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/patterns")
        .join(file)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn patkit")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

/// Drop the timing object before golden comparison.
fn stripped(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn classify_p1_emits_inhomogeneous() {
    let p1 = data("p1.pat");
    let v = json_of(&run(&["classify", "--pattern", p1.to_str().unwrap(), "--degree-bound", "2"]));
    assert_eq!(v["result"]["homogeneous"], Value::Bool(false));
    assert_eq!(v["result"]["transferable"], Value::Bool(false));
    assert!(v["result"]["witness"].is_array());
}

#[test]
fn classify_p2_emits_homogeneous_not_transferable() {
    let p2 = data("p2.pat");
    let v = json_of(&run(&["classify", "--pattern", p2.to_str().unwrap(), "--degree-bound", "6"]));
    assert_eq!(v["result"]["homogeneous"], Value::Bool(true));
    assert_eq!(v["result"]["transferable"], Value::Bool(false));
    assert_eq!(v["result"]["t"], Value::from(6));
    assert_eq!(v["result"]["d"], Value::from(3));
}

#[test]
fn non_prime_modulus_is_a_usage_error() {
    let p1 = data("p1.pat");
    let out = run(&["transfer-gap", "--pattern", p1.to_str().unwrap(), "--N", "15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn unknown_flags_and_commands_are_rejected() {
    assert_eq!(run(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_pattern_file_is_a_usage_error() {
    let out = run(&["classify", "--pattern", "/nonexistent/x.pat"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transfer_gap_is_deterministic_and_worker_independent() {
    let p1 = data("p1.pat");
    let args = ["transfer-gap", "--pattern", p1.to_str().unwrap(), "--N", "11", "--seed", "42"];
    let a = stripped(json_of(&run(&args)));
    let b = stripped(json_of(&run(&args)));
    assert_eq!(a, b, "same config + seed must reproduce byte-identically");
    let mut with_workers: Vec<&str> = args.to_vec();
    with_workers.extend(["--workers", "4"]);
    let c = stripped(json_of(&run(&with_workers)));
    assert_eq!(a["result"], c["result"], "results must not depend on worker count");
}

#[test]
fn different_seeds_give_different_functions() {
    let p1 = data("p1.pat");
    let base = ["transfer-gap", "--pattern", p1.to_str().unwrap(), "--N", "11"];
    let mut a_args: Vec<&str> = base.to_vec();
    a_args.extend(["--seed", "1"]);
    let mut b_args: Vec<&str> = base.to_vec();
    b_args.extend(["--seed", "2"]);
    let a = json_of(&run(&a_args));
    let b = json_of(&run(&b_args));
    assert_ne!(a["result"]["lambda_poly"], b["result"]["lambda_poly"]);
}

#[test]
fn quadratic_phase_gap_through_cli() {
    let p2 = data("p2.pat");
    let v = json_of(&run(&[
        "transfer-gap",
        "--pattern",
        p2.to_str().unwrap(),
        "--N",
        "11",
        "--fn",
        "quadphase:-3",
        "--fn",
        "quadphase:1",
        "--fn",
        "quadphase:1",
        "--fn",
        "quadphase:1",
        "--fn",
        "quadphase:1",
        "--fn",
        "quadphase:-1",
    ]));
    let gap = v["result"]["gap"].as_f64().unwrap();
    assert!(gap > 0.9, "gap = {gap}");
    let re = v["result"]["lambda_poly"]["re"].as_f64().unwrap();
    assert!((re - 1.0).abs() < 1e-10);
}

#[test]
fn gowers_cli_computes_gauss_sum_norm() {
    let v = json_of(&run(&["gowers", "--N", "7", "--s", "2", "--fn", "quadphase:1"]));
    let norm = v["result"]["norm"].as_f64().unwrap();
    assert!((norm - 7f64.powf(-0.25)).abs() < 1e-9);
    // Fourier mode agrees.
    let w = json_of(&run(&["gowers", "--N", "7", "--s", "2", "--fn", "quadphase:1", "--mode", "u2-fourier"]));
    assert!((w["result"]["norm"].as_f64().unwrap() - norm).abs() < 1e-9);
}

#[test]
fn gp_norm_cli_point_mass_is_one() {
    let v = json_of(&run(&["gp-norm", "--N", "16", "--fn", "const", "--measure", "point:0"]));
    assert!((v["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["result"]["method"], Value::from("exact"));
}

#[test]
fn hensel_check_cli_reports_equality() {
    let v = json_of(&run(&[
        "hensel-check", "--q", "2*y + 5*y^2", "--ref", "2*y", "--modulus", "25",
    ]));
    assert_eq!(v["result"]["equal"], Value::Bool(true));
    assert_eq!(v["result"]["hypotheses_met"], Value::Bool(true));
    let w = json_of(&run(&["hensel-check", "--q", "y^2", "--ref", "y", "--modulus", "4"]));
    assert_eq!(w["result"]["equal"], Value::Bool(false));
}

#[test]
fn wtrick_cli_reports_structure() {
    let poly = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/patterns/wtrick-demo.poly");
    let v = json_of(&run(&["wtrick", "--poly", poly.to_str().unwrap(), "--w", "3"]));
    let r = &v["result"];
    assert_eq!(r["d"], Value::from(4));
    assert_eq!(r["d_prime"], Value::from(2));
    assert_eq!(r["epsilon"], Value::from(-1));
    assert_eq!(r["lcm_divides_W"], Value::Bool(true));
    // W = 3 * 2^8 * 3^8 = 5038848 and P_W = y^2 - W^2 y^4.
    assert_eq!(r["W"], Value::from("5038848"));
    let pw = r["p_w"].as_str().unwrap();
    assert!(pw.contains("y^2") && pw.contains("y^4"), "P_W = {pw}");
    for check in r["hensel_checks"].as_array().unwrap() {
        assert_eq!(check["report"]["equal"], Value::Bool(true), "{check}");
    }
}

#[test]
fn extremal_cli_exact_and_greedy() {
    let p1 = data("p1.pat");
    let v = json_of(&run(&["extremal", "--pattern", p1.to_str().unwrap(), "--N", "11"]));
    assert_eq!(v["result"]["exact"], Value::Bool(true));
    let r_exact = v["result"]["r"].as_u64().unwrap();
    let g = json_of(&run(&[
        "extremal", "--pattern", p1.to_str().unwrap(), "--N", "11", "--greedy", "5",
    ]));
    assert_eq!(g["result"]["exact"], Value::Bool(false));
    assert!(g["result"]["r"].as_u64().unwrap() <= r_exact);
    let g2 = json_of(&run(&[
        "extremal", "--pattern", p1.to_str().unwrap(), "--N", "11", "--greedy", "5",
    ]));
    assert_eq!(g["result"]["witness"], g2["result"]["witness"]);
}

#[test]
fn extremal_check_set_uses_subset_file() {
    let dir = tempfile::tempdir().unwrap();
    let subset = dir.path().join("set.txt");
    std::fs::write(&subset, "0\n1\n").unwrap();
    let threeap = dir.path().join("3ap.pat");
    std::fs::write(&threeap, "0\ny\n2*y\n").unwrap();
    let v = json_of(&run(&[
        "extremal",
        "--pattern",
        threeap.to_str().unwrap(),
        "--N",
        "5",
        "--check-set",
        subset.to_str().unwrap(),
    ]));
    let check = &v["result"]["check_set"];
    assert_eq!(check["is_free"], Value::Bool(true));
    assert_eq!(check["size"], Value::from(2));
}

#[test]
fn csv_format_flattens_numeric_fields() {
    let p1 = data("p1.pat");
    let out = run(&[
        "transfer-gap", "--pattern", p1.to_str().unwrap(), "--N", "11", "--format", "csv",
    ]);
    assert!(out.status.success());
    let body = String::from_utf8_lossy(&out.stdout);
    let header = body.lines().next().unwrap();
    assert!(header.contains("gap"));
    assert!(header.contains("modulus"));
    assert!(header.ends_with("config"));
}

#[test]
fn output_file_is_written_atomically_and_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = data("p1.pat");
    let out = dir.path().join("report.json");
    let mut bodies = Vec::new();
    for _ in 0..2 {
        let st = bin()
            .args([
                "classify",
                "--pattern",
                p1.to_str().unwrap(),
                "--degree-bound",
                "2",
                "--output",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(st.success());
        bodies.push(std::fs::read_to_string(&out).unwrap());
    }
    let a: Value = serde_json::from_str(&bodies[0]).unwrap();
    let b: Value = serde_json::from_str(&bodies[1]).unwrap();
    assert_eq!(stripped(a), stripped(b));
    // No temp droppings left behind.
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn reproduce_passes_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut bodies = Vec::new();
    for _ in 0..2 {
        let o = bin().args(["reproduce", "--output", out.to_str().unwrap()]).output().unwrap();
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
        let stdout = String::from_utf8_lossy(&o.stdout);
        assert!(stdout.lines().any(|l| l.starts_with("PASS")));
        assert!(!stdout.contains("FAIL"));
        bodies.push(std::fs::read_to_string(&out).unwrap());
    }
    let a: Value = serde_json::from_str(&bodies[0]).unwrap();
    let b: Value = serde_json::from_str(&bodies[1]).unwrap();
    assert_eq!(a["result"]["all_passed"], Value::Bool(true));
    assert_eq!(stripped(a), stripped(b), "reproduce must be byte-stable");
}

#[test]
fn budget_env_var_caps_enumeration() {
    let p1 = data("p1.pat");
    let out = bin()
        .args(["gowers", "--N", "101", "--s", "3", "--fn", "randpm1:1"])
        .env("PATKIT_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "budget overrun is a computational error");
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    // Sanity: the same command succeeds with the default budget.
    let ok = run(&["gowers", "--N", "101", "--s", "3", "--fn", "randpm1:1"]);
    assert!(ok.status.success());
    let _ = p1;
}

#[test]
fn reports_validate_against_published_schema() {
    let schema_text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/report.schema.json"),
    )
    .unwrap();
    let schema: Value = serde_json::from_str(&schema_text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");

    let p1 = data("p1.pat");
    let p1s = p1.to_str().unwrap();
    let outputs = vec![
        json_of(&run(&["classify", "--pattern", p1s, "--degree-bound", "2"])),
        json_of(&run(&["transfer-gap", "--pattern", p1s, "--N", "11"])),
        json_of(&run(&["gowers", "--N", "7", "--s", "2", "--fn", "quadphase:1"])),
        json_of(&run(&["gp-norm", "--N", "12", "--fn", "const", "--measure", "pm:3", "--measure", "pm:3"])),
        json_of(&run(&["hensel-check", "--q", "2*y + 5*y^2", "--ref", "2*y", "--modulus", "25"])),
        json_of(&run(&["extremal", "--pattern", p1s, "--N", "7"])),
    ];
    for v in outputs {
        let result = compiled.validate(&v);
        if let Err(errors) = result {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("schema violation for {}: {msgs:?}", v["config"]["command"]);
        }
    }
}
