use std::path::PathBuf;
use std::process::{Command, Output};

use clap::Parser;
use serde_json::Value;
use skewpencil_cli::{execute, Cli, CliError};

const N5: &str = r#"{"field":"Q","n":5,
"N0":[["0","1","0","0","0"],["-1","0","0","0","0"],["0","0","0","1","0"],["0","0","-1","0","0"],["0","0","0","0","0"]],
"N1":[["0","0","0","0","0"],["0","0","1","0","0"],["0","-1","0","0","0"],["0","0","0","0","1"],["0","0","0","-1","0"]]}"#;

const BLOCK4: &str = r#"{"n":4,
"N0":[["0","1","0","0"],["-1","0","0","0"],["0","0","0","0"],["0","0","0","0"]],
"N1":[["0","0","0","0"],["0","0","0","0"],["0","0","0","1"],["0","0","-1","0"]]}"#;

const REPEATED4: &str = r#"{"n":4,
"N0":[["0","1","0","0"],["-1","0","0","0"],["0","0","0","1"],["0","0","-1","0"]],
"N1":[["0","1","1","0"],["-1","0","0","0"],["-1","0","0","1"],["0","0","-1","0"]]}"#;

const LINES6: &str = r#"{"lines":[
[["1","0","0","0","0","0"],["0","1","0","0","0","0"]],
[["0","0","1","0","0","0"],["0","0","0","1","0","0"]],
[["1","1","1","1","1","0"],["0","0","0","0","1","1"]]]}"#;

const FORMS5: &str = r#"{"forms":[
{"degree":2,"coeffs":["0","0","1"]},{"degree":2,"coeffs":["0","1","0"]},{"degree":2,"coeffs":["1","0","0"]},
{"degree":2,"coeffs":["1","1","1"]},{"degree":2,"coeffs":["2","-1","3"]}]}"#;

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewpencil")).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (v, out.status.code().unwrap())
}

fn check<'a>(cert: &'a Value, name: &str) -> &'a Value {
    cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn pfaffian_of_standard_odd_pencil() {
    let p = fixture("n5.json", N5);
    let (cert, code) = run_json(&["pfaffian", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let subs = cert["outputs"]["subpfaffians"].as_array().unwrap();
    let coeffs: Vec<Vec<&str>> = subs
        .iter()
        .map(|f| f["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect())
        .collect();
    assert_eq!(
        coeffs,
        vec![
            vec!["0", "0", "1"],
            vec!["0", "0", "0"],
            vec!["0", "1", "0"],
            vec!["0", "0", "0"],
            vec!["1", "0", "0"],
        ]
    );
}

#[test]
fn pfaffian_of_scalar_matrix_is_certified() {
    let p = fixture("s2.json", r#"[["0","3"],["-3","0"]]"#);
    let (cert, code) = run_json(&["pfaffian", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(cert["outputs"]["pfaffian"], "3");
    let sq = check(&cert, "pfaffian-squared-equals-determinant");
    assert_eq!(sq["pass"], true);
    assert_eq!(sq["witness"]["determinant"], "9");
}

#[test]
fn non_skew_input_is_rejected_with_location() {
    let p = fixture("bad.json", r#"[["1","3"],["-3","0"]]"#);
    let out = run(&["pfaffian", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("matrix not skew-symmetric at (1,1)"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn syntax_errors_report_position() {
    let p = fixture("syntax.json", "[[\"0\", \"1\"],\n [\"-1\" \"0\"]]");
    let out = run(&["pfaffian", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn deglocus_of_block_pencil() {
    let p = fixture("block4.json", BLOCK4);
    let (cert, code) = run_json(&["deglocus", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(cert["outputs"]["lines"].as_array().unwrap().len(), 2);
    assert_eq!(check(&cert, "lines-span")["pass"], true);
    assert_eq!(check(&cert, "lines-are-kernels")["pass"], true);
}

#[test]
fn repeated_root_fails_the_certificate() {
    let p = fixture("rep4.json", REPEATED4);
    let (cert, code) = run_json(&["deglocus", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(cert["pass"], false);
    let g = check(&cert, "generic-locus");
    assert_eq!(g["pass"], false);
    let w = g["witness"].to_string();
    assert!(w.contains("repeated root") && w.contains("[1:-1]"), "{w}");
}

#[test]
fn deglocus_of_odd_pencil_parameterizes() {
    let p = fixture("n5-locus.json", N5);
    let (cert, code) = run_json(&["deglocus", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(check(&cert, "span-rank")["pass"], true);
}

#[test]
fn even_fiber_recovers_lines() {
    let p = fixture("lines6.json", LINES6);
    for field in ["Q", "Fp:101"] {
        let (cert, code) = run_json(&["even-fiber", "--lines", p.to_str().unwrap(), "--seed", "5", "--field", field]);
        assert_eq!(code, 0, "{field}: {cert}");
        assert_eq!(check(&cert, "locus-equals-input")["pass"], true);
        assert_eq!(check(&cert, "construction-paths-agree")["pass"], true);
    }
}

#[test]
fn even_fiber_rejects_non_spanning_lines() {
    let p = fixture(
        "dependent.json",
        r#"[[["1","0","0","0"],["0","1","0","0"]],[["1","1","0","0"],["0","0","1","0"]]]"#,
    );
    let out = run(&["even-fiber", "--input", p.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn gauss_dimension_for_n6() {
    let (cert, code) = run_json(&["gauss-dim", "--n", "6", "--trials", "3"]);
    assert_eq!(code, 0);
    assert_eq!(check(&cert, "gauss-fiber-dimension")["pass"], true);
    assert_eq!(cert["outputs"]["dimensions"], serde_json::json!([5, 5, 5]));
}

#[test]
fn odd_realize_and_fiber() {
    let p = fixture("forms5.json", FORMS5);
    let (cert, code) = run_json(&["odd-realize", "--forms", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(check(&cert, "proportional")["pass"], true);
    let (cert, code) = run_json(&["odd-fiber", "--forms", p.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(cert["outputs"]["dimension"], 6);
    assert_eq!(check(&cert, "sample-certified")["pass"], true);
}

#[test]
fn odd_realize_rejects_common_factor() {
    // Every form vanishes at y1 = 0.
    let p = fixture(
        "common.json",
        r#"[{"degree":2,"coeffs":["0","1","0"]},{"degree":2,"coeffs":["0","0","1"]},{"degree":2,"coeffs":["0","1","1"]},
            {"degree":2,"coeffs":["0","2","1"]},{"degree":2,"coeffs":["0","1","3"]}]"#,
    );
    let out = run(&["odd-realize", "--forms", p.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "algebra", "--trials", "100", "--seed", "1"][..],
        &["verify", "even", "--n", "6", "--seed", "2"][..],
        &["verify", "odd", "--n", "5", "--seed", "3"][..],
        &["verify", "all", "--trials", "3", "--field", "Fp:3"][..],
    ] {
        let (cert, code) = run_json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(cert["outputs"]["failed"], 0);
    }
}

#[test]
fn output_is_deterministic() {
    let p = fixture("lines6-det.json", LINES6);
    let args = ["even-fiber", "--input", p.to_str().unwrap(), "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "odd", "--n", "5", "--trials", "2", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn seeds_change_samples() {
    let p = fixture("lines6-seed.json", LINES6);
    let a = run_json(&["even-fiber", "--input", p.to_str().unwrap(), "--seed", "1"]).0;
    let b = run_json(&["even-fiber", "--input", p.to_str().unwrap(), "--seed", "2"]).0;
    assert_eq!(a["inputs_digest"] == b["inputs_digest"], a["inputs"] == b["inputs"]);
    assert_ne!(a["outputs"], b["outputs"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "odd", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["gauss-dim", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gauss-dim", "--n", "4", "--field", "Fp:8"]).status.code(), Some(2));
    assert_eq!(run(&["pfaffian"]).status.code(), Some(2));
    assert_eq!(run(&["pfaffian", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn declared_field_conflict_is_a_usage_error() {
    let p = fixture("n5-conflict.json", N5);
    let cli = Cli::parse_from(["skewpencil", "pfaffian", "--input", p.to_str().unwrap(), "--field", "Fp:7"]);
    assert!(matches!(execute(&cli), Err(CliError::Usage(_))));
}

#[test]
fn text_format_lists_checks() {
    let p = fixture("s2-text.json", r#"[["0","3"],["-3","0"]]"#);
    let out = run(&["pfaffian", "--input", p.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Pf = 3"));
    assert!(text.contains("PASS pfaffian-squared-equals-determinant"));
    assert!(text.trim_end().ends_with("result PASS"));
}
