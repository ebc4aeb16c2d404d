use std::io::Write;
use std::process::{Command, Output};

use freeprod::fusion::SpecDocument;
use freeprod::realization::VerificationReport;
use freeprod_cli::output::{
    to_machine, BoxDimsOutput, DecomposeOutput, FreeComposeOutput, HomDimOutput, IrreduciblesOutput, ValidateOutput,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::NamedTempFile;

const Z2_TABLE: &str = r#"{
  "exact": true,
  "zero_cells": ["a"],
  "irreducibles": [
    {"label": "1", "source": "a", "target": "a", "dual": "1", "qdim": 1},
    {"label": "g", "source": "a", "target": "a", "dual": "g", "qdim": 1}
  ],
  "units": {"a": "1"},
  "fusion": [
    {"left": "1", "right": "1", "result": {"1": 1}},
    {"left": "1", "right": "g", "result": {"g": 1}},
    {"left": "g", "right": "1", "result": {"g": 1}},
    {"left": "g", "right": "g", "result": {"1": 1}}
  ]
}"#;

/// x and y claim each other as duals but y's dual is z.
const BROKEN_DUAL: &str = r#"{
  "exact": true,
  "zero_cells": ["a"],
  "irreducibles": [
    {"label": "1", "source": "a", "target": "a", "dual": "1", "qdim": 1},
    {"label": "x", "source": "a", "target": "a", "dual": "y", "qdim": 1},
    {"label": "y", "source": "a", "target": "a", "dual": "z", "qdim": 1},
    {"label": "z", "source": "a", "target": "a", "dual": "y", "qdim": 1}
  ],
  "units": {"a": "1"}
}"#;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn freeprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeprod")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Machine output parses into `T` and re-emits byte for byte.
fn round_trip<T: DeserializeOwned + Serialize>(out: &Output) -> T {
    let text = stdout(out);
    let doc: T = serde_json::from_str(&text).unwrap();
    assert_eq!(to_machine(&doc) + "\n", text);
    doc
}

#[test]
fn validate_z2_file() {
    let f = file(Z2_TABLE);
    let out = freeprod(&["--spec", f.path().to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("valid"));
    let out = freeprod(&["--spec", f.path().to_str().unwrap(), "validate", "--format", "machine"]);
    let doc: ValidateOutput = round_trip(&out);
    assert!(doc.clean);
}

#[test]
fn broken_dual_names_the_irreducible() {
    let f = file(BROKEN_DUAL);
    let out = freeprod(&["--spec", f.path().to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("DualInvolution at (x, y)"), "{text}");
    let out = freeprod(&["--spec", f.path().to_str().unwrap(), "validate", "--format", "machine"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: ValidateOutput = round_trip(&out);
    assert!(!doc.clean);
    assert!(doc.factors[0].report.violations.iter().any(|v| v.witness.first().map(String::as_str) == Some("x")));
}

#[test]
fn small_delta_is_a_parameter_error() {
    let out = freeprod(&["--spec", "tlj(1.5)", "validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parameter error"), "{}", stderr(&out));
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let f = file("{\n  \"zero_cells\": [\"a\"],\n  \"irreducibles\": 3\n}");
    let out = freeprod(&["--spec", f.path().to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert_eq!(freeprod(&["--spec", "Z2", "decompose", "[q@1]"]).status.code(), Some(2));
    assert_eq!(freeprod(&["--spec", "Z2", "--max-len", "0", "irreducibles"]).status.code(), Some(2));
    assert_eq!(freeprod(&["--spec", "Z2", "--amalgamate", "S:a@1", "irreducibles"]).status.code(), Some(2));
    assert_eq!(freeprod(&["decompose", "()@a"]).status.code(), Some(2));
    assert_eq!(freeprod(&["--spec", "Z2", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn decompose_examples() {
    let out = freeprod(&["--spec", "Z2", "--spec", "Z2", "decompose", "[g@1][g@1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().next().unwrap().starts_with("()@a : 1"));

    let out = freeprod(&["--spec", "S3", "--spec", "Z2", "decompose", "[std@1][std@1]", "--format", "machine"]);
    let doc: DecomposeOutput = round_trip(&out);
    let terms: Vec<(&str, u64)> = doc.terms.iter().map(|t| (t.word.as_str(), t.mult)).collect();
    assert_eq!(terms, vec![("()@a", 1), ("[sgn@1]", 1), ("[std@1]", 1)]);
    assert!(doc.conserved);
    assert_eq!((doc.total_qdim.as_str(), doc.word_qdim.as_str()), ("4", "4"));

    let out = freeprod(&["--spec", "tlj(2.5)", "--spec", "tlj(3)", "decompose", "[f1@1][f1@2][f1@1]"]);
    let text = stdout(&out);
    let terms: Vec<&str> = text.lines().filter(|l| l.contains(" : ")).collect();
    assert_eq!(terms.len(), 1);
    assert!(terms[0].starts_with("[f1@1][f1@2][f1@1] : 1"));
}

#[test]
fn decompose_bound_too_small() {
    let out = freeprod(&["--spec", "S3", "--spec", "Z2", "--max-len", "1", "decompose", "[std@1][g@2][std@1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bound error"));
}

#[test]
fn hom_dim_and_irreducibles() {
    let out = freeprod(&["--spec", "S3", "--spec", "Z2", "hom-dim", "[std@1][g@2]", "[std@1][g@2]", "--format", "machine"]);
    assert_eq!(round_trip::<HomDimOutput>(&out).hom_dim, 1);
    let out = freeprod(&["--spec", "S3", "--spec", "Z2", "hom-dim", "[std@1][std@1]", "[std@1][sgn@1][std@1]"]);
    assert!(stdout(&out).ends_with("= 3\n"), "{}", stdout(&out));

    let out = freeprod(&["--spec", "Z2", "--spec", "Z2", "irreducibles", "--max-len", "3", "--format", "machine"]);
    let doc: IrreduciblesOutput = round_trip(&out);
    let words: Vec<&str> = doc.irreducibles.iter().map(|i| i.word.as_str()).collect();
    assert_eq!(words, ["()@a", "[g@1]", "[g@2]", "[g@1][g@2]", "[g@2][g@1]", "[g@1][g@2][g@1]", "[g@2][g@1][g@2]"]);
}

#[test]
fn amalgamated_pointed_factors() {
    let out = freeprod(&[
        "--spec",
        "pointed-tlj(2.5)",
        "--spec",
        "pointed-tlj(3)",
        "--amalgamate",
        "*:b@1=a@2",
        "irreducibles",
        "--from",
        "a",
        "--to",
        "b@2",
        "--max-len",
        "2",
        "--irr-depth",
        "1",
        "--format",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: IrreduciblesOutput = round_trip(&out);
    let words: Vec<&str> = doc.irreducibles.iter().map(|i| i.word.as_str()).collect();
    assert_eq!(words, ["[f1_ab@1][f1_ab@2]"]);
    assert_eq!(doc.irreducibles[0].qdim, "7.5");
}

#[test]
fn box_dims_rows() {
    let out = freeprod(&["--spec", "pointed-tlj(2.5)", "box-dims", "6", "--format", "machine"]);
    assert_eq!(round_trip::<BoxDimsOutput>(&out).dims, vec![1, 1, 2, 5, 14, 42, 132]);
    let out = freeprod(&["--spec", "pointed-tlj(2)", "--spec", "pointed-tlj(3)", "box-dims", "5", "--format", "machine"]);
    let doc: BoxDimsOutput = round_trip(&out);
    assert_eq!(doc.dims, vec![1, 1, 3, 12, 55, 273]);
    assert_eq!(doc.point_qdim, "6");
    let out = freeprod(&["--spec", "pointed-tlj(2.5)", "box-dims", "0", "--format", "machine"]);
    assert_eq!(round_trip::<BoxDimsOutput>(&out).dims, vec![1]);
    assert_eq!(freeprod(&["--spec", "tlj(2.5)", "box-dims", "3"]).status.code(), Some(2));
}

#[test]
fn free_compose_and_free_product() {
    let out = freeprod(&["--spec", "pointed-tlj(2.5)", "--spec", "pointed-tlj(3)", "free-compose", "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: FreeComposeOutput = round_trip(&out);
    assert_eq!(doc.point_qdim, "7.5");
    assert!(doc.nondegeneracy.holds());

    let out = freeprod(&["--spec", "S3", "--spec", "Z2", "free-product", "--max-len", "2", "--format", "machine"]);
    let text = stdout(&out);
    let doc = SpecDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json() + "\n", text);
    assert!(doc.exact);
    assert!(doc.irreducibles.iter().any(|e| e.label == "[std@1][g@2]" && e.dual == "[g@2][std@1]"));
}

#[test]
fn group_files_as_sources() {
    let group = file(r#"{"name": "Z2", "order": 2, "labels": ["e", "s"], "table": [0, 1, 1, 0]}"#);
    let reps = file(
        r#"{"irreps": [
            {"label": "1", "matrices": [[[[1, 0]]], [[[1, 0]]]]},
            {"label": "g", "matrices": [[[[1, 0]]], [[[-1, 0]]]]}
        ]}"#,
    );
    let source = format!("rep({},{})", group.path().display(), reps.path().display());
    let out = freeprod(&["--spec", &source, "--spec", "Z3", "decompose", "[g@1][w@2][g@1]"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("[g@1][w@2][g@1] : 1"));
}

#[test]
fn verify_examples() {
    let out = freeprod(&["--spec", "Z3", "--spec", "Z2", "verify", "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let report = VerificationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json() + "\n", text);
    assert!(report.all_pass());
    assert_eq!(report.depth, 3);

    let out = freeprod(&["--spec", "Z3", "--spec", "tlj(2.5)", "verify"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unsupported factor") && err.contains("decompose"), "{err}");

    let out = freeprod(&["--spec", "Z3", "--spec", "Z2", "verify", "--tolerance", "1e-30", "--format", "machine"]);
    assert_eq!(out.status.code(), Some(1));
    let report = VerificationReport::from_json(&stdout(&out)).unwrap();
    let failures: Vec<_> = report.failures().collect();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f.max_deviation.is_some_and(|d| d > 1e-30)));
}

#[test]
fn output_is_deterministic() {
    let args = ["--spec", "S3", "--spec", "Z2", "verify", "--max-len", "2", "--seed", "5", "--format", "machine"];
    assert_eq!(stdout(&freeprod(&args)), stdout(&freeprod(&args)));
    let args = ["--spec", "S3", "--spec", "Z2", "irreducibles", "--max-len", "3"];
    assert_eq!(stdout(&freeprod(&args)), stdout(&freeprod(&args)));
}
