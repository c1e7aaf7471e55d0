use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use spherical_tduality::model_file::{emit_document, parse_document};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sphtd-{}-{name}", std::process::id()))
}

fn sphtd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphtd")).args(args).output().expect("run sphtd")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = sphtd(&full);
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, value)
}

#[test]
fn bundled_models_round_trip_byte_for_byte() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(emit_document(&doc), text, "{}", path.display());
        count += 1;
    }
    assert!(count >= 6);
}

#[test]
fn hopf_example() {
    let (code, r) = json(&["example", "hopf", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["left"]["twisted"], serde_json::json!([0, 0]));
    assert_eq!(r["right"]["twisted"], serde_json::json!([0, 0]));
    assert_eq!(r["verification"]["unimodular"], true);
    assert_eq!(r["isomorphism"], true);
}

#[test]
fn trivial_example_shift() {
    let (code, r) = json(&["example", "trivial", "--n", "1", "--k", "2", "--base", "cp2"]);
    assert_eq!(code, 0);
    assert_eq!(r["shift"], 3);
    assert_eq!(r["modulus"], 4);
    assert_eq!(r["left"]["twisted"], serde_json::json!([2, 2, 1, 1]));
    assert_eq!(r["right"]["twisted"], serde_json::json!([2, 1, 1, 2]));
}

#[test]
fn every_scenario_passes_with_defaults() {
    for name in ["hopf", "trivial", "zero-twist", "kahler"] {
        let out = sphtd(&["example", name]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn dualize_with_lambda_two() {
    let path = model("hopf_s3.model");
    let (code, r) = json(&["dualize", path.to_str().unwrap(), "--lambda", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["witness"]["pairing"], "1/2");
    assert_eq!(r["unimodular"], false);
    assert_eq!(r["verification"]["differential_identity"], true);
}

#[test]
fn dualize_then_verify_and_tamper() {
    let out_path = scratch("dual.pair");
    let out = sphtd(&[
        "dualize",
        model("kahler_cp1xcp1.model").to_str().unwrap(),
        "--lambda",
        "1/3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (code, r) = json(&["verify", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verification"]["pairing"], "3/1");
    assert_eq!(r["isomorphism"], true);

    let text = std::fs::read_to_string(&out_path).unwrap();
    let tampered = scratch("tampered.pair");
    std::fs::write(&tampered, text.replace("\"pairing\": \"3/1\"", "\"pairing\": \"0/1\"")).unwrap();
    let (code, r) = json(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(r["verification"]["nondegenerate"], false);
    let _ = std::fs::remove_file(out_path);
    let _ = std::fs::remove_file(tampered);
}

#[test]
fn verify_bundled_pair() {
    let (code, r) = json(&["verify", model("hopf_s3_dual.pair").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["left_dims"], serde_json::json!([0, 0]));
}

#[test]
fn exit_codes() {
    let empty = scratch("empty.model");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(sphtd(&["cohomology", empty.to_str().unwrap()]).status.code(), Some(2));

    let text = std::fs::read_to_string(model("hopf_s3.model")).unwrap();
    let bad_degree = scratch("bad_degree.model");
    std::fs::write(&bad_degree, text.replacen("\"fiber_dim\": 1", "\"fiber_dim\": 3", 1)).unwrap();
    let out = sphtd(&["cohomology", bad_degree.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must have degree 4"));

    assert_eq!(sphtd(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(sphtd(&["example", "nonexistent"]).status.code(), Some(1));
    let hopf = model("hopf_s3.model");
    assert_eq!(sphtd(&["dualize", hopf.to_str().unwrap(), "--lambda", "x/2"]).status.code(), Some(1));
    assert_eq!(sphtd(&["dualize", hopf.to_str().unwrap(), "--lambda", "0"]).status.code(), Some(1));
    assert_eq!(sphtd(&["twisted", "/nonexistent/file.model"]).status.code(), Some(2));
    let _ = std::fs::remove_file(empty);
    let _ = std::fs::remove_file(bad_degree);
}

#[test]
fn reports_are_deterministic() {
    let path = model("torus4_s1.model");
    for args in [
        vec!["verify", path.to_str().unwrap()],
        vec!["twisted", path.to_str().unwrap()],
        vec!["example", "kahler", "--format", "json"],
    ] {
        assert_eq!(sphtd(&args).stdout, sphtd(&args).stdout);
    }
}

#[test]
fn cohomology_of_the_hopf_bundle() {
    let (code, r) = json(&["cohomology", model("hopf_s3.model").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["bundle"]["de_rham"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(r["bundle"]["gysin"], serde_json::json!([1, 0, 0, 1]));
}
