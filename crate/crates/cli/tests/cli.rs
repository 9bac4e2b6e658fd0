use std::fs;
use std::process::Command;

use parafuse_cli::document::{Kind, OutputDocument};
use parafuse_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("parafuse").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn document(args: &[&str]) -> OutputDocument {
    let o = invoke(args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn fuse_ising_sigma() {
    let doc = document(&["fuse", "--k", "2", "--a", "1,0", "--b", "1,0"]);
    assert_eq!(doc.kind, Kind::Fusion);
    assert_eq!(doc.payload["products"], json!([[2, 0], [2, 1]]));
    let text = invoke(&[
        "fuse", "--k", "2", "--a", "1,0", "--b", "1,0", "--format", "table",
    ])
    .stdout;
    assert!(text.contains("{(2,0),(2,1)}"), "{text}");
}

#[test]
fn fuse_accepts_raw_labels() {
    // (0,1) is identified with (2,1) at k=2
    let doc = document(&["fuse", "--k", "2", "--a", "0,1", "--b", "1,0"]);
    assert_eq!(doc.payload["a"], json!([0, 1]));
    assert_eq!(doc.payload["products"], json!([[1, 0]]));
}

#[test]
fn qdim_csv_level_four() {
    let o = invoke(&["qdim", "--k", "4", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some("m,n,value,closed_form"));
    let row = lines.find(|l| l.starts_with("2,0,")).unwrap();
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - 2.0).abs() < 1e-12);
    assert_eq!(o.stdout.lines().count(), 1 + 10);
}

#[test]
fn weights_are_exact_fractions() {
    let doc = document(&["weights", "--k", "2"]);
    let weights: Vec<&str> = doc.payload["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["weight"].as_str().unwrap())
        .collect();
    assert_eq!(weights, ["1/16", "0/1", "1/2"]);
}

#[test]
fn label_order_matches_enumeration() {
    for k in 2..=6 {
        let ks = k.to_string();
        let doc = document(&["labels", "--k", &ks]);
        let got: Vec<Value> = doc.payload["labels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["label"].clone())
            .collect();
        let level = parafuse::Level::new(k).unwrap();
        let want: Vec<Value> = level
            .labels()
            .iter()
            .map(|l| json!([l.m(), l.n()]))
            .collect();
        assert_eq!(got, want);

        let s = document(&["smatrix", "--k", &ks]);
        assert_eq!(s.payload["order"], Value::Array(want));
    }
}

#[test]
fn smatrix_entries_are_complex_objects() {
    let doc = document(&["smatrix", "--k", "2"]);
    let e = &doc.payload["entries"][1][1];
    assert!((e["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(e["im"].as_f64().unwrap().abs() < 1e-12);
    assert!((doc.payload["kappa"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn documents_round_trip() {
    for args in [
        &["labels", "--k", "3"][..],
        &["weights", "--k", "5"],
        &["qdim", "--k", "4"],
        &["smatrix", "--k", "3"],
        &["table", "--k", "4"],
        &["char", "--k", "2", "--trunc", "5"],
        &["verify", "--k", "2", "--trunc", "6"],
    ] {
        let o = invoke(args);
        assert_eq!(o.code, EXIT_OK, "{args:?}: {}", o.stderr);
        let doc: OutputDocument = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(doc.schema_version, "1");
        assert_eq!(doc.to_json(), o.stdout, "{args:?}");
        let again: OutputDocument = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = invoke(&["table", "--k", "5"]).stdout;
    let b = invoke(&["table", "--k", "5"]).stdout;
    assert_eq!(a, b);
    let a = invoke(&["char", "--k", "3", "--trunc", "6", "--format", "csv"]).stdout;
    let b = invoke(&["char", "--k", "3", "--trunc", "6", "--format", "csv"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn verify_ising_passes() {
    let o = invoke(&["verify", "--k", "2"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    let doc: OutputDocument = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.kind, Kind::VerifyReport);
    assert_eq!(doc.payload["passed"], json!(true));
    let status = |name: &str| {
        doc.payload["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .map(|c| c["status"].as_str().unwrap().to_string())
            .unwrap()
    };
    for name in [
        "verlinde.oracle",
        "s-matrix.unitarity",
        "fusion.trig-identity",
        "fusion.qdim-multiplicativity",
    ] {
        assert_eq!(status(name), "pass", "{name}");
    }
}

#[test]
fn verify_tolerance_breach_exits_one() {
    let o = invoke(&["verify", "--k", "3", "--tol", "1e-300"]);
    assert_eq!(o.code, EXIT_FAILED);
    let doc: OutputDocument = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.payload["passed"], json!(false));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["labels", "--k", "1"][..],
        &["labels", "--k", "-3"],
        &["labels"],
        &["frobnicate", "--k", "2"],
        &["labels", "--k", "2", "--colour"],
        &["fuse", "--k", "2", "--a", "1", "--b", "1,0"],
        &["fuse", "--k", "2", "--a", "5,0", "--b", "1,0"],
        &["char", "--k", "2", "--trunc", "1"],
        &["qdim", "--k", "2", "--tol", "-1"],
        &["qdim", "--k", "2", "--format", "xml"],
    ] {
        let o = invoke(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(invoke(&["--help"]).code, EXIT_OK);
    assert!(invoke(&["--version"]).stdout.contains("parafuse"));
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = invoke(&["table", "--k", "8", "--cache-dir", cache]);
    assert_eq!(first.code, EXIT_OK);
    let entry = dir.path().join("table-k8.json");
    assert!(entry.exists());
    let second = invoke(&["table", "--k", "8", "--cache-dir", cache]);
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.is_empty());
    assert_eq!(first.stdout, invoke(&["table", "--k", "8"]).stdout);
}

#[test]
fn cache_is_served_when_valid() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    invoke(&["weights", "--k", "3", "--cache-dir", cache]);
    let entry = dir.path().join("weights-k3.json");
    // a planted entry with the right provenance is returned as-is
    let mut doc: OutputDocument =
        serde_json::from_str(&fs::read_to_string(&entry).unwrap()).unwrap();
    doc.payload = json!({ "weights": [] });
    fs::write(&entry, doc.to_json()).unwrap();
    let o = invoke(&["weights", "--k", "3", "--cache-dir", cache]);
    assert_eq!(o.stdout, doc.to_json());
}

#[test]
fn corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let clean = invoke(&["qdim", "--k", "5"]).stdout;
    fs::write(dir.path().join("qdim-k5.json"), "{ not json").unwrap();
    let o = invoke(&["qdim", "--k", "5", "--cache-dir", cache]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, clean);
    assert!(o.stderr.contains("warning"), "{}", o.stderr);
    let rewritten = fs::read_to_string(dir.path().join("qdim-k5.json")).unwrap();
    assert_eq!(rewritten, clean);
}

#[test]
fn tolerance_mismatch_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    invoke(&["smatrix", "--k", "3", "--cache-dir", cache]);
    let o = invoke(&["smatrix", "--k", "3", "--tol", "1e-8", "--cache-dir", cache]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains("provenance"), "{}", o.stderr);
    let doc: OutputDocument = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.provenance.tolerances.unitarity, 1e-8);
}

#[test]
fn deleting_cache_changes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let cache = cache.to_str().unwrap();
    let a = invoke(&["char", "--k", "2", "--trunc", "5", "--cache-dir", cache]).stdout;
    fs::remove_dir_all(cache).unwrap();
    let b = invoke(&["char", "--k", "2", "--trunc", "5", "--cache-dir", cache]).stdout;
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("labels.csv");
    let o = invoke(&[
        "labels",
        "--k",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("m,n,partner_m,partner_n\n1,0,"));
}

#[test]
fn binary_reads_cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_parafuse"))
        .args(["labels", "--k", "4"])
        .env("PARAFUSE_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("labels-k4.json").exists());

    let bad = Command::new(env!("CARGO_BIN_EXE_parafuse"))
        .args(["labels", "--k", "0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
