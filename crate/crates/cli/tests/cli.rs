use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn flagric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::compile(&value).unwrap()
}

fn assert_valid(schema: &JSONSchema, doc: &Value, what: &str) {
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("{what}: {}", msgs.join("; "));
    }
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reports_match_schema() {
    let s = schema("run_report.schema.json");
    let runs: &[&[&str]] = &[
        &["summands", "B:2,2,1", "--json"],
        &["troots", "C:2,2", "--json"],
        &["solve", "A:1,1,1", "--starts", "40", "--json"],
        &[
            "solve",
            "C:2;tail=3",
            "--starts",
            "20",
            "--json",
            "--timing",
        ],
        &["verify", "D:2,2", "--json"],
    ];
    for args in runs {
        let doc = json_of(&flagric(args));
        assert_valid(&s, &doc, &args.join(" "));
    }
}

#[test]
fn systems_match_schema() {
    let s = schema("einstein_system.schema.json");
    for spec in [
        "A:1,1,1",
        "B:2,1;tail=2",
        "C:2;tail=3",
        "D:2,1;tail=4",
        "B:1,1,1",
    ] {
        for flavor in ["generated", "explicit"] {
            for edition in ["printed", "corrected"] {
                let doc = json_of(&flagric(&[
                    "system",
                    spec,
                    "--flavor",
                    flavor,
                    "--edition",
                    edition,
                ]));
                assert_valid(&s, &doc, spec);
                assert_eq!(doc["spec"], spec);
                let eqs = doc["labels"].as_array().unwrap().len();
                assert_eq!(doc["terms"].as_array().unwrap().len(), eqs);
                assert_eq!(doc["rhs"].as_array().unwrap().len(), eqs);
            }
        }
    }
}

#[test]
fn explicit_c_tail_keeps_constant() {
    let doc = json_of(&flagric(&["system", "C:2;tail=3", "--flavor", "explicit"]));
    assert!(doc["rhs"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["times_c"] == true));
    let poly = flagric(&[
        "system",
        "C:2;tail=3",
        "--format",
        "poly",
        "--flavor",
        "explicit",
    ]);
    assert!(String::from_utf8_lossy(&poly.stdout).contains("# var c = einstein constant"));
}

#[test]
fn poly_lines() {
    let out = flagric(&[
        "system", "A:1,1,1", "--format", "poly", "--flavor", "explicit",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("# var x_")).count(),
        3
    );
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| flagric(args).status.code().unwrap();
    assert_eq!(code(&["summands", "A:1,1"]), 0);
    assert_eq!(code(&["summands", "E:1,1"]), 2);
    assert_eq!(code(&["summands", "A:1,1;tail=2"]), 2);
    assert_eq!(code(&["summands", "B:2;tail=1"]), 2);
    assert_eq!(code(&["system", "A:1,1,1", "--format", "xml"]), 2);
    assert_eq!(code(&["system", "A:1,1,1", "--flavor", "other"]), 2);
    assert_eq!(code(&["solve", "A:1,1,1", "--starts", "0"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["verify", "--suite", "nightly"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn format_error_message() {
    let out = flagric(&["system", "A:1,1,1", "--format", "xml"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("xml"));
}

#[test]
fn solve_is_byte_identical() {
    let args = [
        "solve", "B:1,1", "--starts", "120", "--seed", "11", "--json",
    ];
    let a = flagric(&args);
    let b = flagric(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for threads in ["1", "4"] {
        let c = Command::new(env!("CARGO_BIN_EXE_flagric"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(a.stdout, c.stdout, "{threads} threads");
    }
    let table_a = flagric(&args[..6]);
    let table_b = flagric(&args[..6]);
    assert_eq!(table_a.stdout, table_b.stdout);
}

#[test]
fn solve_reports_a111() {
    let doc = json_of(&flagric(&[
        "solve", "A:1,1,1", "--starts", "200", "--seed", "7", "--json",
    ]));
    assert_eq!(doc["seed"], 7);
    let sols = doc["result"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    assert_eq!(sols.iter().filter(|s| s["kaehler"] == true).count(), 3);
    assert!(doc.get("timing").is_none());
}

#[test]
fn out_writes_file_only_when_asked() {
    let dir = std::env::temp_dir().join(format!("flagric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("summands.json");
    let out = flagric(&[
        "summands",
        "C:1,1,1",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["count"], 9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_spec_runs_equivalence() {
    let doc = json_of(&flagric(&["verify", "B:2,1;tail=2", "--json"]));
    let checks = doc["result"]["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"equivalence"));
    assert!(names.contains(&"family_agreement"));
    assert_eq!(doc["result"]["passed"], true);
}
