use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema")
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(docs().join(format!("{name}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::draft202012::new(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

fn run(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_transproj"))
        .args(args)
        .output()
        .unwrap();
    serde_json::from_slice(&out.stdout).unwrap()
}

fn corpus() -> impl Iterator<Item = PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.to_string_lossy().ends_with(".expected.json"))
        .collect();
    v.sort();
    v.into_iter()
}

#[test]
fn corpus_documents_match_the_session_schema() {
    let v = validator("session");
    for p in corpus() {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_valid(&v, &doc, &p.display().to_string());
    }
}

#[test]
fn corpus_triples_match_the_triple_schema() {
    let v = validator("triple");
    let f = validator("form");
    for p in corpus() {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        if let Some(t) = doc.get("triple") {
            assert_valid(&v, t, &p.display().to_string());
            assert_valid(&f, &t["alpha"], "alpha");
        }
    }
}

#[test]
fn schema_rejects_unknown_keys() {
    let v = validator("session");
    assert!(!v.is_valid(&serde_json::json!({ "tripel": {} })));
    assert!(!validator("form").is_valid(&serde_json::json!({ "chart": ["x"], "x": "1" })));
}

#[test]
fn normalize_transcript_matches_its_schema() {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/riccati-d2.json");
    let r = run(&["normalize", p.to_str().unwrap()]);
    assert_valid(&validator("transcript"), &r["transcript"], "transcript");
    assert_valid(&validator("triple"), &r["triple"], "normal form");
}

#[test]
fn monodromy_report_matches_its_schema() {
    let v = validator("monodromy-report");
    for name in ["three-point", "riccati-d1"] {
        let p = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("corpus/{name}.json"));
        let r = run(&["monodromy", p.to_str().unwrap()]);
        assert_valid(&v, &r, name);
    }
}
