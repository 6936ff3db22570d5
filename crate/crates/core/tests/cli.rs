use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.json"))
}

fn scratch(tag: &str, v: &Value) -> PathBuf {
    let p = std::env::temp_dir().join(format!("transproj-{}-{tag}.json", std::process::id()));
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn run(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_transproj"))
        .args(args)
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn run_on(verb: &str, path: &Path, extra: &[&str]) -> (Value, i32) {
    let mut args = vec![verb, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn brunella_checks_out() {
    let (v, code) = run_on("check", &corpus("brunella-very-special"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], json!(true));
    let (v, _) = run_on(
        "degree",
        &corpus("brunella-very-special"),
        &["--seed", "17"],
    );
    assert_eq!(v["degree"], json!(2));
    assert_eq!(v["seed"], json!(17));
}

#[test]
fn bundled_corpus_passes() {
    let (v, code) = run(&["corpus", "run"]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["ok"], json!(true));
    let (list, _) = run(&["corpus", "list"]);
    assert!(list["entries"].as_array().unwrap().len() >= 8);
}

#[test]
fn corpus_directory_matches_bundle() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let (v, code) = run(&["corpus", "run", "--corpus-dir", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], json!(true));
}

#[test]
fn normalize_then_replay_reproduces_the_digest() {
    let src = corpus("riccati-d2");
    let (n, code) = run_on("normalize", &src, &[]);
    assert_eq!(code, 0);
    let tr = scratch("transcript", &n["transcript"]);
    let (r, code) = run_on("replay", &src, &["--transcript", tr.to_str().unwrap()]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["final_digest"], n["transcript"]["final_digest"]);
    assert_eq!(r["section"], n["section"]);
}

#[test]
fn normal_forms_are_fixed_points() {
    let (n, _) = run_on("normalize", &corpus("riccati-d1"), &[]);
    let doc = json!({ "triple": n["triple"], "section": n["section"] });
    let path = scratch("normal", &doc);
    let (again, code) = run_on("normalize", &path, &[]);
    assert_eq!(code, 0);
    assert_eq!(again["transcript"]["steps"], json!([]));
    let (c, _) = run_on("compare", &path, &["--other", path.to_str().unwrap()]);
    assert_eq!(c["verdict"], json!("isomorphic"), "{c:#}");
}

#[test]
fn exit_codes() {
    let conj = scratch(
        "conjugate",
        &json!({
            "triple": {
                "alpha": { "chart": ["x", "y"], "dx": "2/x" },
                "beta": { "chart": ["x", "y"] },
                "gamma": { "chart": ["x", "y"], "dx": "-1/x" }
            },
            "component": "x"
        }),
    );
    let (v, code) = run_on("component", &conj, &[]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], json!("needs-extension"));
    let (v, code) = run_on("component", &conj, &["--extension", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["extension"], json!("2"));

    let chain = json!({
        "triple": {
            "alpha": { "chart": ["x", "y"] },
            "beta": { "chart": ["x", "y"], "dx": "-3/x" },
            "gamma": { "chart": ["x", "y"] }
        },
        "config": { "iteration_cap": 1 }
    });
    let (v, code) = run_on(
        "normalize",
        &scratch("capped", &chain),
        &["--component", "x"],
    );
    assert_eq!(code, 4, "{v:#}");
    assert_eq!(v["error"]["kind"], json!("budget"));

    let (_, code) = run(&["no-such-verb", "x.json"]);
    assert_eq!(code, 2);
    let (v, code) = run_on("degree", &corpus("hilbert-modular"), &[]);
    assert_eq!(code, 2);
    assert_eq!(v["ok"], json!(false));
    let seedless = json!({ "foliation": { "chart": ["x", "y", "z"], "dy": "-z", "dz": "y" } });
    let (v, code) = run_on("degree", &scratch("seedless", &seedless), &[]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("seed"));
}

#[test]
fn elementary_move_reports_the_pole_change() {
    let doc = json!({
        "triple": {
            "alpha": { "chart": ["x", "y"] },
            "beta": { "chart": ["x", "y"], "dx": "-3/x" },
            "gamma": { "chart": ["x", "y"] }
        },
        "move": { "component": "x", "center": ["1", "0"] }
    });
    let (v, code) = run_on("elm", &scratch("elm", &doc), &[]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["pole_change"]["actual"], v["pole_change"]["predicted"]);
}

#[test]
fn chart_switch_moves_the_line_at_infinity() {
    let src = corpus("riccati-d1");
    let (z, _) = run_on("polar", &src, &[]);
    let (x, code) = run_on("polar", &src, &["--chart", "x"]);
    assert_eq!(code, 0, "{x:#}");
    // the chart x = 1 sees the line at infinity as z = 0
    assert!(x["components"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["component"] == json!("z")));
    assert!(z["plane"].is_object());
}

#[test]
fn lift_reports() {
    let (v, code) = run_on("lift", &corpus("lift-warning"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["lifts"], json!(false));
    let (m, _) = run_on("monodromy", &corpus("three-point"), &[]);
    assert_eq!(m["lift"]["lifts"], json!(true));
    assert!(m["monodromy"]["relation_residual"].as_f64().unwrap() < 1e-6);
}
