//! The bundled corpus: session documents with sidecar expectations.
//!
//! A sidecar lists checks; each names a verb, optional switches, and a
//! JSON fragment the report must contain (objects match by subset,
//! arrays and scalars must be equal).

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{dispatch, error_report, Options, SessionDocument};
use crate::error::{Error, Result};
use crate::plane::Chart;

macro_rules! entry {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../corpus/", $name, ".json")),
            include_str!(concat!("../../corpus/", $name, ".expected.json")),
        )
    };
}

/// `(name, document, sidecar)` for every bundled entry.
pub const BUNDLED: &[(&str, &str, &str)] = &[
    entry!("brunella-very-special"),
    entry!("hilbert-modular"),
    entry!("riccati-d1"),
    entry!("riccati-d2"),
    entry!("riccati-d3"),
    entry!("riccati-d4"),
    entry!("three-point"),
    entry!("lift-warning"),
];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOptions {
    #[serde(default)]
    pub chart: Option<Chart>,
    #[serde(default)]
    pub extension: Option<i64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub component: Option<String>,
    #[serde(default)]
    pub polar: Option<i64>,
    #[serde(default)]
    pub degree: Option<i64>,
}

impl CheckOptions {
    pub fn options(&self) -> Options {
        Options {
            chart: self.chart,
            extension: self.extension,
            seed: self.seed,
            component: self.component.clone(),
            polar: self.polar,
            degree: self.degree,
            ..Options::default()
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub verb: String,
    #[serde(default)]
    pub options: CheckOptions,
    pub expect: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub checks: Vec<Check>,
    #[serde(default)]
    pub notes: Vec<String>,
}

pub struct Entry {
    pub name: String,
    pub document: SessionDocument,
    pub sidecar: Sidecar,
}

fn parse_entry(name: &str, doc: &str, sidecar: &str) -> Result<Entry> {
    let document =
        SessionDocument::from_json(doc).map_err(|e| Error::Document(format!("{name}: {e}")))?;
    let sidecar: Sidecar = serde_json::from_str(sidecar)
        .map_err(|e| Error::Document(format!("{name}.expected.json: {e}")))?;
    Ok(Entry {
        name: name.to_string(),
        document,
        sidecar,
    })
}

/// Entries from `dir` (every `X.json` with an `X.expected.json`), or the
/// bundled ones.
pub fn load(dir: Option<&Path>) -> Result<Vec<Entry>> {
    let Some(dir) = dir else {
        return BUNDLED
            .iter()
            .map(|(n, d, s)| parse_entry(n, d, s))
            .collect();
    };
    let io = |e: std::io::Error| Error::Document(format!("{}: {e}", dir.display()));
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| n.ends_with(".json") && !n.ends_with(".expected.json"))
        .map(|n| n.trim_end_matches(".json").to_string())
        .collect();
    names.sort();
    names
        .iter()
        .map(|n| {
            let d = fs::read_to_string(dir.join(format!("{n}.json"))).map_err(io)?;
            let s = fs::read_to_string(dir.join(format!("{n}.expected.json"))).map_err(io)?;
            parse_entry(n, &d, &s)
        })
        .collect()
}

/// Whether `actual` contains `expected`; on mismatch, the JSON path.
pub fn contains(actual: &Value, expected: &Value, path: &str) -> std::result::Result<(), String> {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => {
            for (k, ev) in e {
                let p = format!("{path}.{k}");
                match a.get(k) {
                    Some(av) => contains(av, ev, &p)?,
                    None => return Err(format!("{p}: missing")),
                }
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(e)) if a.len() == e.len() => a
            .iter()
            .zip(e)
            .enumerate()
            .try_for_each(|(i, (av, ev))| contains(av, ev, &format!("{path}[{i}]"))),
        _ if actual == expected => Ok(()),
        _ => Err(format!("{path}: expected {expected}, got {actual}")),
    }
}

pub fn run_entry(entry: &Entry) -> Value {
    let mut results = Vec::new();
    let mut ok = true;
    for c in &entry.sidecar.checks {
        let report = dispatch(&c.verb, &entry.document, &c.options.options())
            .unwrap_or_else(|e| error_report(&e));
        let verdict = contains(&report, &c.expect, "$");
        ok &= verdict.is_ok();
        let mut r = Map::new();
        r.insert("verb".into(), json!(c.verb));
        r.insert("ok".into(), json!(verdict.is_ok()));
        if let Err(why) = verdict {
            r.insert("mismatch".into(), json!(why));
        }
        results.push(Value::Object(r));
    }
    json!({ "name": entry.name, "ok": ok, "checks": results })
}

/// `corpus list` or `corpus run [NAME...]`.
pub fn run(args: &[String], opts: &Options) -> Result<Value> {
    let entries = load(opts.corpus_dir.as_deref())?;
    match args.first().map(String::as_str) {
        Some("list") => Ok(json!({
            "entries": entries
                .iter()
                .map(|e| json!({
                    "name": e.name,
                    "description": e.document.description,
                    "checks": e.sidecar.checks.len(),
                }))
                .collect::<Vec<_>>(),
        })),
        Some("run") => {
            let wanted = &args[1..];
            for w in wanted {
                if !entries.iter().any(|e| &e.name == w) {
                    return Err(Error::Document(format!("no corpus entry `{w}`")));
                }
            }
            let results: Vec<Value> = entries
                .iter()
                .filter(|e| wanted.is_empty() || wanted.contains(&e.name))
                .map(run_entry)
                .collect();
            let ok = results.iter().all(|r| r["ok"] == json!(true));
            Ok(json!({ "ok": ok, "entries": results }))
        }
        _ => Err(Error::Document(
            "usage: corpus list | corpus run [NAME...]".into(),
        )),
    }
}
