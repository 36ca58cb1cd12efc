//! Plain-text rendering of JSON reports: one `path: value` line per leaf,
//! with matrix files printed as grids.

use serde_json::{Map, Value};
use std::fmt::Write;

const GRID_LIMIT: usize = 12;

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, "", v);
    out
}

fn walk(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(map) if is_matrix(map) => matrix(out, path, map),
        Value::Object(map) => {
            for (k, child) in map {
                walk(out, &join(path, k), child);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{path}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                walk(out, &format!("{path}[{i}]"), child);
            }
        }
        leaf => {
            let _ = writeln!(out, "{path}: {}", scalar(leaf));
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn is_matrix(map: &Map<String, Value>) -> bool {
    map.len() == 4 && ["rows", "cols", "complex", "data"].iter().all(|k| map.contains_key(*k))
}

fn matrix(out: &mut String, path: &str, map: &Map<String, Value>) {
    let rows = map["rows"].as_u64().unwrap_or(0) as usize;
    let cols = map["cols"].as_u64().unwrap_or(0) as usize;
    let data = map["data"].as_array().cloned().unwrap_or_default();
    let label = if path.is_empty() { "matrix" } else { path };
    if rows > GRID_LIMIT || cols > GRID_LIMIT {
        let _ = writeln!(out, "{label}: {rows}×{cols} matrix");
        return;
    }
    let _ = writeln!(out, "{label}: {rows}×{cols}");
    for i in 0..rows {
        let cells: Vec<String> = (0..cols).map(|j| entry(&data[i * cols + j])).collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
}

fn entry(v: &Value) -> String {
    match v.as_array() {
        Some(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().unwrap_or(f64::NAN);
            let im = pair[1].as_f64().unwrap_or(f64::NAN);
            format!("{re:>10.4}{im:+.4}i")
        }
        _ => format!("{:>10.4}", v.as_f64().unwrap_or(f64::NAN)),
    }
}

pub fn suite(s: &shorted::suite::SuiteSummary, elapsed: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cases {}  passed {}  failed {}  ({elapsed:.2} s)", s.cases, s.passed, s.failed);
    let _ = writeln!(out, "{:<24} {:>6} {:>6} {:>12} {:>10}", "check", "cases", "failed", "worst", "limit");
    for c in &s.checks {
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>6} {:>12.3e} {:>10.1e}",
            c.name, c.evaluated, c.failed, c.worst, c.limit
        );
    }
    for f in &s.failures {
        let failed: Vec<&str> = f.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let _ = write!(out, "FAILED case {} (seed {}): {}", f.index, f.seed, failed.join(", "));
        if let Some(e) = &f.error {
            let _ = write!(out, " [{e}]");
        }
        let _ = writeln!(out);
    }
    out
}
