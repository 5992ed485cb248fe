//! Text and CSV renderings of a report.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(cell).collect::<Vec<_>>().join(" ")),
        other => other.to_string(),
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; width];
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows of `(section, columns...)` extracted from the report.
fn tables(report: &Value) -> Vec<(String, Vec<Vec<String>>)> {
    let mut out = Vec::new();
    if let Some(v) = report.get("validation").and_then(Value::as_array) {
        let mut rows = vec![vec!["check".into(), "ok".into(), "failure".into()]];
        rows.extend(v.iter().map(|c| vec![cell(&c["check"]), cell(&c["ok"]), cell(&c["failure"])]));
        out.push(("validation".into(), rows));
    }
    if let Some(groups) = report.get("groups").and_then(Value::as_array) {
        let mut rows = vec![vec!["degree".into(), "dim".into(), "representatives".into()]];
        for g in groups {
            let reps: Vec<String> = g["representatives"].as_array().map(|r| r.iter().map(|x| cell(&x["label"])).collect()).unwrap_or_default();
            rows.push(vec![cell(&g["degree"]), cell(&g["dim"]), reps.join("; ")]);
        }
        out.push(("cohomology".into(), rows));
    }
    for key in ["cup", "bracket"] {
        if let Some(entries) = report.get(key).and_then(Value::as_array) {
            let mut rows = vec![["deg_a", "deg_b", "basis_index_a", "basis_index_b", "result_class_coords", "source", "agrees"].iter().map(|s| s.to_string()).collect()];
            for e in entries {
                let agree = e.get("generic_agrees").or_else(|| e.get("closed_agrees")).cloned().unwrap_or(Value::Null);
                rows.push(vec![
                    cell(&e["deg_a"]),
                    cell(&e["deg_b"]),
                    cell(&e["basis_index_a"]),
                    cell(&e["basis_index_b"]),
                    cell(&e["result_class_coords"]),
                    cell(&e["source"]),
                    cell(&agree),
                ]);
            }
            out.push((key.into(), rows));
        }
    }
    if let Some(checks) = report.get("checks").and_then(Value::as_array) {
        let mut rows = vec![["check", "skipped", "match", "closed", "generic", "notes"].iter().map(|s| s.to_string()).collect()];
        for c in checks {
            let mut notes: Vec<String> = c["mismatches"].as_array().map(|a| a.iter().map(cell).collect()).unwrap_or_default();
            notes.extend(c["notes"].as_array().map(|a| a.iter().map(cell).collect::<Vec<_>>()).unwrap_or_default());
            rows.push(vec![cell(&c["theorem"]), cell(&c["skipped"]), cell(&c["match"]), cell(&c["closed_table"]), cell(&c["generic_table"]), notes.join("; ")]);
        }
        out.push(("checks".into(), rows));
    }
    out
}

fn walk(report: &Value, out: &mut Vec<(String, Vec<Vec<String>>)>) {
    if let Some(sections) = report.get("sections").and_then(Value::as_object) {
        for s in sections.values() {
            out.extend(tables(s));
        }
    }
}

pub fn text(report: &Value) -> String {
    let mut out = String::new();
    if let Some(w) = report.pointer("/sections/theorems/witness") {
        out.push_str(&format!("witness: {}\n", cell(w)));
    }
    let mut sections = Vec::new();
    walk(report, &mut sections);
    for (name, rows) in sections {
        out.push_str(&format!("\n== {name}\n"));
        out.push_str(&aligned(&rows));
    }
    out
}

pub fn csv(report: &Value) -> String {
    let mut sections = Vec::new();
    walk(report, &mut sections);
    let mut out = String::new();
    for (name, rows) in sections {
        for (i, r) in rows.iter().enumerate() {
            let first = if i == 0 { "section".to_string() } else { name.clone() };
            let line: Vec<String> = std::iter::once(first).chain(r.iter().cloned()).map(|c| csv_quote(&c)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
    }
    out
}
