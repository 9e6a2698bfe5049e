//! JSON and CSV rendering.

use std::time::Duration;

use serde_json::Value;

use crate::config::Format;
use crate::Output;

pub fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Doc(v), Format::Json) => format!("{v}\n"),
        (Output::Lines(vs), Format::Json) => vs.iter().map(|v| format!("{v}\n")).collect(),
        (Output::Doc(v), Format::Csv) => {
            let mut s = String::from("key,value\n");
            for (k, x) in flatten(v) {
                s += &format!("{},{}\n", csv_field(&k), csv_field(&x));
            }
            s
        }
        (Output::Lines(vs), Format::Csv) => {
            let rows: Vec<Vec<(String, String)>> = vs.iter().map(flatten).collect();
            let Some(first) = rows.first() else {
                return String::new();
            };
            // witness fields vary by cell, so the header is the union in
            // first-seen order
            let mut header: Vec<String> = first.iter().map(|(k, _)| k.clone()).collect();
            for r in &rows[1..] {
                for (k, _) in r {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut s = header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",") + "\n";
            for r in rows {
                let line: Vec<String> = header
                    .iter()
                    .map(|h| r.iter().find(|(k, _)| k == h).map(|(_, v)| csv_field(v)).unwrap_or_default())
                    .collect();
                s += &line.join(",");
                s.push('\n');
            }
            s
        }
    }
}

/// Dotted paths to scalar leaves, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn add_timing(out: &mut Output, d: Duration) {
    let ms = serde_json::json!(d.as_secs_f64() * 1e3);
    match out {
        Output::Doc(Value::Object(m)) => {
            m.insert("elapsed_ms".into(), ms);
        }
        Output::Lines(_) | Output::Doc(_) => eprintln!("elapsed_ms: {ms}"),
    }
}
