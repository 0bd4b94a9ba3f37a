//! Text rendering of the JSON values, so both formats carry the same data.
//!
//! Scalars print as `key: value`, arrays of flat objects as aligned tables,
//! anything nested as indented sections.

use serde_json::{Map, Value};

pub fn text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => object(map, 0, &mut out),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let sep = if items.iter().all(Value::is_number) {
                ","
            } else {
                " "
            };
            items.iter().map(scalar).collect::<Vec<_>>().join(sep)
        }
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat_record(v: &Value) -> bool {
    matches!(v, Value::Object(m) if m.values().all(is_flat))
}

fn object(map: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (key, v) in map {
        match v {
            Value::Array(items) if !items.is_empty() && items.iter().all(flat_record) => {
                out.push_str(&format!("{pad}{key}:\n"));
                table(items, depth + 1, out);
            }
            Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&format!("{pad}{key}[{i}]:\n"));
                    object(item.as_object().expect("checked"), depth + 1, out);
                }
            }
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                object(inner, depth + 1, out);
            }
            other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
        }
    }
}

fn table(rows: &[Value], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let mut headers: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().expect("flat record").keys() {
            if !headers.contains(k) {
                headers.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let m = r.as_object().expect("flat record");
            headers
                .iter()
                .map(|h| m.get(h).map_or("-".into(), scalar))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            cells
                .iter()
                .map(|c| c[i].len())
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        let parts: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&headers));
    for c in &cells {
        out.push_str(&line(c));
    }
}
