//! Plain-text rendering of JSON reports.

use serde_json::Value;

/// Indented `key: value` lines. Arrays of scalars stay on one line; lists of
/// objects (such as check results) become one row each.
pub fn table(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && is_flat(i)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, v) in map {
                if is_flat(v) {
                    out.push_str(&format!("{pad}{k:<width$}  {}\n", inline(v)));
                } else {
                    out.push_str(&format!("{pad}{k}\n"));
                    write_value(out, v, indent + 1);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(map) => {
                        let row: Vec<String> = map.values().map(inline).collect();
                        out.push_str(&format!("{pad}- {}\n", row.join(" | ")));
                    }
                    other => out.push_str(&format!("{pad}- {}\n", inline(other))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}
