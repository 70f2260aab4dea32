//! Plain-text rendering of JSON reports.
//!
//! Objects print as `key: value` lines, arrays of objects as tables of their
//! scalar fields; nested containers inside table rows are dropped.

use serde_json::Value;

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, value, 0);
    out
}

fn render_into(out: &mut String, value: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match v {
                    Value::Object(rows) if is_keyed_rows(rows) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        let items: Vec<Value> = rows
                            .iter()
                            .map(|(name, row)| {
                                let mut row = row.clone();
                                if let Value::Object(m) = &mut row {
                                    m.shift_insert(0, "key".into(), Value::String(name.clone()));
                                }
                                row
                            })
                            .collect();
                        render_table(out, &items, indent + 2);
                    }
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_into(out, v, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_table(out, items, indent + 2);
                    }
                    _ => out.push_str(&format!("{pad}{key}: {}\n", scalar(v))),
                }
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            render_table(out, items, indent)
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(value))),
    }
}

fn render_table(out: &mut String, items: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    let mut columns: Vec<&str> = Vec::new();
    for item in items {
        if let Value::Object(map) = item {
            for (k, v) in map {
                if !is_container(v) && !columns.contains(&k.as_str()) {
                    columns.push(k);
                }
            }
        }
    }
    let mut rows: Vec<Vec<String>> = vec![columns.iter().map(|c| c.to_string()).collect()];
    for item in items {
        rows.push(
            columns
                .iter()
                .map(|c| item.get(c).map(scalar).unwrap_or_default())
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..columns.len())
        .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(&format!("{pad}{}\n", cells.join("  ").trim_end()));
    }
}

/// A map whose values are all flat objects.
fn is_keyed_rows(map: &serde_json::Map<String, Value>) -> bool {
    !map.is_empty()
        && map.values().all(|r| {
            r.as_object()
                .is_some_and(|m| m.values().all(|x| !x.is_object()))
        })
}

fn is_container(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => {
            items.iter().any(|i| i.is_object() || i.is_array()) || items.len() > 4
        }
        _ => false,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "PASS" } else { "FAIL" }.into(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_float(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => "{..}".into(),
    }
}

fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-3..1e6).contains(&x.abs()) {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.3e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_objects_and_tables() {
        let v = json!({
            "algebra": "Sym_2(R)",
            "pass": true,
            "checks": [
                {"name": "a", "max_error": 1.5e-16, "pass": true},
                {"name": "bb", "max_error": 0.25, "pass": false}
            ]
        });
        let text = render(&v);
        assert!(text.contains("algebra: Sym_2(R)\n"));
        assert!(text.contains("pass: PASS\n"));
        assert!(text.contains("  name  max_error  pass\n"));
        assert!(text.contains("  bb    0.25       FAIL\n"));
        assert!(text.contains("1.500e-16"));
    }

    #[test]
    fn keyed_rows_become_a_table() {
        let v = json!({"cases": {"A1": {"count": 2}, "B6": {"count": 0}}});
        let text = render(&v);
        assert!(
            text.contains("cases:\n  key  count\n  A1   2\n  B6   0\n"),
            "{text}"
        );
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(8.0), "8");
        assert_eq!(format_float(1.0 / 3.0), "0.333333");
        assert_eq!(format_float(-2.5e-7), "-2.500e-7");
    }
}
