use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde_json::Value;

use crate::GlobalArgs;

pub fn emit(value: &Value, global: &GlobalArgs) -> Result<()> {
    let mut text = if global.pretty { render(value) } else { serde_json::to_string(value)? };
    text.push('\n');
    match &global.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ => None,
    }
}

/// Rows of scalars, if `v` is a matrix.
fn matrix(v: &Value) -> Option<Vec<Vec<String>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    rows.iter().map(|r| r.as_array()?.iter().map(scalar).collect::<Option<Vec<_>>>()).collect()
}

fn render_into(out: &mut String, value: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    let Some(map) = value.as_object() else {
        let _ = writeln!(out, "{pad}{}", scalar(value).unwrap_or_else(|| value.to_string()));
        return;
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in map {
        if let Some(s) = scalar(v) {
            let _ = writeln!(out, "{pad}{k:width$}  {s}");
        } else if let Some(rows) = matrix(v) {
            let _ = writeln!(out, "{pad}{k}:");
            let w = rows.iter().flatten().map(String::len).max().unwrap_or(1);
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
                let _ = writeln!(out, "{pad}  {}", cells.join(" "));
            }
        } else if v.is_object() {
            let _ = writeln!(out, "{pad}{k}:");
            render_into(out, v, indent + 2);
        } else {
            let _ = writeln!(out, "{pad}{k:width$}  {v}");
        }
    }
}

/// Aligned `key  value` lines; matrices as tables, nested objects indented.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, value, 0);
    out.pop();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_tables() {
        let text = render(&json!({"equal": true, "q": [["1", "0"], ["0", "1"]], "inner": {"x": 1}}));
        assert!(text.contains("equal  true"));
        assert!(text.contains("  1 0"));
        assert!(text.contains("inner:\n  x  1"));
    }
}
