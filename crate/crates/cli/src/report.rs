//! Report envelope and the three output encodings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use matsemi::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub caps: Limits,
    pub result: Value,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "tool": "matsemi",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "params": self.params,
            "caps": self.caps,
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format, elapsed: Option<std::time::Duration>) -> String {
        let v = self.to_value();
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", &v, &mut rows);
                let mut s = String::from("key,value\n");
                for (k, val) in rows {
                    let _ = writeln!(s, "{k},{val}");
                }
                s
            }
            Format::Text => {
                let mut rows = Vec::new();
                flatten("", &v, &mut rows);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut s = String::new();
                for (k, val) in rows {
                    let _ = writeln!(s, "{k:width$}  {val}");
                }
                if let Some(d) = elapsed {
                    let _ = writeln!(s, "{:width$}  {:.3}s", "elapsed", d.as_secs_f64());
                }
                s
            }
        }
    }
}

/// Leaves of a JSON document as (dotted path, text) pairs, in document order.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::Object(_) | Value::Array(_) | Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_paths() {
        let v = json!({"a": {"b": [1, "x,y"]}, "c": [], "d": null, "e": true});
        let mut rows = Vec::new();
        flatten("", &v, &mut rows);
        let keys: Vec<_> = rows.iter().map(|(k, v)| format!("{k}={v}")).collect();
        assert_eq!(keys, vec!["a.b.0=1", "a.b.1=x,y", "c=", "d=", "e=true"]);
    }
}
