use super::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u64 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column-named sample table; cells are numbers or short labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Number(n) => match n.as_f64() {
                        Some(x) if n.is_f64() => format!("{x:e}"),
                        _ => n.to_string(),
                    },
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// A finite float as a JSON number, anything else as null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub op: String,
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub message: String,
    pub point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub grid: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub skipped: Vec<Skipped>,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u64,
    pub tool_version: String,
    pub command: String,
    pub input: Value,
    /// One object per request, each carrying its `op`.
    pub results: Vec<Value>,
    /// CSV files written next to the report.
    pub files: Vec<String>,
    pub diagnostics: Diagnostics,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input,
            results: Vec::new(),
            files: Vec::new(),
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report is plain data");
        let mut out = String::new();
        write_value(&mut out, &v, 0);
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("report: {e}")))?;
        check_schema_version(&v, "report")?;
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Validation(format!("report: {} at `{}`", e.inner(), e.path())))
    }
}

/// A present `schema_version` must match; absence is allowed for inputs.
pub fn check_schema_version(v: &Value, what: &str) -> Result<(), CliError> {
    match v.get("schema_version") {
        None => Ok(()),
        Some(x) if x.as_u64() == Some(SCHEMA_VERSION) => Ok(()),
        Some(x) => Err(CliError::Validation(format!(
            "{what}: schema_version {x} is not supported (expected {SCHEMA_VERSION})"
        ))),
    }
}

/// Pretty JSON with sorted keys and floats at 17 significant digits.
fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', 2 * n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().unwrap_or(f64::NAN);
                let _ = write!(out, "{x:.16e}");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            // rows of scalars stay on one line
            if a.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_seventeen_digits_and_keys_sort() {
        let mut r = Report::new("analyze", json!({"b": 1, "a": 0.1}));
        r.results.push(json!({"op": "x", "value": 2.0 / 3.0}));
        let text = r.to_json();
        assert!(text.contains("6.6666666666666663e-1"));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(text.contains("\"schema_version\": 1,"));
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let mut r = Report::new("analyze", Value::Null);
        r.schema_version = 2;
        assert!(matches!(Report::from_json(&r.to_json()), Err(CliError::Validation(_))));
    }

    #[test]
    fn csv_uses_lf() {
        let mut t = Table::new(&["t", "c"]);
        t.push_numbers(&[0.5, 0.4]);
        assert_eq!(t.to_csv(), "t,c\n5e-1,4e-1\n");
    }
}
