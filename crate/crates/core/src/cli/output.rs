//! Deterministic CSV and JSON rendering.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::config::{Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round to 12 significant digits; the shortest representation of the
/// rounded value is what gets printed.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number at 12 significant digits; `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Round every float inside an arbitrary JSON value.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map_or(Value::Null, num),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Result of one command: scalar fields plus an optional table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub summary: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn with_columns(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn field(&mut self, key: &str, value: Value) -> &mut Self {
        self.summary.push((key.to_string(), value));
        self
    }

    pub fn row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

fn params_line(params: &BTreeMap<String, String>) -> String {
    if params.is_empty() {
        return "(defaults)".into();
    }
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => format!("{}", n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => {
            let s = v.to_string();
            format!("\"{}\"", s.replace('"', "\"\""))
        }
        other => other.to_string(),
    }
}

fn csv_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => csv_cell(other),
    }
}

pub fn render(report: &Report, config: &RunConfig) -> String {
    match config.format() {
        Format::Csv => render_csv(report, config),
        Format::Json => render_json(report, config),
    }
}

pub fn render_csv(report: &Report, config: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# iso-compare {VERSION}\n"));
    out.push_str(&format!("# command: {}\n", config.command));
    out.push_str(&format!("# params: {}\n", params_line(&config.params)));
    if report.columns.is_empty() {
        // a summary-only report becomes a one-row table
        let header: Vec<&str> = report.summary.iter().map(|(k, _)| k.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        let row: Vec<String> = report.summary.iter().map(|(_, v)| csv_cell(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
        return out;
    }
    for (k, v) in &report.summary {
        out.push_str(&format!("# {k}: {}\n", csv_scalar(v)));
    }
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(report: &Report, config: &RunConfig) -> String {
    let mut root = Map::new();
    let mut meta = Map::new();
    meta.insert("tool".into(), Value::from("iso-compare"));
    meta.insert("version".into(), Value::from(VERSION));
    meta.insert("command".into(), Value::from(config.command.name()));
    meta.insert(
        "params".into(),
        Value::Object(
            config
                .params
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                .collect(),
        ),
    );
    root.insert("meta".into(), Value::Object(meta));
    for (k, v) in &report.summary {
        root.insert(k.clone(), v.clone());
    }
    if !report.columns.is_empty() {
        let rows = report
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    report
                        .columns
                        .iter()
                        .cloned()
                        .zip(r.iter().cloned())
                        .collect(),
                )
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round12(2.0 * std::f64::consts::PI * std::f64::consts::PI), 19.7392088022);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn nested_rounding() {
        let v = serde_json::json!({"a": [0.1234567890123456, 3], "b": {"c": 2.0000000000004}});
        let r = round_value(v);
        assert_eq!(r["a"][0], serde_json::json!(0.123456789012));
        assert_eq!(r["a"][1], serde_json::json!(3));
        assert_eq!(r["b"]["c"], serde_json::json!(2.0));
    }
}
