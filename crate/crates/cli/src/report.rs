//! Deterministic report serialization.
//!
//! Objects keep insertion order and floats print as `{:.16e}` (17
//! significant digits), so equal inputs give equal bytes.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use ifsdim::Point;

/// A JSON value with ordered object keys.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
    /// Pre-rendered single-line JSON.
    Raw(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        // seeds above i64::MAX keep their digits
        match i64::try_from(v) {
            Ok(i) => Value::Int(i),
            Err(_) => Value::Raw(v.to_string()),
        }
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::Array(v.into_iter().map(Into::into).collect())
    }
}

/// Builder for an ordered object.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Object(Vec<(String, Value)>);

impl Object {
    pub fn new() -> Self {
        Object(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.0
    }
}

impl From<Object> for Value {
    fn from(o: Object) -> Self {
        Value::Object(o.0)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat(' ').take(n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Float(f) if f.is_finite() => out.push_str(&format_float(*f)),
        Value::Float(_) => out.push_str("null"),
        Value::Str(s) => escape(s, out),
        Value::Raw(s) => out.push_str(s),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(indent + 2, out);
                render(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(entries) if entries.is_empty() => out.push_str("{}"),
        Value::Object(entries) => {
            out.push_str("{\n");
            for (i, (k, item)) in entries.iter().enumerate() {
                pad(indent + 2, out);
                escape(k, out);
                out.push_str(": ");
                render(item, indent + 2, out);
                out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty JSON with a trailing newline.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out.push('\n');
    out
}

/// Header row of the given keys and one row of values. Booleans print as
/// `0`/`1`, missing values as empty fields.
pub fn to_csv_row(report: &Object, keys: &[&str]) -> String {
    let mut out = keys.join(",");
    out.push('\n');
    let cells: Vec<String> = keys
        .iter()
        .map(|k| match report.get(k) {
            Some(Value::Float(f)) if f.is_finite() => format_float(*f),
            Some(Value::Int(i)) => i.to_string(),
            Some(Value::Bool(b)) => u8::from(*b).to_string(),
            _ => String::new(),
        })
        .collect();
    out.push_str(&cells.join(","));
    out.push('\n');
    out
}

/// `x` or `x,y` per line.
pub fn points_csv(points: &[Point], dim: usize) -> String {
    let mut out = String::with_capacity(points.len() * 48);
    out.push_str(if dim == 1 { "x\n" } else { "x,y\n" });
    for p in points {
        if dim == 1 {
            let _ = writeln!(out, "{}", format_float(p.re));
        } else {
            let _ = writeln!(out, "{},{}", format_float(p.re), format_float(p.im));
        }
    }
    out
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing to standard output")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, std::f64::consts::PI] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn renders_ordered_pretty_json() {
        let o = Object::new()
            .with("b", 1.5)
            .with("a", Value::Null)
            .with("flags", Vec::<String>::new())
            .with("list", vec![1usize, 2])
            .with("nested", Object::new().with("s", "q\"x"))
            .with("nan", f64::NAN);
        let text = to_json(&o.into());
        assert_eq!(
            text,
            "{\n  \"b\": 1.5000000000000000e0,\n  \"a\": null,\n  \"flags\": [],\n  \"list\": [1, 2],\n  \"nested\": {\n    \"s\": \"q\\\"x\"\n  },\n  \"nan\": null\n}\n"
        );
    }

    #[test]
    fn csv_layouts() {
        let o = Object::new().with("h", 0.5).with("drop", true).with("bound", Value::Null);
        assert_eq!(to_csv_row(&o, &["h", "drop", "bound"]), "h,drop,bound\n5.0000000000000000e-1,1,\n");
        let pts = [Point::new(0.25, 0.0), Point::new(0.5, -1.0)];
        assert_eq!(points_csv(&pts, 1), "x\n2.5000000000000000e-1\n5.0000000000000000e-1\n");
        assert!(points_csv(&pts, 2).starts_with("x,y\n2.5000000000000000e-1,0.0000000000000000e0\n"));
    }

    #[test]
    fn large_seeds_keep_their_digits() {
        assert_eq!(to_json(&Value::from(u64::MAX)), "18446744073709551615\n");
    }
}
