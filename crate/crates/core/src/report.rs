//! Machine-readable experiment reports.
//!
//! JSON keys keep insertion order and every float is written with 17
//! significant digits, so a fixed configuration always serializes to the
//! same bytes.

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::states::{ComplexAmplitude, ProductCoherentState};

/// `x` with 17 significant digits and a signed exponent, e.g.
/// `3.6787944117144233e-1` or `2.0000000000000000e+0`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => s,
        }
    } else {
        "null".to_string()
    }
}

pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(
        format_float(x)
            .parse::<Number>()
            .expect("formatted finite float is a valid JSON number"),
    )
}

pub fn complex(z: ComplexAmplitude) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), number(z.re()));
    m.insert("im".into(), number(z.im()));
    Value::Object(m)
}

pub fn labels(state: &ProductCoherentState) -> Value {
    Value::Array(state.labels().iter().map(|&z| complex(z)).collect())
}

pub fn numbers(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

/// Ordered JSON object builder.
#[derive(Debug, Default, Clone)]
pub struct Object(Map<String, Value>);

impl Object {
    pub fn new() -> Self {
        Object(Map::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn float(self, key: &str, x: f64) -> Self {
        self.with(key, number(x))
    }

    pub fn complex(self, key: &str, z: ComplexAmplitude) -> Self {
        self.with(key, complex(z))
    }
}

impl From<Object> for Value {
    fn from(o: Object) -> Self {
        Value::Object(o.0)
    }
}

/// A rectangular table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: Value,
    pub result: Value,
    pub version: &'static str,
    pub duration_ms: Option<u64>,
    /// Preferred CSV rendering; commands without one fall back to a flat
    /// key/value listing of `result`.
    pub table: Option<Table>,
    /// Scientific verdict, for commands that have one.
    pub passed: Option<bool>,
}

impl Report {
    pub fn new(config: Value, result: Value) -> Self {
        Report {
            config,
            result,
            version: env!("CARGO_PKG_VERSION"),
            duration_ms: None,
            table: None,
            passed: None,
        }
    }

    pub fn to_value(&self) -> Value {
        Object::new()
            .with("config", self.config.clone())
            .with("result", self.result.clone())
            .with("version", self.version)
            .with(
                "duration_ms",
                self.duration_ms.map_or(Value::Null, Value::from),
            )
            .into()
    }

    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&self.to_value()).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let table = match &self.table {
            Some(t) => t.clone(),
            None => {
                let mut t = Table::new(&["key", "value"]);
                flatten("", &self.to_value(), &mut t);
                t
            }
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).map_err(csv_error)?;
        for row in &table.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn flatten(prefix: &str, value: &Value, table: &mut Table) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&join(k), v, table);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, table);
            }
        }
        Value::String(s) => table.push(vec![prefix.to_string(), s.clone()]),
        Value::Null => table.push(vec![prefix.to_string(), String::new()]),
        other => table.push(vec![prefix.to_string(), other.to_string()]),
    }
}
