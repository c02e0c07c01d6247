//! Tabular output: CSV with locale-independent scientific notation at full
//! round-trip precision, or a JSON mirror of the same records.

use std::fmt::Write as _;

/// One cell of a table.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
    /// An absent value (e.g. n_ss of a divergent point): empty CSV cell,
    /// JSON null.
    Empty,
}

impl Value {
    fn write_csv(&self, out: &mut String) {
        match self {
            // `{:e}` emits the shortest scientific form that re-parses to
            // the same bits.
            Value::Float(x) => write!(out, "{x:e}").unwrap(),
            Value::Int(i) => write!(out, "{i}").unwrap(),
            Value::Text(s) => out.push_str(s),
            Value::Empty => {}
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Float(x) if x.is_finite() => serde_json::json!(x),
            Value::Float(_) => serde_json::Value::Null,
            Value::Int(i) => serde_json::json!(i),
            Value::Text(s) => serde_json::json!(s),
            Value::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map(Value::Float).unwrap_or(Value::Empty)
    }
}

/// A header row plus records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                v.write_csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Value::to_json).collect())
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "columns": self.columns,
            "rows": rows,
        }))
        .expect("table serialisation cannot fail")
    }
}
