use serde_json::{Map, Value};

use super::Format;

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

/// Nine significant digits in scientific notation.
pub(crate) fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.8e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // round-trip through the printed form so both formats carry the same digits
            Cell::Num(v) => format_number(*v)
                .parse::<f64>()
                .ok()
                .and_then(|r| serde_json::Number::from_f64(r).map(Value::Number))
                .unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }
}

/// A command result: provenance, column names with units, and rows.
pub(crate) struct Report {
    pub provenance: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Rendered as a single JSON object rather than an array.
    pub single: bool,
}

impl Report {
    pub fn record(provenance: Vec<(String, String)>, fields: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row) = fields.into_iter().unzip();
        Self {
            provenance,
            columns,
            rows: vec![row],
            single: true,
        }
    }

    pub fn table(provenance: Vec<(String, String)>, columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        Self {
            provenance,
            columns,
            rows,
            single: false,
        }
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, csv::Error> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => Ok(self.render_json()),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut out = Vec::new();
        for (k, v) in &self.provenance {
            out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv))?;
        }
        writer.into_inner().map_err(|e| e.into_error().into())
    }

    fn render_json(&self) -> Vec<u8> {
        let provenance: Map<String, Value> = self
            .provenance
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
            .collect();
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.to_string(), cell.json()))
                        .collect(),
                )
            })
            .collect();
        let result = if self.single {
            objects.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objects)
        };
        let mut doc = Map::new();
        doc.insert("provenance".into(), Value::Object(provenance));
        doc.insert("result".into(), result);
        let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).expect("JSON values serialize");
        bytes.push(b'\n');
        bytes
    }
}
