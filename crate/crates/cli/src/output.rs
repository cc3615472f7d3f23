//! Tabular output as CSV or JSON.

use serde_json::{Map, Number, Value};

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// 17 significant digits, `.` separator, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by the header names.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, c)| ((*k).to_string(), json_value(c)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows))
            .expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

fn csv_field(c: &Cell) -> String {
    match *c {
        Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
        Cell::Num(x) => format!("{x}"),
        Cell::Int(i) => i.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_value(c: &Cell) -> Value {
    match *c {
        Cell::Num(x) => Number::from_f64(x).map_or(Value::Null, Value::Number),
        Cell::Int(i) => Value::Number(i.into()),
        Cell::Empty => Value::Null,
    }
}
