//! Tabular output shared by `table` and `sweep`.

use std::io::Write;

use anyhow::Result;
use serde_json::{json, Value};

use crate::args::sig12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
}

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => sig12(x),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // same digits as the CSV
            Cell::Num(x) => sig12(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.text()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"schema": 1, "columns": [...], "rows": [[...], ...]}` with rows in column order.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|row| Value::Array(row.iter().map(|c| c.json()).collect())).collect();
        json!({ "schema": 1, "columns": self.columns, "rows": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["d", "F"]);
        t.push(vec![Cell::Int(2), Cell::Num(5.0 / 6.0)]);
        t.push(vec![Cell::Int(3), Cell::Num(0.75)]);
        let mut buf = vec![];
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "d,F\n2,0.833333333333\n3,0.75\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(vec!["d", "F"]);
        t.push(vec![Cell::Int(2), Cell::Num(0.5)]);
        let v = t.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["columns"][1], "F");
        assert_eq!(v["rows"][0], json!([2, 0.5]));
    }
}
