use std::fmt::Write as _;
use std::path::Path;

use angreg::inequalities::{format_number, EstimateReport, CSV_HEADER};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Option<f64>),
    Int(i64),
    Bool(bool),
}

impl Cell {
    pub fn text(s: impl ToString) -> Self {
        Cell::Text(s.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format_number(x.filter(|v| !v.is_nan())),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(Some(x)) if x.is_finite() => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Num(Some(x)) if x.is_infinite() => Value::String(format_number(Some(*x))),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn from_reports(name: &str, reports: &[EstimateReport]) -> Self {
        let header: Vec<&str> = CSV_HEADER.split(',').collect();
        let mut t = Table::new(name, &header);
        for r in reports {
            t.push(vec![
                r.estimate.as_str().into(),
                r.n.into(),
                r.b.into(),
                r.a.into(),
                r.k.map_or(Cell::Num(None), Cell::from),
                r.r_exp.into(),
                r.q_exp.into(),
                r.alpha.into(),
                r.weight_mode.as_str().into(),
                r.lhs.into(),
                r.rhs.into(),
                r.ratio.into(),
                r.method.as_str().into(),
                r.grid_id.clone().into(),
            ]);
        }
        t
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// All tables of one run as a single text document.
pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if tables.len() > 1 {
                    if i > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "# {}", t.name);
                }
                out.push_str(&t.csv());
            }
            out
        }
        Format::Json => {
            let obj: Map<String, Value> = tables.iter().map(|t| (t.name.clone(), t.json())).collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

/// One file per table in `dir`.
pub fn write_tables(dir: &Path, tables: &[Table], format: Format) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for t in tables {
        let body = match format {
            Format::Csv => t.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&t.json()).expect("tables serialize");
                s.push('\n');
                s
            }
        };
        std::fs::write(dir.join(format!("{}.{}", t.name, format.extension())), body)?;
    }
    Ok(())
}
