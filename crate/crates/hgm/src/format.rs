//! Record output: TSV (default), CSV and JSON lines.
//!
//! TSV and CSV start with `# key=value` lines describing the run, then a
//! row of column names, then one record per line. JSON lines starts with a
//! single `{"config": {...}}` object.

use std::fmt;
use std::io::{self, Write};

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Csv,
    #[value(name = "jsonl", alias = "json-lines")]
    JsonLines,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Tsv => "tsv",
            Format::Csv => "csv",
            Format::JsonLines => "jsonl",
        })
    }
}

/// Shortest text that reads back to the same `f64`, switching to exponent
/// notation outside `[1e-4, 1e16)`; `-0` prints as `0`.
pub fn number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if !a.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One cell of a record.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => f.write_str(&number(*v)),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Streams records in one of the supported formats.
pub struct RecordWriter<W: Write> {
    out: W,
    format: Format,
    columns: Vec<String>,
}

impl<W: Write> RecordWriter<W> {
    /// Writes the run description and the column names.
    pub fn new(
        mut out: W,
        format: Format,
        meta: &[(String, String)],
        columns: &[&str],
    ) -> io::Result<Self> {
        match format {
            Format::Tsv | Format::Csv => {
                for (k, v) in meta {
                    writeln!(out, "# {k}={v}")?;
                }
                let sep = if format == Format::Tsv { "\t" } else { "," };
                writeln!(out, "{}", columns.join(sep))?;
            }
            Format::JsonLines => {
                let config: Map<String, Value> = meta
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                let mut head = Map::new();
                head.insert("config".into(), Value::Object(config));
                writeln!(out, "{}", Value::Object(head))?;
            }
        }
        Ok(RecordWriter {
            out,
            format,
            columns: columns.iter().map(|c| c.to_string()).collect(),
        })
    }

    pub fn write(&mut self, row: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(row.len(), self.columns.len());
        match self.format {
            Format::Tsv => {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                writeln!(self.out, "{}", cells.join("\t"))
            }
            Format::Csv => {
                let cells: Vec<String> = row.iter().map(|c| csv_field(&c.to_string())).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
            Format::JsonLines => {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                writeln!(self.out, "{}", Value::Object(obj))
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
