//! Tabular output. Every float is rounded to 12 significant digits before it
//! is written, so CSV and JSON carry the same values and reruns are
//! byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Named columns, rows in emission order. The first column is always `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 12 significant digits, using an
/// exponent only for very small or very large magnitudes.
pub fn fmt_sig12(x: f64) -> String {
    let r = round_sig12(x);
    if r == 0.0 {
        return "0".into();
    }
    if !r.is_finite() {
        return format!("{r}");
    }
    let e = r.abs().log10().floor();
    if (-5.0..12.0).contains(&e) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(x) => fmt_sig12(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn json_value(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => Number::from_f64(round_sig12(*x)).map_or(Value::Null, Value::Number),
        Cell::Int(n) => Value::from(*n),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
    }
}

/// CSV: one `#` line holding `provenance`, then the header row and the data.
pub fn write_csv<W: Write>(out: W, provenance: &str, table: &Table) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "# {provenance}")?;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(csv_field))?;
        }
        w.flush()?;
    }
    out.flush()
}

/// JSON: an array of objects keyed by column name, in column order.
pub fn write_json<W: Write>(out: W, table: &Table) -> io::Result<()> {
    let records: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> =
                table.columns.iter().zip(row).map(|(k, c)| ((*k).to_owned(), json_value(c))).collect();
            Value::Object(obj)
        })
        .collect();
    let mut out = BufWriter::new(out);
    serde_json::to_writer_pretty(&mut out, &records)?;
    writeln!(out)?;
    out.flush()
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, format: Format, provenance: &str, table: &Table) -> Result<()> {
    let write = |w: &mut dyn Write| match format {
        Format::Csv => write_csv(w, provenance, table),
        Format::Json => write_json(w, table),
    };
    match path {
        Some(p) => {
            let io_err = |source| CliError::Io { path: p.to_path_buf(), source };
            let mut f = File::create(p).map_err(io_err)?;
            write(&mut f).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            write(&mut stdout.lock()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}
