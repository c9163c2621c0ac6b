//! Result records and their JSONL and CSV forms.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use lab_core::rational::{f64_to_sig_decimal, to_sig_decimal};
use lab_core::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const CSV_DIGITS: usize = 12;

/// One table cell. Rationals stay exact in JSONL (`"7/8"`) and become 12-digit decimals in CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Int(i64),
    Float(#[serde(with = "float_cell")] f64),
    Rational(#[serde(with = "rational_cell")] Rational),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Float(x) => f64_to_sig_decimal(*x, CSV_DIGITS),
            Cell::Rational(r) => to_sig_decimal(r, CSV_DIGITS),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(i64::try_from(x).expect("count fits in i64"))
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Rational> for Cell {
    fn from(x: Rational) -> Self {
        Cell::Rational(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

mod float_cell {
    use super::*;

    // non-finite values are not JSON numbers
    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

mod rational_cell {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(|_| serde::de::Error::custom(format!("bad rational {t:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Header line plus one line per row, `\n`-terminated.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// Seeds derived from the base seed for one labelled stream, `derive_seed(base, label, 0..count)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedStream {
    pub label: String,
    pub count: u64,
    pub first: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    /// The effective config, with command-line overrides applied.
    pub config: ExperimentConfig,
    /// Milliseconds since the Unix epoch.
    pub started_ms: u64,
    pub finished_ms: u64,
    pub workers: usize,
    pub seeds: Vec<SeedStream>,
    pub table: Table,
    pub summary: serde_json::Value,
    pub warnings: Vec<String>,
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

impl ResultRecord {
    pub fn to_jsonl(&self) -> String {
        let mut s = serde_json::to_string(self).expect("records serialise");
        s.push('\n');
        s
    }

    pub fn from_jsonl(line: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(line.trim_end())?)
    }

    pub fn to_csv(&self) -> String {
        self.table.to_csv()
    }
}

/// `base.jsonl` and `base.csv` for an output path, replacing any extension it carries.
pub fn output_paths(out: &Path) -> (PathBuf, PathBuf) {
    (out.with_extension("jsonl"), out.with_extension("csv"))
}

/// Writes the JSONL record and the CSV summary next to each other.
pub fn emit(record: &ResultRecord, out: &Path) -> CliResult<(PathBuf, PathBuf)> {
    let (jsonl, csv) = output_paths(out);
    if let Some(dir) = jsonl.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(&jsonl, record.to_jsonl()).map_err(|e| CliError::io(&jsonl, e))?;
    std::fs::write(&csv, record.to_csv()).map_err(|e| CliError::io(&csv, e))?;
    Ok((jsonl, csv))
}
