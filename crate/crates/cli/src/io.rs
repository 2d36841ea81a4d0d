//! Headerless numeric CSV in, JSON or CSV records out.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Rows of a numeric CSV file, all of the same width.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: Vec<Vec<f64>>,
    pub dim: usize,
}

pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(file, path)
}

/// Parses comma-separated numbers. A first line that does not parse as
/// numbers is taken as a header and skipped. Blank lines are ignored.
pub fn parse_matrix(input: impl Read, path: &Path) -> Result<Matrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = 0;
    let parse_error = |line: u64, detail: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        detail,
    };
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, String> = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| f.to_string()))
            .collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if k == 0 => continue,
            Err(field) => return Err(parse_error(line, format!("cannot parse {field:?} as a number"))),
        };
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(parse_error(line, format!("non-finite value {bad}")));
        }
        if rows.is_empty() {
            dim = row.len();
        } else if row.len() != dim {
            return Err(parse_error(line, format!("expected {dim} fields, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(1, "no numeric rows".into()));
    }
    Ok(Matrix { rows, dim })
}

pub fn write_matrix(path: &Path, rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// One query result as emitted by `depth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRecord {
    pub query_index: usize,
    pub algorithm: String,
    pub numerator: usize,
    pub n: usize,
    pub depth: f64,
    /// Exact depth as `numerator/n`.
    pub fraction: String,
    /// Unit direction whose closed halfspace holds `numerator` observations;
    /// absent for `random-upper`.
    pub witness_direction: Option<Vec<f64>>,
    /// Original row indices of the minimizing combination.
    pub witness_combination: Option<Vec<usize>>,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// CSV for `.csv` paths, JSON otherwise.
    pub fn for_path(path: Option<&Path>) -> Self {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Json,
        }
    }
}

/// Opens `path` for writing, or stdout when absent.
pub fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => Ok(Box::new(io::BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn write_records(out: &mut dyn Write, records: &[DepthRecord], format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, records)?;
            writeln!(out).map_err(|e| CliError::io("<output>", e))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "query_index",
                "algorithm",
                "numerator",
                "n",
                "depth",
                "fraction",
                "witness_direction",
                "witness_combination",
                "elapsed_ns",
            ])?;
            for r in records {
                let join = |v: Option<Vec<String>>| v.map(|v| v.join(" ")).unwrap_or_default();
                w.write_record([
                    r.query_index.to_string(),
                    r.algorithm.clone(),
                    r.numerator.to_string(),
                    r.n.to_string(),
                    r.depth.to_string(),
                    r.fraction.clone(),
                    join(r.witness_direction.as_ref().map(|d| d.iter().map(f64::to_string).collect())),
                    join(r.witness_combination.as_ref().map(|c| c.iter().map(usize::to_string).collect())),
                    r.elapsed_ns.to_string(),
                ])?;
            }
            w.flush().map_err(|e| CliError::io("<output>", e))?;
        }
    }
    out.flush().map_err(|e| CliError::io("<output>", e))
}
