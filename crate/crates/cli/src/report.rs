//! Report emission: CSV row data (RFC 4180 quoting) plus a JSON summary per
//! experiment. All floating-point output goes through one fixed formatter,
//! no timestamps or other run-varying data are ever written, so reruns with
//! the same config and build produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::HarnessError;

/// One CSV cell. Floats are rendered as `{:.12e}`; flags as true/false.
#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Str(s) => quote_rfc4180(s),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.into())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Deterministic float rendering used for every CSV numeric field.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.12e}")
    }
}

fn quote_rfc4180(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for ch in s.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

/// Row-data table with a fixed header.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// One asserted contract with its measured margin.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Positive margin = how far inside the bound the measurement sits,
    /// in the bound's own units.
    pub margin: f64,
    pub detail: String,
}

impl Check {
    /// measured ≤ bound, margin = bound − measured.
    pub fn le(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass: measured <= bound,
            margin: bound - measured,
            detail: format!("measured {} vs bound {}", fmt_float(measured), fmt_float(bound)),
        }
    }

    /// measured ≥ bound, margin = measured − bound.
    pub fn ge(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass: measured >= bound,
            margin: measured - bound,
            detail: format!("measured {} vs floor {}", fmt_float(measured), fmt_float(bound)),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            margin: if pass { 0.0 } else { -1.0 },
            detail: detail.into(),
        }
    }
}

/// Build information written into every summary. Everything here is fixed at
/// compile time, so it never perturbs byte-identity across reruns.
#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub package: &'static str,
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Fingerprint {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

/// JSON summary: experiment id, checks with margins, overall verdict.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub pass: bool,
    pub rows: usize,
    pub checks: Vec<Check>,
    pub fingerprint: Fingerprint,
}

/// The full per-experiment report: one CSV, one JSON summary.
pub struct Report {
    pub experiment: String,
    pub table: Table,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(experiment: &str, columns: Vec<&'static str>) -> Self {
        Self {
            experiment: experiment.into(),
            table: Table::new(columns),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Writes `<dir>/<experiment>.csv` and `<dir>/<experiment>.summary.json`,
    /// returning the two paths.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
        fs::create_dir_all(dir)
            .map_err(|e| HarnessError::Io(format!("create {}: {e}", dir.display())))?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        fs::write(&csv_path, self.table.to_csv())
            .map_err(|e| HarnessError::Io(format!("write {}: {e}", csv_path.display())))?;
        let summary = Summary {
            experiment: self.experiment.clone(),
            pass: self.pass(),
            rows: self.table.rows.len(),
            checks: self.checks.clone(),
            fingerprint: Fingerprint::current(),
        };
        let json_path = dir.join(format!("{}.summary.json", self.experiment));
        let body = serde_json::to_string_pretty(&summary)
            .map_err(|e| HarnessError::Io(e.to_string()))?;
        fs::write(&json_path, body + "\n")
            .map_err(|e| HarnessError::Io(format!("write {}: {e}", json_path.display())))?;
        Ok((csv_path, json_path))
    }
}

/// Binary matrix dump: interleaved re/im binary64, row-major, with a JSON
/// sidecar describing the basis so the file is self-describing offline.
pub fn dump_matrix(
    dir: &Path,
    stem: &str,
    n: usize,
    maxdeg: usize,
    matrix: &focklab_core::linalg::CMat,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)
        .map_err(|e| HarnessError::Io(format!("create {}: {e}", dir.display())))?;
    let mut bytes = Vec::with_capacity(matrix.data.len() * 16);
    for v in &matrix.data {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    let bin = dir.join(format!("{stem}.bin"));
    fs::write(&bin, bytes).map_err(|e| HarnessError::Io(format!("write {}: {e}", bin.display())))?;
    let sidecar = serde_json::json!({
        "n": n,
        "maxdeg": maxdeg,
        "rows": matrix.rows,
        "cols": matrix.cols,
        "layout": "row-major, interleaved little-endian binary64 (re, im)",
        "ordering": "graded lexicographic monomial basis z^alpha / sqrt(2^|alpha| alpha!)",
    });
    let side = dir.join(format!("{stem}.json"));
    fs::write(&side, serde_json::to_string_pretty(&sidecar).unwrap() + "\n")
        .map_err(|e| HarnessError::Io(format!("write {}: {e}", side.display())))?;
    Ok(())
}
