//! CSV, JSON and plain-text writers for identity reports and coefficient tables.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::HypError;
use crate::transforms::IdentityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = HypError;

    fn from_str(s: &str) -> Result<Self, HypError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(HypError::Parse(format!("unknown format {s:?} (expected csv, json or text)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

/// Shortest round-trip text for a float, switching to exponent form for
/// very small or very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let mag = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&mag) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_identity_report<W: Write>(report: &IdentityReport, format: Format, mut out: W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            // explicit header so an empty report still has one
            w.write_record(["a", "b", "x", "lhs", "rhs", "abs_err", "rel_err", "pass"])
                .map_err(csv_error)?;
            for s in &report.samples {
                w.write_record(&[
                    fmt_f64(s.a),
                    fmt_f64(s.b),
                    fmt_f64(s.x),
                    fmt_f64(s.lhs),
                    fmt_f64(s.rhs),
                    fmt_f64(s.abs_err),
                    fmt_f64(s.rel_err),
                    s.pass.to_string(),
                ])
                .map_err(csv_error)?;
            }
            w.flush()
        }
        Format::Text => {
            writeln!(out, "case: {}  tol: {:e}  seed: {}", report.case, report.tol, seed_text(report.seed))?;
            writeln!(
                out,
                "{:>22} {:>22} {:>22} {:>24} {:>24} {:>11} {:>11} {:>5}",
                "a", "b", "x", "lhs", "rhs", "abs_err", "rel_err", "pass"
            )?;
            for s in &report.samples {
                writeln!(
                    out,
                    "{:>22} {:>22} {:>22} {:>24} {:>24} {:>11.3e} {:>11.3e} {:>5}",
                    s.a, s.b, s.x, s.lhs, s.rhs, s.abs_err, s.rel_err, s.pass
                )?;
            }
            writeln!(
                out,
                "n_pass: {}  n_fail: {}  skipped: {}  max_rel_err: {:e}",
                report.n_pass,
                report.n_fail,
                report.skipped.len(),
                report.max_rel_err()
            )
        }
    }
}

fn seed_text(seed: Option<u64>) -> String {
    seed.map_or_else(|| "-".to_string(), |s| s.to_string())
}

/// One row of the recurrence-versus-closed-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: usize,
    pub recurrence: String,
    pub closed_form: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffTable {
    pub case: String,
    pub branch: String,
    pub a: String,
    pub b: String,
    pub lambda: String,
    pub formula: String,
    pub rows: Vec<CoeffRow>,
    pub all_equal: bool,
}

pub fn write_coeff_table<W: Write>(table: &CoeffTable, format: Format, mut out: W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, table)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "recurrence", "closed_form", "equal"]).map_err(csv_error)?;
            for r in &table.rows {
                w.write_record(&[r.n.to_string(), r.recurrence.clone(), r.closed_form.clone(), r.equal.to_string()])
                    .map_err(csv_error)?;
            }
            w.flush()
        }
        Format::Text => {
            writeln!(
                out,
                "case: {}  branch: {}  a = {}  b = {}  lambda = {}",
                table.case, table.branch, table.a, table.b, table.lambda
            )?;
            writeln!(out, "closed form: {}", table.formula)?;
            let width = table
                .rows
                .iter()
                .map(|r| r.recurrence.len().max(r.closed_form.len()))
                .max()
                .unwrap_or(0)
                .max(11);
            writeln!(out, "{:>4}  {:>width$}  {:>width$}  equal", "n", "recurrence", "closed form")?;
            for r in &table.rows {
                writeln!(out, "{:>4}  {:>width$}  {:>width$}  {}", r.n, r.recurrence, r.closed_form, r.equal)?;
            }
            writeln!(out, "all equal: {}", table.all_equal)
        }
    }
}
