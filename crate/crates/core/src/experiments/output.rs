//! JSON and CSV serialization of experiment results.
//!
//! JSON documents have the shape
//! `{"experiment": …, "seed": …, "trials": …, "results": …}`; floats use the
//! shortest representation that round-trips exactly. CSV files start with a
//! header row and write floats with 17 significant digits.

use std::io::Write;

use serde::Serialize;

use super::{BoundComparison, ComparisonSummary, FuzzReport, GridRow, SupEstimate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope<T: Serialize> {
    pub experiment: String,
    pub seed: u64,
    pub trials: u64,
    pub results: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(experiment: &str, seed: u64, trials: u64, results: T) -> Self {
        Envelope { experiment: experiment.to_string(), seed, trials, results }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(e.to_string()))
    }
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Results that can be written as a CSV table.
pub trait CsvTable {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn write_csv<T: CsvTable + ?Sized, W: Write>(table: &T, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParameter(format!("CSV output failed: {e}"));
    w.write_record(table.header()).map_err(io)?;
    for row in table.rows() {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("CSV output failed: {e}")))
}

pub fn to_csv_string<T: CsvTable + ?Sized>(table: &T) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(table, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

impl CsvTable for [GridRow] {
    fn header(&self) -> Vec<&'static str> {
        vec!["q", "t", "l", "u", "branch"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter()
            .map(|r| {
                let branch = match r.branch {
                    crate::bounds::MidpointBranch::Inner => "inner",
                    crate::bounds::MidpointBranch::Outer => "outer",
                };
                vec![format_float(r.q), format_float(r.t), format_float(r.l), format_float(r.u), branch.into()]
            })
            .collect()
    }
}

impl CsvTable for ComparisonSummary {
    fn header(&self) -> Vec<&'static str> {
        vec!["seed", "total", "both_better", "lower_better", "upper_better", "fraction"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.seed.to_string(),
            self.total.to_string(),
            self.both_better.to_string(),
            self.lower_better.to_string(),
            self.upper_better.to_string(),
            format_float(self.fraction()),
        ]]
    }
}

impl CsvTable for SupEstimate {
    fn header(&self) -> Vec<&'static str> {
        vec!["estimate", "probe", "random"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![format_float(self.estimate), format_float(self.probe), format_float(self.random)]]
    }
}

impl CsvTable for BoundComparison {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "a_re", "a_im", "x_re", "x_im", "y_re", "y_im", "quotient", "annulus_lower",
            "annulus_upper", "midpoint_lower", "midpoint_upper", "q_abs", "t",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let v = [
            self.a[0],
            self.a[1],
            self.x[0],
            self.x[1],
            self.y[0],
            self.y[1],
            self.quotient,
            self.annulus_bounds.lower,
            self.annulus_bounds.upper,
            self.midpoint_bounds.lower,
            self.midpoint_bounds.upper,
            self.q_abs,
            self.t,
        ];
        vec![v.iter().map(|&f| format_float(f)).collect()]
    }
}

/// One row per recorded violation; a report without violations has only the
/// header.
impl CsvTable for FuzzReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["domain", "check", "trial", "x", "y", "value", "bound", "margin"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let coords = |c: &[f64]| c.iter().map(|&v| format_float(v)).collect::<Vec<_>>().join(";");
        self.violations
            .iter()
            .map(|v| {
                vec![
                    self.domain.clone(),
                    v.check.to_string(),
                    v.trial.to_string(),
                    coords(&v.x),
                    coords(&v.y),
                    format_float(v.value),
                    format_float(v.bound),
                    format_float(v.margin),
                ]
            })
            .collect()
    }
}

impl CsvTable for [FuzzReport] {
    fn header(&self) -> Vec<&'static str> {
        vec!["domain", "check", "trial", "x", "y", "value", "bound", "margin"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter().flat_map(|r| r.rows()).collect()
    }
}
