//! CSV and JSON output.
//!
//! CSV is the canonical artifact. Floats carry 17 significant digits; an
//! unstable run prints `*` for its errors (and rates), a missing rate is `-`.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{io_at, HarnessError, Result};
use crate::study::{ConvergenceRow, EfficiencyRecord, EnergySeries, SimulationRecord};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(HarnessError::Config(format!("unknown format '{s}' (csv, json)"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

/// Results of one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rows", rename_all = "snake_case")]
pub enum Report {
    Convergence(Vec<ConvergenceRow>),
    Energy(Vec<EnergySeries>),
    Efficiency(Vec<EfficiencyRecord>),
    Simulation(Vec<SimulationRecord>),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema_version: u32,
    #[serde(flatten)]
    report: Report,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(x: Option<f64>, stable: bool) -> String {
    match x {
        Some(v) => num(v),
        None if !stable => "*".into(),
        None => "-".into(),
    }
}

impl Report {
    pub fn kind(&self) -> &'static str {
        match self {
            Report::Convergence(_) => "convergence",
            Report::Energy(_) => "energy",
            Report::Efficiency(_) => "efficiency",
            Report::Simulation(_) => "simulation",
        }
    }

    pub fn csv_header(&self) -> &'static [&'static str] {
        match self {
            Report::Convergence(_) => &["model", "scheme", "eps", "tau", "field", "error", "rate", "stable"],
            Report::Energy(_) | Report::Simulation(_) => &["model", "scheme", "eps", "tau", "t", "rh", "stable"],
            Report::Efficiency(_) => &[
                "model",
                "scheme",
                "eps",
                "tau",
                "field",
                "error",
                "wall_clock",
                "iterations",
                "stable",
            ],
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_header())?;
        let energy_rows = |w: &mut csv::Writer<W>, s: &EnergySeries| -> Result<()> {
            for (t, rh) in s.times.iter().zip(&s.rh) {
                w.write_record([
                    s.model.name().to_string(),
                    s.scheme.name().to_string(),
                    num(s.eps),
                    num(s.tau),
                    num(*t),
                    num(*rh),
                    s.stable.to_string(),
                ])?;
            }
            Ok(())
        };
        match self {
            Report::Convergence(rows) => {
                for r in rows {
                    for f in &r.fields {
                        w.write_record([
                            r.model.name().to_string(),
                            r.scheme.name().to_string(),
                            num(r.eps),
                            num(r.tau),
                            f.field.clone(),
                            cell(f.error, r.stable),
                            cell(f.rate, r.stable),
                            r.stable.to_string(),
                        ])?;
                    }
                }
            }
            Report::Energy(rows) => {
                for s in rows {
                    energy_rows(&mut w, s)?;
                }
            }
            Report::Simulation(rows) => {
                for s in rows {
                    energy_rows(&mut w, &s.energy)?;
                }
            }
            Report::Efficiency(rows) => {
                for r in rows {
                    for f in &r.errors {
                        w.write_record([
                            r.model.name().to_string(),
                            r.scheme.name().to_string(),
                            num(r.eps),
                            num(r.tau),
                            f.field.clone(),
                            cell(f.error, r.stable),
                            num(r.wall_clock),
                            r.iterations.to_string(),
                            r.stable.to_string(),
                        ])?;
                    }
                }
            }
        }
        w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Envelope {
            schema_version: REPORT_SCHEMA_VERSION,
            report: self.clone(),
        })?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let env: Envelope = serde_json::from_str(text)?;
        if env.schema_version != REPORT_SCHEMA_VERSION {
            return Err(HarnessError::Config(format!(
                "report schema version {} (expected {REPORT_SCHEMA_VERSION})",
                env.schema_version
            )));
        }
        Ok(env.report)
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Csv => self.to_csv_string(),
            ReportFormat::Json => self.to_json_string(),
        }
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit(report: &Report, format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let text = report.render(format)?;
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_at(dir))?;
            }
            fs::write(p, text).map_err(io_at(p))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io_at("<stdout>"))
        }
    }
}
