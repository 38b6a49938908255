//! Writing reports as JSON or CSV.

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use serde_json::Value;
use std::io::Write;

/// A report: the JSON document plus the rows used for CSV output.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.json).expect("report values serialize");
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(csv_err)?;
                for row in &self.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))
            }
        }
    }

    /// Writes to `--out` or standard output.
    pub fn emit(&self, cfg: &RunConfig) -> Result<(), CliError> {
        let bytes = self.render(cfg.format)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Seconds with millisecond resolution.
pub fn seconds(d: std::time::Duration) -> Value {
    Value::from((d.as_secs_f64() * 1000.0).round() / 1000.0)
}
