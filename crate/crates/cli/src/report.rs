use std::io::Write;

use serde::Serialize;

use crate::config::{ConfigError, Format};
use crate::Output;

pub const SCHEMA_VERSION: u32 = 1;

/// A report that can be written as JSON or as CSV rows plus a summary row.
pub trait Report: Serialize {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
    /// Last CSV row; its first field is `SUMMARY`.
    fn csv_summary(&self) -> Vec<String>;
    fn all_ok(&self) -> bool;
}

pub fn render<R: Report>(format: Format, rep: &R) -> Result<Vec<u8>, ConfigError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rep).map_err(|e| ConfigError(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let header = rep.csv_header();
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            let csv_err = |e: csv::Error| ConfigError(e.to_string());
            w.write_record(&header).map_err(csv_err)?;
            for row in rep.csv_rows() {
                w.write_record(&row).map_err(csv_err)?;
            }
            w.write_record(rep.csv_summary()).map_err(csv_err)?;
            w.into_inner().map_err(|e| ConfigError(e.to_string()))
        }
    }
}

pub fn emit<R: Report>(output: &Output, rep: &R) -> Result<(), ConfigError> {
    let bytes = render(output.format, rep)?;
    match &output.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

pub fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
