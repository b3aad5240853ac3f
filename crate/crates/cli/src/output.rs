//! Report files: `report.json`, `sweep.csv` and `code.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use cqsum::Limits;
use serde::Serialize;

use crate::CliError;

/// Schema identifier written into every report.
pub const REPORT_SCHEMA: &str = "cqsum-report/1";

#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    pub generator: &'static str,
    pub seed: u64,
    pub limits: Limits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub result: T,
}

/// One row of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub rate: Option<f64>,
    pub error: f64,
    pub stderr: f64,
    pub seed: Option<u64>,
}

/// Files produced by one run, in memory until written.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub report: String,
    pub sweep: Option<Vec<u8>>,
    pub code: Option<String>,
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        writer
            .write_record(["n", "k", "l", "rate", "error", "stderr", "seed"])
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::Output(e.to_string()))?;
    }
    writer.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

/// Serializes arbitrary records with a header taken from their field names.
pub fn records_csv<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        writer.write_record(header).map_err(|e| CliError::Output(e.to_string()))?;
    }
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::Output(e.to_string()))?;
    }
    writer.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

/// Writes the artifacts into `dir`, creating it if needed, and returns the
/// paths written.
pub fn write_artifacts(dir: &Path, artifacts: &Artifacts) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path, e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: &[u8]| -> Result<(), CliError> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| io(&path, e))?;
        written.push(path);
        Ok(())
    };
    put("report.json", artifacts.report.as_bytes())?;
    if let Some(sweep) = &artifacts.sweep {
        put("sweep.csv", sweep)?;
    }
    if let Some(code) = &artifacts.code {
        put("code.json", code.as_bytes())?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sweeps_keep_their_header() {
        let bytes = sweep_csv(&[]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "n,k,l,rate,error,stderr,seed\n");
    }

    #[test]
    fn sweep_rows_leave_missing_fields_empty() {
        let row = SweepRow { n: 4, k: Some(0), l: None, rate: None, error: 0.25, stderr: 0.0, seed: Some(3) };
        let text = String::from_utf8(sweep_csv(&[row]).unwrap()).unwrap();
        assert_eq!(text, "n,k,l,rate,error,stderr,seed\n4,0,,,0.25,0.0,3\n");
    }
}
