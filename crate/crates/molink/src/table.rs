//! Result tables and their on-disk form.
//!
//! CSV layout: the sweep axis in the first column, then one `(value,
//! stderr)` column pair per series. A JSON sidecar carries the provenance:
//! config hash, seed, git description, and runtime.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::RunError;

/// One named series over the sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
    /// Monte Carlo standard errors; zeros for analytic series.
    pub stderrs: Vec<f64>,
}

impl Series {
    pub fn analytic(name: impl Into<String>, values: Vec<f64>) -> Series {
        let stderrs = vec![0.0; values.len()];
        Series { name: name.into(), values, stderrs }
    }
}

/// Sweep results for one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub axis_name: String,
    pub axis: Vec<f64>,
    pub series: Vec<Series>,
    /// Free-form findings recorded alongside the numbers (lands in the
    /// metadata sidecar, not the CSV).
    pub notes: Vec<String>,
}

impl ResultTable {
    pub fn new(axis_name: impl Into<String>, axis: Vec<f64>) -> ResultTable {
        ResultTable { axis_name: axis_name.into(), axis, series: Vec::new(), notes: Vec::new() }
    }

    pub fn push_series(&mut self, series: Series) -> Result<(), RunError> {
        if series.values.len() != self.axis.len() || series.stderrs.len() != self.axis.len() {
            return Err(RunError::Runtime(format!(
                "series '{}' length {} does not match axis length {}",
                series.name,
                series.values.len(),
                self.axis.len()
            )));
        }
        if series.stderrs.iter().any(|&s| s < 0.0) {
            return Err(RunError::Runtime(format!(
                "series '{}' has a negative standard error",
                series.name
            )));
        }
        self.series.push(series);
        Ok(())
    }

    pub fn series_named(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Renders the table; float formatting is Rust's shortest round-trip
    /// form, so identical numbers always produce identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.axis_name);
        for s in &self.series {
            let _ = write!(out, ",{},stderr_{}", s.name, s.name);
        }
        out.push('\n');
        for (i, x) in self.axis.iter().enumerate() {
            let _ = write!(out, "{x}");
            for s in &self.series {
                let _ = write!(out, ",{},{}", s.values[i], s.stderrs[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Provenance sidecar written next to each CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub experiment: String,
    pub config_sha256: String,
    pub seed: u64,
    pub git_describe: String,
    pub runtime_seconds: f64,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn write_json(&self, path: &Path) -> Result<(), RunError> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| RunError::Runtime(e.to_string()))?;
        std::fs::write(path, body + "\n")?;
        Ok(())
    }
}

/// `git describe --always --dirty`, or "unknown" outside a repository.
pub fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string())
}

/// Hex SHA-256 of the raw config bytes.
pub fn config_hash(config_bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(config_bytes))
}

/// Batch-means standard error: the spread of per-batch means over sqrt(B).
pub fn batch_means_stderr(batch_values: &[f64]) -> f64 {
    let b = batch_values.len();
    if b < 2 {
        return 0.0;
    }
    let mean = batch_values.iter().sum::<f64>() / b as f64;
    let var = batch_values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (b - 1) as f64;
    (var / b as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_axis_then_value_stderr_pairs() {
        let mut t = ResultTable::new("t_s_s", vec![0.1, 0.2]);
        t.push_series(Series { name: "sir_lambda0".into(), values: vec![1.5, 2.5], stderrs: vec![0.0, 0.0] })
            .unwrap();
        let csv = t.to_csv();
        assert_eq!(csv, "t_s_s,sir_lambda0,stderr_sir_lambda0\n0.1,1.5,0\n0.2,2.5,0\n");
    }

    #[test]
    fn ragged_series_rejected() {
        let mut t = ResultTable::new("x", vec![1.0, 2.0, 3.0]);
        let bad = Series::analytic("y", vec![1.0]);
        assert!(t.push_series(bad).is_err());
    }

    #[test]
    fn batch_means_match_hand_computation() {
        // Batches 1,2,3,4: mean 2.5, sample var 5/3, stderr sqrt(5/12).
        let se = batch_means_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(batch_means_stderr(&[1.0]), 0.0);
    }

    #[test]
    fn config_hash_is_stable() {
        assert_eq!(config_hash(b"abc"), config_hash(b"abc"));
        assert_ne!(config_hash(b"abc"), config_hash(b"abd"));
    }
}
