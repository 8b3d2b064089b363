//! CSV tables and JSON manifests for scan results.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pathlight_core::{SamplingPlan, ScanResult, ScanRow};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

/// Fixed 16-significant-digit scientific notation for probabilities.
pub fn format_probability(p: f64) -> String {
    format!("{p:.15e}")
}

/// Header `<parameter>_<units>,P`, then one row per scan point.
pub fn csv_string(scan: &ScanResult) -> String {
    let mut s = format!("{}_{},P\n", scan.parameter, scan.units);
    for r in &scan.rows {
        s.push_str(&format!("{},{}\n", r.parameter, format_probability(r.probability)));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub config: RunConfig,
    pub parameter: String,
    pub units: String,
    pub plan: SamplingPlan,
    pub rows: Vec<ScanRow>,
    pub max_node_count: usize,
    pub total_node_count: usize,
    pub duration_s: f64,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn new(config: &RunConfig, scan: &ScanResult, warnings: Vec<String>) -> Self {
        Manifest {
            tool: "pathlight".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: scan.scenario.clone(),
            config: config.clone(),
            parameter: scan.parameter.clone(),
            units: scan.units.clone(),
            plan: scan.plan,
            rows: scan.rows.clone(),
            max_node_count: scan.max_node_count(),
            total_node_count: scan.total_node_count(),
            duration_s: scan.duration_s,
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("manifest: {e}")))
    }
}

/// Sibling file holding the manifest of a CSV written to `path`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
}
