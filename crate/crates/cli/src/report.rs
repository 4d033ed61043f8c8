//! JSON report emitted by every command:
//! `{command, config_echo, checks: [{name, paper_ref, defect, tolerance,
//! pass}], wall_time_ms}`. The `paper_ref` field carries the identity or
//! formula a check verifies. Field order is fixed by the struct layout, so
//! reports with the same config and seed are reproducible byte for byte up
//! to the wall-time entry.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    pub n: usize,
    pub seed: u64,
    pub norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_fault: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub paper_ref: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(
        name: impl Into<String>,
        paper_ref: impl Into<String>,
        defect: f64,
        tolerance: f64,
    ) -> Self {
        let pass = defect <= tolerance;
        CheckRow { name: name.into(), paper_ref: paper_ref.into(), defect, tolerance, pass }
    }

    /// Row that reports a computed value rather than a defect; always passes.
    pub fn value(name: impl Into<String>, paper_ref: impl Into<String>, value: f64) -> Self {
        CheckRow { name: name.into(), paper_ref: paper_ref.into(), defect: value, tolerance: 0.0, pass: true }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config_echo: ConfigEcho,
    pub checks: Vec<CheckRow>,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        let body = serde_json::to_string_pretty(self).expect("report serializes");
        match out {
            Some(path) => std::fs::write(path, body + "\n"),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                writeln!(lock, "{body}")
            }
        }
    }
}
