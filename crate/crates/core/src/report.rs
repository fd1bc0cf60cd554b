//! Serializable run reports: one record per residual check or computed
//! value, plus an overall verdict. No timing data, so identical runs
//! produce identical reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one check: either a residual compared against a tolerance or
/// a computed value recorded for inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which identity or quantity the record verifies.
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub pass: bool,
}

impl CheckRecord {
    pub fn residual(name: &str, check: &str, residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            check: check.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            value: None,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    pub fn value(name: &str, check: &str, value: String) -> Self {
        CheckRecord {
            name: name.into(),
            check: check.into(),
            residual: None,
            tolerance: None,
            value: Some(value),
            pass: true,
        }
    }

    /// A check that could not run; always failing, with the error text.
    pub fn error(name: &str, check: &str, message: String) -> Self {
        CheckRecord {
            name: name.into(),
            check: check.into(),
            residual: None,
            tolerance: None,
            value: Some(message),
            pass: false,
        }
    }
}

/// Full report of one run: configuration echo plus the check records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    pub fn new(task: &str, seed: u64) -> Self {
        Report {
            task: task.into(),
            seed,
            parameters: BTreeMap::new(),
            records: Vec::new(),
            pass: true,
        }
    }

    pub fn set_parameter(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.pass &= record.pass;
        self.records.push(record);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_records() {
        let mut r = Report::new("verify-smatrix", 7);
        r.set_parameter("n", 2);
        r.push(CheckRecord::residual("unitarity", "S12 S21 = I", 1e-15, 1e-12));
        assert!(r.pass);
        r.push(CheckRecord::residual("yang-baxter", "three-space consistency", 1e-3, 1e-12));
        assert!(!r.pass);
        r.push(CheckRecord::value("note", "recorded value", "0.5".into()));
        assert!(!r.pass);
    }

    #[test]
    fn nan_residual_fails() {
        let rec = CheckRecord::residual("x", "y", f64::NAN, 1e-12);
        assert!(!rec.pass);
    }

    #[test]
    fn roundtrips_through_json() {
        let mut r = Report::new("hierarchy", 3);
        r.set_parameter("g", 1.0);
        r.push(CheckRecord::residual("commutator", "hierarchy commutator", 2e-13, 1e-10));
        r.push(CheckRecord::error("broken", "unreachable case", "pole at k = 0".into()));
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
        assert!(!back.pass);
    }
}
