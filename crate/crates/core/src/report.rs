//! Structured verification reports and their JSON, CSV and text forms.
//!
//! JSON maps are ordered by key and reports carry no timestamps, so the same
//! run always produces byte-identical files.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Failures listed in JSON are truncated to this many entries.
pub const MAX_LISTED_FAILURES: usize = 100;

/// A header plus string cells; the CSV form of a report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub pass: bool,
    /// False for informational suites whose failures do not fail a run.
    pub hard: bool,
    pub parameters: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_length: Option<u64>,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Value>,
    pub summary: Map<String, Value>,
    #[serde(skip)]
    pub table: Table,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, hard: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            pass: true,
            hard,
            parameters: Map::new(),
            prefix_length: None,
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            summary: Map::new(),
            table: Table::default(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn record_check(&mut self) {
        self.checked += 1;
    }

    pub fn record_failure(&mut self, failure: impl Serialize) {
        self.pass = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures
                .push(serde_json::to_value(failure).expect("failure serializes"));
        }
    }

    /// Merges another report's counts and failures into this one.
    pub fn absorb(&mut self, other: &VerificationReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        self.pass &= other.pass;
        for f in &other.failures {
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(f.clone());
            }
        }
    }

    /// True when the report should not fail a run.
    pub fn acceptable(&self) -> bool {
        self.pass || !self.hard
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let kind = if self.hard { "" } else { " (informational)" };
        let _ = writeln!(out, "{}: {verdict}{kind}", self.suite);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  param {k} = {v}");
        }
        if let Some(l) = self.prefix_length {
            let _ = writeln!(out, "  prefix_length = {l}");
        }
        let _ = writeln!(
            out,
            "  checked = {}, failures = {}",
            self.checked, self.failure_count
        );
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for f in self.failures.iter().take(10) {
            let _ = writeln!(out, "  failure: {f}");
        }
        out
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Renders a float for human-readable columns only.
pub fn approx(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_flip_pass_and_are_truncated() {
        let mut r = VerificationReport::new("demo", true);
        assert!(r.pass);
        for i in 0..150 {
            r.record_failure(i);
        }
        assert!(!r.pass);
        assert!(!r.acceptable());
        assert_eq!(r.failure_count, 150);
        assert_eq!(r.failures.len(), MAX_LISTED_FAILURES);
    }

    #[test]
    fn informational_reports_are_acceptable_when_failing() {
        let mut r = VerificationReport::new("conj18", false);
        r.record_failure("x");
        assert!(r.acceptable());
    }

    #[test]
    fn json_is_deterministic_and_versioned() {
        let mut r = VerificationReport::new("demo", true);
        r.param("z", 1).param("a", 2);
        let a = r.to_json().unwrap();
        let b = r.clone().to_json().unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema_version"], 1);
        let keys: Vec<_> = v["parameters"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["a", "z"]);
    }

    #[test]
    fn csv_has_header_even_when_empty() {
        let t = Table::new(["i", "k", "gamma"]);
        assert_eq!(t.to_csv().unwrap(), "i,k,gamma\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
    }
}
