//! Machine-readable reports shared by the library and the CLI.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;

pub const SCHEMA: &str = "cliffordlab/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(rename = "T_count", skip_serializing_if = "Option::is_none")]
    pub t_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_scanned: Option<u64>,
    pub violations: Vec<Value>,
    pub violation_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Map::is_empty", default)]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            check: check.to_string(),
            passed: true,
            d: None,
            t_count: None,
            points_scanned: None,
            violations: Vec::new(),
            violation_count: 0,
            workers: None,
            seed: None,
            elapsed_ms: 0,
            details: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn fail_with(&mut self, violation: impl Serialize) {
        self.passed = false;
        self.violation_count += 1;
        self.violations.push(serde_json::to_value(violation).expect("serializable"));
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON with timing fields zeroed, for content comparison.
    pub fn content_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        r.to_json()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_schema_and_counts() {
        let mut r = Report::new("main-theorem");
        r.d = Some(3);
        r.t_count = Some(10);
        r.elapsed_ms = 42;
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "cliffordlab/1");
        assert_eq!(v["T_count"], 10);
        assert_eq!(v["violations"], Value::Array(vec![]));
        assert_eq!(r.exit_code(), 0);
        r.fail_with("bad");
        assert_eq!(r.exit_code(), 1);
        let mut other = r.clone();
        other.elapsed_ms = 7;
        assert_eq!(r.content_json(), other.content_json());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
