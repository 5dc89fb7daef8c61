use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// One named check with its certificate data.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, details: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            details,
        }
    }
}

/// Exit code 0 when every check passes, 1 when a check fails, 2 on input
/// or hypothesis errors.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>, results: Vec<Check>, data: Value) -> Self {
        let exit_code = if results.iter().all(|c| c.passed) { 0 } else { 1 };
        RunReport {
            command: command.into(),
            inputs,
            results,
            data,
            error: None,
            exit_code,
        }
    }

    pub fn failure(command: &str, inputs: Vec<InputDigest>, error: String) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            results: Vec::new(),
            data: Value::Null,
            error: Some(error),
            exit_code: 2,
        }
    }

    pub fn passed(&self) -> bool {
        self.exit_code == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.results.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tropcalc {}", self.command);
        for i in &self.inputs {
            let _ = writeln!(s, "  input {} sha256 {}", i.path, &i.sha256[..16]);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "  error: {e}");
        }
        for c in &self.results {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let details = match &c.details {
                Value::Null => String::new(),
                v => format!("  {v}"),
            };
            let _ = writeln!(s, "  [{tag}] {}{details}", c.name);
        }
        if !self.data.is_null() {
            let _ = writeln!(s, "  data: {}", self.data);
        }
        let _ = writeln!(s, "  exit code {}", self.exit_code);
        s
    }
}
