//! Per-check verdicts shared by the verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub witness: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool, witness: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            witness: witness.into(),
            factors: Vec::new(),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status: Status::Skipped,
            witness: reason.into(),
            factors: Vec::new(),
        }
    }

    pub fn with_factors(mut self, factors: Vec<String>) -> Self {
        self.factors = factors;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `f`; an error becomes a skipped verdict carrying the reason.
    pub fn evaluate(name: &str, f: impl FnOnce() -> Result<CheckResult>) -> Self {
        match f() {
            Ok(r) => r,
            Err(e) => Self::skipped(name, e.to_string()),
        }
    }
}
