use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::verdict::{CheckResult, Status};

use super::Scenario;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub prime: u64,
    pub coeff_prec: u32,
    pub degree_cap: usize,
    pub version: String,
    /// SHA-256 of the canonical scenario JSON.
    pub scenario_sha256: String,
}

impl Provenance {
    pub fn of(s: &Scenario) -> Self {
        Self {
            seed: s.seed,
            prime: s.context.prime(),
            coeff_prec: s.context.precision(),
            degree_cap: s.context.cap(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_sha256: sha256_hex(s.to_json().as_bytes()),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub flags: Vec<String>,
    pub provenance: Provenance,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    /// Hash of the JSON form; identical inputs give identical digests.
    pub fn digest(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{:<7} {:<30} {}", c.status.to_string().to_uppercase(), c.name, c.witness);
            for f in &c.factors {
                let _ = writeln!(out, "        factor: {f}");
            }
        }
        for f in &self.flags {
            let _ = writeln!(out, "flag: {f}");
        }
        let p = &self.provenance;
        let _ = writeln!(
            out,
            "seed {} p = {} M = {} N = {} version {} scenario {}",
            p.seed, p.prime, p.coeff_prec, p.degree_cap, p.version, p.scenario_sha256
        );
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{golden, run_verifications};

    #[test]
    fn json_round_trip_and_stable_digest() {
        let s = golden::rank3_worked(golden::default_context()).unwrap();
        let a = run_verifications(&s);
        let back = VerificationReport::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        assert_eq!(a.digest(), run_verifications(&s).digest());
        assert!(a.to_text().contains("12 passed, 0 failed"));
    }
}
