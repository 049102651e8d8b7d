//! Structured verification records.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One executed check: what was checked, on which parameters, and the outcome.
///
/// A `fail` verdict always carries at least one witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub check_name: String,
    pub statement: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(check_name: &str, statement: &str) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            check_name: check_name.to_string(),
            statement: statement.to_string(),
            parameters: BTreeMap::new(),
            verdict: Verdict::Inconclusive,
            witnesses: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: Value) -> &mut Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn finish(mut self, verdict: Verdict, witnesses: Vec<String>, start: Instant) -> Self {
        self.verdict = verdict;
        self.witnesses = witnesses;
        if self.verdict == Verdict::Fail && self.witnesses.is_empty() {
            self.witnesses.push("check failed without a recorded witness".into());
        }
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn tsv_header() -> &'static str {
        "check\tverdict\truntime_ms\tparameters\twitnesses"
    }

    pub fn to_tsv_line(&self) -> String {
        let clean = |s: String| s.replace(['\t', '\n'], " ");
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.check_name,
            self.verdict.as_str(),
            self.runtime_ms,
            clean(serde_json::to_string(&self.parameters).unwrap_or_default()),
            clean(self.witnesses.join("; "))
        )
    }

    /// Looks up an integer parameter.
    pub fn param_u64(&self, key: &str) -> Option<u64> {
        self.parameters.get(key).and_then(Value::as_u64)
    }
}
