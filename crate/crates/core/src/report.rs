//! Structured pass/fail reports for the exact verifiers. A failure carries
//! the offending data rendered exactly; verifiers report, callers decide.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Exact failure records (empty when passed).
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str, failures: Vec<String>) -> Self {
        CheckReport { name: name.to_string(), passed: failures.is_empty(), failures }
    }

    pub fn pass(name: &str) -> Self {
        CheckReport { name: name.to_string(), passed: true, failures: Vec::new() }
    }
}

/// Aggregate of every check a run performed.
#[derive(Debug, Clone, Serialize, Default)]
pub struct VerifySummary {
    pub checks: Vec<CheckReport>,
}

impl VerifySummary {
    pub fn push(&mut self, report: CheckReport) {
        self.checks.push(report);
    }

    pub fn extend(&mut self, reports: Vec<CheckReport>) {
        self.checks.extend(reports);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
