//! Machine-readable verification reports: one record per check, each with a
//! source anchor, a pass/fail/unknown status, and a replayable certificate
//! or counterexample payload.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub anchor: String,
    pub status: RecordStatus,
    pub detail: serde_json::Value,
}

impl CheckRecord {
    pub fn pass(id: impl Into<String>, anchor: impl Into<String>, detail: serde_json::Value) -> Self {
        CheckRecord {
            check_id: id.into(),
            anchor: anchor.into(),
            status: RecordStatus::Pass,
            detail,
        }
    }
    pub fn fail(id: impl Into<String>, anchor: impl Into<String>, detail: serde_json::Value) -> Self {
        CheckRecord {
            check_id: id.into(),
            anchor: anchor.into(),
            status: RecordStatus::Fail,
            detail,
        }
    }
    pub fn unknown(
        id: impl Into<String>,
        anchor: impl Into<String>,
        detail: serde_json::Value,
    ) -> Self {
        CheckRecord {
            check_id: id.into(),
            anchor: anchor.into(),
            status: RecordStatus::Unknown,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn passes(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == RecordStatus::Pass)
            .count()
    }
    pub fn failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == RecordStatus::Fail)
            .count()
    }
    pub fn unknowns(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == RecordStatus::Unknown)
            .count()
    }

    /// Order records deterministically and merge another report in.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn sort(&mut self) {
        self.records
            .sort_by(|a, b| a.check_id.cmp(&b.check_id));
    }

    pub fn overall(&self) -> RecordStatus {
        if self.failures() > 0 {
            RecordStatus::Fail
        } else if self.unknowns() > 0 {
            RecordStatus::Unknown
        } else {
            RecordStatus::Pass
        }
    }
}
