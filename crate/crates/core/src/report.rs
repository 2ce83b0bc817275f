//! Verification records and the report document shared by every checker.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Undetermined,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undetermined => "undetermined",
        })
    }
}

/// Answer to a question quantified over an infinite set, decided up to a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    True,
    False,
    Undetermined { bound: usize },
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }

    pub fn is_true(self) -> bool {
        self == TriState::True
    }

    pub fn is_false(self) -> bool {
        self == TriState::False
    }

    pub fn and(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::False, _) | (_, TriState::False) => TriState::False,
            (TriState::Undetermined { bound }, _) | (_, TriState::Undetermined { bound }) => {
                TriState::Undetermined { bound }
            }
            _ => TriState::True,
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriState::True => f.write_str("true"),
            TriState::False => f.write_str("false"),
            TriState::Undetermined { bound } => write!(f, "undetermined (bound {bound})"),
        }
    }
}

/// One checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub claim: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub details: Vec<(String, String)>,
}

impl Record {
    pub fn new(claim: impl Into<String>, anchor: impl Into<String>) -> Self {
        Record {
            claim: claim.into(),
            anchor: anchor.into(),
            status: Status::Undetermined,
            witness: None,
            checked: 0,
            bound: Some(0),
            details: Vec::new(),
        }
    }

    pub fn pass(mut self, checked: usize) -> Self {
        self.checked = checked;
        if checked == 0 {
            self.status = Status::Undetermined;
            self.bound = Some(0);
            self.witness = Some("no instances checked".into());
        } else {
            self.status = Status::Pass;
            self.bound = None;
        }
        self
    }

    pub fn fail(mut self, witness: impl Into<String>, checked: usize) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
        self.checked = checked.max(1);
        self.bound = None;
        self
    }

    pub fn undetermined(mut self, bound: usize, why: impl Into<String>, checked: usize) -> Self {
        self.status = Status::Undetermined;
        self.bound = Some(bound);
        self.witness = Some(why.into());
        self.checked = checked;
        self
    }

    pub fn from_check(claim: impl Into<String>, anchor: impl Into<String>, check: Check) -> Self {
        let r = Record::new(claim, anchor);
        if let Some(w) = check.failure {
            r.fail(w, check.checked)
        } else if let Some((bound, why)) = check.undetermined {
            r.undetermined(bound, why, check.checked)
        } else {
            r.pass(check.checked)
        }
    }

    /// Records the outcome of a tri-state decision; `expect` is the answer that counts as a pass.
    pub fn from_tristate(
        claim: impl Into<String>,
        anchor: impl Into<String>,
        got: TriState,
        expect: bool,
        witness: Option<String>,
        checked: usize,
    ) -> Self {
        let r = Record::new(claim, anchor);
        match got {
            TriState::Undetermined { bound } => {
                r.undetermined(bound, witness.unwrap_or_else(|| "search bound exhausted".into()), checked)
            }
            t if t.is_true() == expect => {
                let mut r = r.pass(checked);
                if let Some(w) = witness {
                    r.witness = Some(w);
                }
                r
            }
            _ => r.fail(witness.unwrap_or_else(|| format!("observed {got}")), checked),
        }
    }

    pub fn detail(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates instance counts and the first failure of a quantified check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Check {
    pub checked: usize,
    pub failure: Option<String>,
    pub undetermined: Option<(usize, String)>,
}

impl Check {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts one instance; remembers `witness()` as the first failure when `ok` is false.
    pub fn test(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
        ok
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.checked += 1;
        if self.failure.is_none() {
            self.failure = Some(witness.into());
        }
    }

    pub fn mark_undetermined(&mut self, bound: usize, why: impl Into<String>) {
        if self.undetermined.is_none() {
            self.undetermined = Some((bound, why.into()));
        }
    }

    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: Status,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: &[&[u8]]) -> Self {
        let command = command.into();
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        for chunk in inputs {
            hasher.update((chunk.len() as u64).to_le_bytes());
            hasher.update(chunk);
        }
        Report {
            command,
            inputs_digest: hex::encode(hasher.finalize()),
            status: Status::Undetermined,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
        self.status = self.overall();
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        for r in records {
            self.push(r);
        }
    }

    /// Fail if any record failed, pass if all passed, undetermined otherwise.
    pub fn overall(&self) -> Status {
        if self.records.is_empty() {
            return Status::Undetermined;
        }
        self.records
            .iter()
            .map(|r| r.status)
            .max()
            .unwrap_or(Status::Undetermined)
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undetermined => 2,
        }
    }

    pub fn find(&self, claim: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.claim == claim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Indented `key: value` tree with a fixed field order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "inputs_digest: {}", self.inputs_digest);
        let _ = writeln!(out, "status: {}", self.overall());
        let _ = writeln!(out, "records:");
        for r in &self.records {
            let _ = writeln!(out, "  - claim: {}", r.claim);
            let _ = writeln!(out, "    anchor: {}", r.anchor);
            let _ = writeln!(out, "    status: {}", r.status);
            let _ = writeln!(out, "    checked: {}", r.checked);
            if let Some(b) = r.bound {
                let _ = writeln!(out, "    bound: {b}");
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
            if !r.details.is_empty() {
                let _ = writeln!(out, "    details:");
                for (k, v) in &r.details {
                    let _ = writeln!(out, "      {k}: {v}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_checked_is_never_a_pass() {
        let r = Record::from_check("c", "a", Check::new());
        assert_eq!(r.status, Status::Undetermined);
        assert_eq!(r.bound, Some(0));
    }

    #[test]
    fn overall_status_and_exit_codes() {
        let mut rep = Report::new("x", &[b"abc"]);
        assert_eq!(rep.exit_code(), 2);
        rep.push(Record::new("a", "").pass(3));
        assert_eq!(rep.exit_code(), 0);
        rep.push(Record::new("b", "").undetermined(5, "bound", 1));
        assert_eq!(rep.exit_code(), 2);
        rep.push(Record::new("c", "").fail("w", 1));
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn digest_changes_with_input() {
        let a = Report::new("x", &[b"abc"]);
        let b = Report::new("x", &[b"abd"]);
        let c = Report::new("x", &[b"abc"]);
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest, c.inputs_digest);
    }

    #[test]
    fn text_rendering_is_stable() {
        let mut rep = Report::new("x", &[]);
        rep.push(Record::new("claim", "anchor").pass(2).detail("k", 1));
        let t = rep.to_text();
        assert!(t.contains("  - claim: claim\n    anchor: anchor\n    status: pass\n    checked: 2\n"));
        assert!(t.contains("      k: 1"));
        assert_eq!(t, rep.to_text());
    }
}
