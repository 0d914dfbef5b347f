//! Machine-readable verification reports shared by the library suites and the
//! CLI.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A documented observation rather than a defect; reserved for the
    /// contraction checks whose literal reading is ambiguous.
    Finding,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Unique name within a report.
    pub name: String,
    /// Stable tag of the identity being checked, e.g. `linear/appendix/03`.
    pub anchor: String,
    pub status: Status,
    /// Residual or context rendering for failures and findings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        anchor: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn finding(
        name: impl Into<String>,
        anchor: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Finding,
            witness: Some(witness.into()),
        }
    }

    /// Pass/fail from a boolean with a lazily rendered witness.
    pub fn verdict(
        name: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        witness: impl FnOnce() -> String,
    ) -> Self {
        if ok {
            Check::pass(name, anchor)
        } else {
            Check::fail(name, anchor, witness())
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub grid: String,
    pub seed: u64,
    pub trials: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, grid: impl Into<String>, seed: u64, trials: u32) -> Self {
        Report {
            suite: suite.into(),
            grid: grid.into(),
            seed,
            trials,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        debug_assert!(
            !self.checks.iter().any(|c| c.name == check.name),
            "duplicate check name {}",
            check.name
        );
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn fail_count(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn finding_count(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Finding)
            .count()
    }

    pub fn all_passed(&self) -> bool {
        self.fail_count() == 0
    }
}
