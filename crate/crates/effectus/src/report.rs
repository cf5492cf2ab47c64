//! Violation reporting shared by every checker in the crate.
//!
//! Checkers never fail fast: they scan the whole structure and return every
//! violation found, each tagged with a stable law identifier so reports can
//! be consumed mechanically.

use serde::Serialize;

/// One broken law, with the witnesses that break it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Stable identifier of the law, e.g. `"pcm/commutativity"`.
    pub law: String,
    /// Offending elements or morphisms, rendered with the carrier's labels.
    pub witnesses: Vec<String>,
    /// What failed, in one sentence.
    pub detail: String,
}

impl Violation {
    pub fn new(
        law: impl Into<String>,
        witnesses: Vec<String>,
        detail: impl Into<String>,
    ) -> Self {
        Violation {
            law: law.into(),
            witnesses,
            detail: detail.into(),
        }
    }
}

/// Outcome of a checker run over one named subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub violations: Vec<Violation>,
    /// Sub-checks refused because a homset exceeded the enumeration cap.
    /// A skip is not a pass: callers that need full coverage must shrink
    /// their sample until this list is empty.
    pub skipped: Vec<String>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>, violations: Vec<Violation>) -> Self {
        CheckReport {
            subject: subject.into(),
            violations,
            skipped: Vec::new(),
        }
    }

    pub fn skip(&mut self, what: impl Into<String>) {
        self.skipped.push(what.into());
    }

    /// Folds another report's findings into this one, keeping this subject.
    pub fn absorb(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.skipped.extend(other.skipped);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Passed with nothing skipped: every scheduled sub-check actually ran.
    pub fn complete(&self) -> bool {
        self.passed() && self.skipped.is_empty()
    }
}
