//! Checker outcomes carrying the data that certifies them.

use std::fmt;

#[derive(Clone, Debug)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
    pub note: String,
}

impl<W> Verdict<W> {
    pub fn pass(witness: W, note: impl Into<String>) -> Self {
        Verdict { holds: true, witness: Some(witness), note: note.into() }
    }

    pub fn fail(note: impl Into<String>) -> Self {
        Verdict { holds: false, witness: None, note: note.into() }
    }

    pub fn fail_with(witness: W, note: impl Into<String>) -> Self {
        Verdict { holds: false, witness: Some(witness), note: note.into() }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict { holds: self.holds, witness: self.witness.map(f), note: self.note }
    }

    pub fn erase(self) -> Verdict<()> {
        Verdict { holds: self.holds, witness: self.witness.map(|_| ()), note: self.note }
    }
}

impl<W> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.holds { "pass" } else { "fail" };
        if self.note.is_empty() {
            write!(f, "{}", tag)
        } else {
            write!(f, "{}: {}", tag, self.note)
        }
    }
}

/// One line of a check report.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub check: String,
    pub instance: String,
    pub holds: bool,
    pub detail: String,
}

impl Record {
    pub fn new<W>(check: impl Into<String>, instance: impl Into<String>, v: &Verdict<W>) -> Self {
        Record { check: check.into(), instance: instance.into(), holds: v.holds, detail: v.note.clone() }
    }

    pub fn from_bool(check: impl Into<String>, instance: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Record { check: check.into(), instance: instance.into(), holds, detail: detail.into() }
    }

    /// `check \t instance \t pass|fail \t detail`.
    pub fn tsv(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        format!(
            "{}\t{}\t{}\t{}",
            clean(&self.check),
            clean(&self.instance),
            if self.holds { "pass" } else { "fail" },
            clean(&self.detail)
        )
    }
}
