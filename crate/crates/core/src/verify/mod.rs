//! Numerical audits of the structural hypotheses and two independent oracles.
//!
//! Every check returns a [`CheckReport`]: one entry per condition id with a status, a witness
//! for failures and free-form notes. Exact arithmetic conditions (exponent windows) report
//! `pass`/`fail`; conditions that can only be sampled report `sampled-pass`/`fail`; conditions
//! outside numeric reach report `assumed`.
//!
//! Limits are decided by a decade-trend rule: over the last two decades of the scan the sampled
//! quantity must move monotonically toward its claimed limit by a factor of at least 2 per
//! decade. Monotonicity is tested on consecutive samples with a slack of `1e-12` times the
//! local magnitude.

mod abstract_checks;
mod catalogue;
mod hypotheses;
mod radial;
mod sampling;
mod simon;

use serde::Serialize;

pub use abstract_checks::check_abstract;
pub use catalogue::{
    anisotropic_catalogue, kirchhoff_catalogue, quasilinear_catalogue, AnisotropicCase, KirchhoffCase,
    QuasilinearCase,
};
pub use hypotheses::{check_anisotropic, check_kirchhoff, check_quasilinear, kirchhoff_upper_constant};
pub use radial::{radial_shooting, RadialProfile};
pub use simon::{simon_gap, simon_sample, SimonSample};

/// Outcome of one condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SampledPass,
    Assumed,
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SampledPass => "sampled-pass",
            Status::Assumed => "assumed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub id: String,
    pub status: Status,
    /// First violating sample, for failures.
    pub witness: Option<String>,
    pub notes: String,
}

/// Per-condition results, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    entries: Vec<Entry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a condition. A repeated id replaces the earlier entry.
    pub fn record(&mut self, id: &str, status: Status, witness: Option<String>, notes: impl Into<String>) {
        let entry = Entry {
            id: id.to_string(),
            status,
            witness,
            notes: notes.into(),
        };
        match self.entries.iter_mut().find(|e| e.id == id) {
            Some(slot) => *slot = entry,
            None => self.entries.push(entry),
        }
    }

    /// Records a sampled condition: `sampled-pass` without a witness, `fail` with one.
    pub(crate) fn sampled(&mut self, id: &str, witness: Option<String>, notes: impl Into<String>) {
        let status = if witness.is_some() { Status::Fail } else { Status::SampledPass };
        self.record(id, status, witness, notes);
    }

    /// Records an exact condition.
    pub(crate) fn exact(&mut self, id: &str, holds: bool, witness: impl FnOnce() -> String, notes: impl Into<String>) {
        let (status, witness) = if holds { (Status::Pass, None) } else { (Status::Fail, Some(witness())) };
        self.record(id, status, witness, notes);
    }

    pub fn extend(&mut self, other: CheckReport) {
        for e in other.entries {
            self.record(&e.id, e.status, e.witness, e.notes);
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn status(&self, id: &str) -> Option<Status> {
        self.get(id).map(|e| e.status)
    }

    pub fn has_failure(&self) -> bool {
        self.entries.iter().any(|e| e.status.is_fail())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status.is_fail())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<12} {:<13} {}\n", "id", "status", "detail");
        for e in &self.entries {
            let detail = match &e.witness {
                Some(w) => format!("{} [witness: {w}]", e.notes),
                None => e.notes.clone(),
            };
            out.push_str(&format!("{:<12} {:<13} {}\n", e.id, e.status.as_str(), detail));
        }
        out
    }
}
