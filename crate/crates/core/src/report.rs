//! Verdict records returned by the checkers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    /// Process exit code used by the command-line checks.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

/// A sampled point and the margin by which the checked inequality holds there
/// (negative = violated).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    /// Approximate points where A(t) vanishes (or where the checked quantity is tight).
    pub zero_set: Vec<f64>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            tolerances: BTreeMap::new(),
            zero_set: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn tol(mut self, name: &str, v: f64) -> Self {
        self.tolerances.insert(name.to_string(), v);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Witness with the smallest margin.
    pub fn worst(&self) -> Option<Witness> {
        self.witnesses
            .iter()
            .copied()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    /// Downgrade the verdict: Fails beats Inconclusive beats Holds.
    pub fn merge_verdict(&mut self, v: Verdict) {
        self.verdict = match (self.verdict, v) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Holds,
        };
    }
}
