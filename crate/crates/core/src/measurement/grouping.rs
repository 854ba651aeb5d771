//! Qubit-wise grouping of Pauli strings into global measurement bases.
//!
//! A global basis is a letter in {X, Y, Z} per qubit. It covers a string
//! when every position of the string is I or the basis letter, so all
//! covered strings are estimated from the same count table. Grouping is
//! greedy over strings ordered by descending total |coefficient|: an
//! uncovered string opens a new basis equal to itself with I completed
//! to Z.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// A set of global bases plus the string -> basis assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub num_qubits: usize,
    pub bases: Vec<String>,
    /// String label -> index into `bases`.
    pub assignments: BTreeMap<String, usize>,
}

impl MeasurementPlan {
    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn basis_of(&self, label: &str) -> Result<&str> {
        self.assignments
            .get(label)
            .map(|&i| self.bases[i].as_str())
            .ok_or_else(|| Error::UncoveredString(label.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<MeasurementPlan> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// True when `string` can be read off from a count table taken in `basis`.
pub fn covers(basis: &str, string: &str) -> bool {
    basis.len() == string.len()
        && basis
            .chars()
            .zip(string.chars())
            .all(|(b, s)| s == 'I' || s == b)
}

/// Groups strings into global bases.
///
/// Duplicate labels are merged with their |coefficient| summed; the greedy
/// order is descending weight with lexicographic labels breaking ties, so
/// the plan is deterministic for any input order.
pub fn group_bases(strings: &[PauliString]) -> Result<MeasurementPlan> {
    if strings.is_empty() {
        return Err(Error::InvalidParameter("no strings to group".into()));
    }
    let n = strings[0].num_qubits();
    let mut weight: BTreeMap<String, f64> = BTreeMap::new();
    for s in strings {
        if s.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: s.num_qubits() });
        }
        if s.is_identity() {
            // The identity needs no measurement; its expectation is 1.
            continue;
        }
        *weight.entry(s.label()).or_insert(0.0) += s.coefficient.abs();
    }
    if weight.is_empty() {
        return Err(Error::InvalidParameter("only identity strings given".into()));
    }

    // Descending weight, then descending label, so letter-rich strings open
    // bases before the sparser strings they cover ("XI" before "IZ").
    let mut ordered: Vec<(&String, &f64)> = weight.iter().collect();
    ordered.sort_by(|a, b| b.1.partial_cmp(a.1).unwrap().then_with(|| b.0.cmp(a.0)));

    let mut bases: Vec<String> = Vec::new();
    let mut assignments = BTreeMap::new();
    for (label, _) in ordered {
        let found = bases.iter().position(|b| covers(b, label));
        let index = found.unwrap_or_else(|| {
            bases.push(label.replace('I', "Z"));
            bases.len() - 1
        });
        assignments.insert(label.clone(), index);
    }
    Ok(MeasurementPlan { num_qubits: n, bases, assignments })
}

/// Positions a string actually measures, as a basis-index bit mask.
pub(crate) fn parity_mask(num_qubits: usize, label: &str) -> usize {
    let mut mask = 0usize;
    for (q, ch) in label.chars().enumerate() {
        if ch != 'I' {
            mask |= 1 << (num_qubits - 1 - q);
        }
    }
    mask
}
