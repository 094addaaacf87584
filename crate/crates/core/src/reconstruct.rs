//! Model reconstruction across rewrites.
//!
//! Every rewrite that removes information appends a [`ReconstructionRecord`].
//! Replaying the journal newest-to-oldest turns a model of the final formula
//! into a model of the formula the journal started from.

use crate::error::{Error, Result};
use crate::formula::{Clause, Lit, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReconstructionRecord {
    /// The literal was set true and the formula reduced by it.
    Assigned(Lit),
    /// Every occurrence of the variable was negated.
    Flipped(Var),
    /// The variable was eliminated by resolution; `clauses` are the clauses
    /// that held it at that moment, stored verbatim.
    Resolved { var: Var, clauses: Vec<Clause> },
    /// A fresh variable was introduced; `defining` are the clauses that
    /// mention it right after the rewrite.
    Introduced { var: Var, defining: Vec<Clause> },
    /// An implied-for-satisfiability clause was dropped; if a model falsifies
    /// it, making `witness` true repairs it without breaking anything else.
    Redundant { clause: Clause, witness: Lit },
}

/// Append-only sequence of records; a record's position is its index.
#[derive(Clone, Debug, Default)]
pub struct Journal {
    records: Vec<ReconstructionRecord>,
}

impl Journal {
    pub fn new() -> Journal {
        Journal::default()
    }

    pub fn push(&mut self, record: ReconstructionRecord) {
        self.records.push(record);
    }

    pub fn extend<I: IntoIterator<Item = ReconstructionRecord>>(&mut self, records: I) {
        self.records.extend(records);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.records.truncate(len);
    }

    pub fn records(&self) -> &[ReconstructionRecord] {
        &self.records
    }
}

fn set(model: &mut Vec<bool>, var: Var, value: bool) {
    if model.len() <= var.index() {
        model.resize(var.index() + 1, false);
    }
    model[var.index()] = value;
}

fn value(model: &[bool], var: Var) -> bool {
    model.get(var.index()).copied().unwrap_or(false)
}

/// Extends `model` (indexed by variable id; absent entries read as false)
/// backwards through `journal`.
///
/// `model` must satisfy the formula the journal ends in.
pub fn extend_model(journal: &[ReconstructionRecord], mut model: Vec<bool>) -> Result<Vec<bool>> {
    for (pos, record) in journal.iter().enumerate().rev() {
        match record {
            ReconstructionRecord::Assigned(lit) => set(&mut model, lit.var(), lit.is_positive()),
            ReconstructionRecord::Flipped(var) => {
                let v = value(&model, *var);
                set(&mut model, *var, !v);
            }
            ReconstructionRecord::Resolved { var, clauses } => {
                let current = value(&model, *var);
                let mut chosen = None;
                for candidate in [current, !current] {
                    set(&mut model, *var, candidate);
                    if clauses.iter().all(|c| c.is_satisfied_by(&model)) {
                        chosen = Some(candidate);
                        break;
                    }
                }
                if chosen.is_none() {
                    return Err(Error::Invariant(format!(
                        "journal record {pos}: no value of {var} satisfies its resolved clauses"
                    )));
                }
            }
            ReconstructionRecord::Introduced { .. } => {}
            ReconstructionRecord::Redundant { clause, witness } => {
                if !clause.is_satisfied_by(&model) {
                    set(&mut model, witness.var(), witness.is_positive());
                }
            }
        }
    }
    Ok(model)
}
