//! Standardization: subsumption, trivial-clause removal, literal
//! deduplication and unit propagation, applied to a fixpoint.
//!
//! The worklist only revisits clauses that were created or shortened, so
//! callers that know which clauses a rewrite touched can standardize
//! incrementally with [`standardize_from`].

use std::collections::VecDeque;

use crate::formula::{Clause, ClauseId, Formula, Lit};
use crate::reconstruct::{Journal, ReconstructionRecord};

/// What a standardization pass did.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StandardizeSummary {
    pub units: usize,
    pub tautologies: usize,
    pub deduplicated: usize,
    pub subsumed: usize,
}

impl StandardizeSummary {
    pub fn changed(&self) -> bool {
        self.units + self.tautologies + self.deduplicated + self.subsumed > 0
    }
}

/// Standardizes the whole formula.
pub fn standardize(f: &mut Formula, journal: &mut Journal) -> StandardizeSummary {
    let seeds = f.clause_ids();
    standardize_from(f, journal, seeds)
}

/// Standardizes starting from `seeds`, the clauses that may violate the
/// standard form. Clauses outside the seeds are assumed standard among
/// themselves.
pub fn standardize_from<I>(f: &mut Formula, journal: &mut Journal, seeds: I) -> StandardizeSummary
where
    I: IntoIterator<Item = ClauseId>,
{
    let mut work = Worklist::default();
    for id in seeds {
        work.push(id);
    }
    let mut summary = StandardizeSummary::default();
    let mut units: Vec<ClauseId> = Vec::new();

    loop {
        if f.has_empty_clause() {
            break;
        }
        // Units first.
        if let Some(id) = units.pop() {
            let lit = match f.clause(id) {
                Some(c) if c.len() == 1 => c.lits()[0],
                _ => continue,
            };
            for &touched in f.occurrences(!lit) {
                work.push(touched);
            }
            journal.push(ReconstructionRecord::Assigned(lit));
            f.assign_unchecked(lit);
            summary.units += 1;
            continue;
        }
        let Some(id) = work.pop() else { break };
        let Some(c) = f.clause(id) else { continue };
        if c.is_tautology() {
            f.remove_clause(id);
            summary.tautologies += 1;
            continue;
        }
        if c.has_duplicates() {
            let dups: Vec<Lit> = c.lits().windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
            for l in dups {
                f.remove_lit(id, l);
            }
            summary.deduplicated += 1;
        }
        let c = f.clause(id).expect("clause still alive");
        match c.len() {
            0 => break,
            1 => {
                units.push(id);
                continue;
            }
            _ => {}
        }
        if is_subsumed(f, id) {
            f.remove_clause(id);
            summary.subsumed += 1;
            continue;
        }
        summary.subsumed += remove_subsumed_by(f, id);
    }
    summary
}

/// True when some other live clause is a subset of clause `id`.
pub fn is_subsumed(f: &Formula, id: ClauseId) -> bool {
    let c = f.clause(id).expect("live clause");
    for &l in c.lits() {
        for &other in f.occurrences(l) {
            if other == id {
                continue;
            }
            let d = f.clause(other).expect("index points at live clause");
            if d.len() <= c.len() && d.is_subset_of(c) {
                return true;
            }
        }
    }
    false
}

/// Removes every other clause that clause `id` subsumes; returns the count.
pub fn remove_subsumed_by(f: &mut Formula, id: ClauseId) -> usize {
    let c: Clause = f.clause(id).expect("live clause").clone();
    let Some(&rare) = c.lits().iter().min_by_key(|&&l| f.occurrences(l).len()) else {
        return 0;
    };
    // A clause with a repeated literal is listed once per copy.
    let mut victims: Vec<ClauseId> = f
        .occurrences(rare)
        .iter()
        .copied()
        .filter(|&other| other != id)
        .filter(|&other| {
            let d = f.clause(other).expect("live clause");
            d.len() >= c.len() && c.is_subset_of(d)
        })
        .collect();
    victims.dedup();
    let n = victims.len();
    for v in victims {
        f.remove_clause(v);
    }
    n
}

/// True when the formula is in standard form.
pub fn is_standardized(f: &Formula) -> bool {
    if f.has_empty_clause() {
        return true;
    }
    f.clauses().all(|(id, c)| {
        c.len() >= 2 && !c.is_tautology() && !c.has_duplicates() && !is_subsumed(f, id)
    })
}

#[derive(Default)]
struct Worklist {
    queue: VecDeque<ClauseId>,
    queued: Vec<bool>,
}

impl Worklist {
    fn push(&mut self, id: ClauseId) {
        if self.queued.len() <= id.index() {
            self.queued.resize(id.index() + 1, false);
        }
        if !self.queued[id.index()] {
            self.queued[id.index()] = true;
            self.queue.push_back(id);
        }
    }

    fn pop(&mut self) -> Option<ClauseId> {
        let id = self.queue.pop_front()?;
        self.queued[id.index()] = false;
        Some(id)
    }
}
