//! Search for variable subsets whose safe resolution shrinks the formula.
//!
//! Candidates are connected sets in the variable incidence graph that
//! contain every variable of some all-negative clause. They are enumerated
//! depth first, each exactly once per seed, while the set of distinct
//! nonempty maximal subclauses is kept up to date incrementally through
//! XOR hashes of literals. Only candidates that pass a cheap filter on that
//! count are tried for real, and the trial (apply, count, roll back) is the
//! authority on acceptance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use smallvec::SmallVec;

use crate::formula::{maximal_subclause, Clause, ClauseId, Formula, Lit, Var};
use crate::reconstruct::Journal;
use crate::resolution::safe_resolve_limited;
use crate::rules::{RuleId, RuleOutcome};

/// Tuning knobs for [`SubsetSearch`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetConfig {
    /// Largest subset considered.
    pub max_subset: usize,
    /// Candidates enumerated per call before giving up.
    pub budget: usize,
}

impl Default for SubsetConfig {
    fn default() -> Self {
        SubsetConfig {
            max_subset: 10,
            budget: 10_000,
        }
    }
}

/// A variable set together with the distinct nonempty maximal subclauses
/// of the clauses it touches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCandidate {
    pub vars: Vec<Var>,
    pub maximal_nonempty: Vec<Clause>,
}

impl SubsetCandidate {
    pub fn of(f: &Formula, vars: &[Var]) -> SubsetCandidate {
        let mut out: Vec<Clause> = f
            .clauses_containing(vars)
            .into_iter()
            .map(|id| maximal_subclause(f.clause(id).expect("live"), vars))
            .filter(|c| !c.is_empty())
            .collect();
        out.sort_by(|a, b| a.lits().cmp(b.lits()));
        out.dedup();
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        SubsetCandidate { vars, maximal_nonempty: out }
    }

    /// The sufficient condition for a guaranteed decrease: more than three
    /// variables but at most three distinct nonempty maximal subclauses.
    pub fn guarantees_decrease(&self) -> bool {
        self.vars.len() > 3 && self.maximal_nonempty.len() <= 3
    }
}

/// Whether a candidate with `vars` variables and `maximal` distinct
/// nonempty maximal subclauses is worth a trial application.
pub fn worth_trying(vars: usize, maximal: usize) -> bool {
    maximal <= vars + FILTER_SLACK
}

const FILTER_SLACK: usize = 1;

/// Counters describing the work done by one or more searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: u64,
    pub trials: u64,
    pub memo_hits: u64,
    pub accepted: u64,
    pub exhausted: u64,
}

/// Reusable state for the search: literal hashes, a memo of rejected
/// candidate fingerprints, and scratch buffers.
pub struct SubsetSearch {
    pub config: SubsetConfig,
    pub stats: SearchStats,
    lit_hash: Vec<u64>,
    rng: ChaCha8Rng,
    rejected: FxHashSet<u64>,
    index: Index,
    scratch: Scratch,
}

const MEMO_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy)]
struct Occ {
    clause: u32,
    hash: u64,
    len: u8,
}

/// Snapshot of the formula's incidence structure, rebuilt per search.
#[derive(Default)]
struct Index {
    occ: Vec<SmallVec<[Occ; 3]>>,
    adj: Vec<SmallVec<[Var; 8]>>,
    full_hash: Vec<u64>,
}

#[derive(Default)]
struct Scratch {
    in_set: Vec<bool>,
    excluded: Vec<bool>,
    in_cand: Vec<bool>,
    clause_count: Vec<u8>,
    rest_hash: Vec<u64>,
    touched_clauses: Vec<u32>,
    maximal: Vec<(u64, u32)>,
    contain: usize,
    clause_print: u64,
    var_print: u64,
    members: Vec<Var>,
    arena: Vec<Var>,
}

enum Step {
    Continue,
    Found(Vec<Var>, RuleOutcome),
    OutOfBudget,
}

fn mix(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^ (x >> 33)
}

impl SubsetSearch {
    pub fn new(config: SubsetConfig) -> SubsetSearch {
        SubsetSearch {
            config,
            stats: SearchStats::default(),
            lit_hash: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(0x6d_6178_696d_616c),
            rejected: FxHashSet::default(),
            index: Index::default(),
            scratch: Scratch::default(),
        }
    }

    fn build_index(&mut self, f: &Formula) {
        let vars = f.var_bound() as usize + 1;
        while self.lit_hash.len() < 2 * vars {
            let h = self.rng.gen::<u64>() | 1;
            self.lit_hash.push(h);
        }
        let clauses = f.clause_id_bound() as usize;
        let ix = &mut self.index;
        ix.occ.clear();
        ix.occ.resize(vars, SmallVec::new());
        ix.adj.clear();
        ix.adj.resize(vars, SmallVec::new());
        ix.full_hash.clear();
        ix.full_hash.resize(clauses, 0);
        for (id, c) in f.clauses() {
            let mut full = 0;
            for &l in c.lits() {
                let h = self.lit_hash[l.code()];
                full ^= h;
                ix.occ[l.var().index()].push(Occ {
                    clause: id.0,
                    hash: h,
                    len: c.len().min(u8::MAX as usize) as u8,
                });
            }
            ix.full_hash[id.index()] = full;
            for &a in c.lits() {
                for &b in c.lits() {
                    if a.var() != b.var() {
                        ix.adj[a.var().index()].push(b.var());
                    }
                }
            }
        }
        for list in ix.adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let s = &mut self.scratch;
        if s.in_set.len() < vars {
            s.in_set.resize(vars, false);
            s.excluded.resize(vars, false);
            s.in_cand.resize(vars, false);
        }
        if s.clause_count.len() < clauses {
            s.clause_count.resize(clauses, 0);
            s.rest_hash.resize(clauses, 0);
        }
    }

    fn add_maximal(&mut self, h: u64) {
        let m = &mut self.scratch.maximal;
        if let Some(e) = m.iter_mut().find(|e| e.0 == h) {
            e.1 += 1;
        } else {
            m.push((h, 1));
        }
    }

    fn remove_maximal(&mut self, h: u64) {
        let m = &mut self.scratch.maximal;
        let k = m.iter().position(|e| e.0 == h).expect("tracked subclause");
        m[k].1 -= 1;
        if m[k].1 == 0 {
            m.swap_remove(k);
        }
    }

    fn push_var(&mut self, v: Var) {
        self.scratch.in_set[v.index()] = true;
        self.scratch.members.push(v);
        self.scratch.var_print ^= mix(self.lit_hash[v.pos().code()]);
        for j in 0..self.index.occ[v.index()].len() {
            let o = self.index.occ[v.index()][j];
            let k = o.clause as usize;
            let count = self.scratch.clause_count[k];
            if count == 0 {
                let full = self.index.full_hash[k];
                self.scratch.rest_hash[k] = full;
                self.scratch.clause_print ^= mix(full);
                self.scratch.contain += 1;
                self.scratch.touched_clauses.push(o.clause);
            } else if count < o.len {
                let old = self.scratch.rest_hash[k];
                self.remove_maximal(old);
            }
            self.scratch.rest_hash[k] ^= o.hash;
            self.scratch.clause_count[k] = count + 1;
            if count + 1 < o.len {
                let new = self.scratch.rest_hash[k];
                self.add_maximal(new);
            }
        }
    }

    fn pop_var(&mut self, v: Var) {
        let last = self.scratch.members.pop();
        debug_assert_eq!(last, Some(v));
        self.scratch.in_set[v.index()] = false;
        self.scratch.var_print ^= mix(self.lit_hash[v.pos().code()]);
        for j in 0..self.index.occ[v.index()].len() {
            let o = self.index.occ[v.index()][j];
            let k = o.clause as usize;
            let count = self.scratch.clause_count[k];
            if count < o.len {
                let old = self.scratch.rest_hash[k];
                self.remove_maximal(old);
            }
            self.scratch.rest_hash[k] ^= o.hash;
            self.scratch.clause_count[k] = count - 1;
            if count == 1 {
                self.scratch.clause_print ^= mix(self.scratch.rest_hash[k]);
                self.scratch.contain -= 1;
            } else {
                let new = self.scratch.rest_hash[k];
                self.add_maximal(new);
            }
        }
    }

    /// Occurrences of `v` in clauses already touched by the current set.
    fn contained_occurrences(&self, v: Var) -> usize {
        self.index.occ[v.index()]
            .iter()
            .filter(|o| self.scratch.clause_count[o.clause as usize] > 0)
            .count()
    }

    fn reset(&mut self) {
        let s = &mut self.scratch;
        for k in s.touched_clauses.drain(..) {
            s.clause_count[k as usize] = 0;
            s.rest_hash[k as usize] = 0;
        }
        s.maximal.clear();
        s.contain = 0;
        s.clause_print = 0;
        s.var_print = 0;
        for v in s.members.drain(..) {
            s.in_set[v.index()] = false;
        }
        s.arena.clear();
    }

    /// Finds and applies a subset whose safe resolution lowers the number of
    /// variables.
    pub fn run(&mut self, f: &mut Formula, journal: &mut Journal) -> Option<(Vec<Var>, RuleOutcome)> {
        if self.rejected.len() > MEMO_LIMIT {
            self.rejected.clear();
        }
        let mut seeds: Vec<(usize, ClauseId)> = f
            .all_negative_clauses()
            .into_iter()
            .map(|id| (f.clause(id).expect("live").len(), id))
            .filter(|&(len, _)| len > 0 && len <= self.config.max_subset)
            .collect();
        if seeds.is_empty() {
            return None;
        }
        seeds.sort_unstable();
        self.build_index(f);
        let mut budget = self.config.budget;
        let mut tried_seed_sets: Vec<Vec<Var>> = Vec::new();
        for (_, id) in seeds {
            let mut seed: Vec<Var> = f.clause(id).expect("live").vars().collect();
            seed.sort_unstable();
            seed.dedup();
            if tried_seed_sets.contains(&seed) {
                continue;
            }
            tried_seed_sets.push(seed.clone());
            for &v in &seed {
                self.push_var(v);
            }
            for &v in &seed {
                for j in 0..self.index.adj[v.index()].len() {
                    let u = self.index.adj[v.index()][j];
                    if !self.scratch.in_set[u.index()] && !self.scratch.in_cand[u.index()] {
                        self.scratch.in_cand[u.index()] = true;
                        self.scratch.arena.push(u);
                    }
                }
            }
            let end = self.scratch.arena.len();
            for k in 0..end {
                let u = self.scratch.arena[k];
                self.scratch.in_cand[u.index()] = false;
            }
            self.scratch.arena.sort_unstable();
            let step = self.extend(f, journal, 0, end, &mut budget);
            self.reset();
            match step {
                Step::Found(vars, outcome) => {
                    self.stats.accepted += 1;
                    return Some((vars, outcome));
                }
                Step::OutOfBudget => {
                    self.stats.exhausted += 1;
                    return None;
                }
                Step::Continue => {}
            }
        }
        None
    }

    /// Visits the current set, then every connected superset reachable by
    /// adding candidates from `arena[lo..hi]` and their neighbors.
    fn extend(&mut self, f: &mut Formula, journal: &mut Journal, lo: usize, hi: usize, budget: &mut usize) -> Step {
        if *budget == 0 {
            return Step::OutOfBudget;
        }
        *budget -= 1;
        self.stats.candidates += 1;
        let size = self.scratch.members.len();
        let maximal = self.scratch.maximal.len();
        if worth_trying(size, maximal) {
            if let Some(found) = self.trial(f, journal) {
                return Step::Found(found.0, found.1);
            }
        }
        let room = self.config.max_subset.saturating_sub(size);
        if room == 0 {
            return Step::Continue;
        }
        let mut excluded_here: Vec<Var> = Vec::new();
        let mut result = Step::Continue;
        for i in lo..hi {
            let w = self.scratch.arena[i];
            // Adding a variable removes at most one distinct subclause per
            // touched clause holding it, and each later addition at most
            // three, so some supersets can be ruled out unseen.
            let floor = maximal.saturating_sub(self.contained_occurrences(w) + 3 * (room - 1));
            if floor > self.config.max_subset.min(size + room) + FILTER_SLACK {
                self.scratch.excluded[w.index()] = true;
                excluded_here.push(w);
                continue;
            }
            let start = self.scratch.arena.len();
            for k in i + 1..hi {
                let u = self.scratch.arena[k];
                self.scratch.in_cand[u.index()] = true;
                self.scratch.arena.push(u);
            }
            for j in 0..self.index.adj[w.index()].len() {
                let u = self.index.adj[w.index()][j];
                let k = u.index();
                if !self.scratch.in_set[k] && !self.scratch.excluded[k] && !self.scratch.in_cand[k] && u != w {
                    self.scratch.in_cand[k] = true;
                    self.scratch.arena.push(u);
                }
            }
            let end = self.scratch.arena.len();
            for k in start..end {
                let u = self.scratch.arena[k];
                self.scratch.in_cand[u.index()] = false;
            }
            self.push_var(w);
            let step = self.extend(f, journal, start, end, budget);
            self.pop_var(w);
            self.scratch.arena.truncate(start);
            match step {
                Step::Continue => {}
                other => {
                    result = other;
                    break;
                }
            }
            self.scratch.excluded[w.index()] = true;
            excluded_here.push(w);
        }
        for w in excluded_here {
            self.scratch.excluded[w.index()] = false;
        }
        result
    }

    fn trial(&mut self, f: &mut Formula, journal: &mut Journal) -> Option<(Vec<Var>, RuleOutcome)> {
        let print = mix(self.scratch.clause_print ^ mix(self.scratch.var_print));
        if self.rejected.contains(&print) {
            self.stats.memo_hits += 1;
            return None;
        }
        self.stats.trials += 1;
        let vars = self.scratch.members.clone();
        let contain = self.scratch.contain;
        let limit = f.num_clauses() + 3 * contain;
        let before = f.num_vars();
        let mark = journal.len();
        let cp = f.checkpoint();
        let ok = match safe_resolve_limited(f, journal, &vars, Some(limit)) {
            Ok(_) => f.num_vars() < before || f.has_empty_clause(),
            Err(_) => false,
        };
        if ok {
            f.release(cp);
            let mut vars = vars;
            vars.sort_unstable();
            Some((
                vars,
                RuleOutcome {
                    rule: RuleId::S6d,
                    vars_eliminated: before.saturating_sub(f.num_vars()),
                },
            ))
        } else {
            f.rollback(cp);
            journal.truncate(mark);
            self.rejected.insert(print);
            None
        }
    }
}

/// Convenience wrapper running one search with fresh state.
pub fn step6d_search(f: &mut Formula, journal: &mut Journal, config: SubsetConfig) -> Option<(Vec<Var>, RuleOutcome)> {
    SubsetSearch::new(config).run(f, journal)
}

/// Literal of `var` inside `clause`, if any.
pub fn literal_of(clause: &Clause, var: Var) -> Option<Lit> {
    clause.lits().iter().copied().find(|l| l.var() == var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_3occur, Profile};
    use crate::oracle::{brute_force_sat, is_satisfiable};
    use crate::reconstruct::extend_model;
    use crate::resolution::safe_resolve;

    // x=1 y=2 a=3 b=4 c=5 d=6, C1=(¬7∨¬8), C2=(9∨10), C3=(11∨12)
    fn figure() -> Formula {
        Formula::from_dimacs(&[
            vec![-1, -2, -7, -8],
            vec![1, 3],
            vec![1, 4],
            vec![2, 5],
            vec![2, 6],
            vec![3, 4],
            vec![5, 6],
            vec![-3, -5],
            vec![-4, 9, 10],
            vec![-6, 11, 12],
        ])
    }

    fn figure_vars() -> Vec<Var> {
        (1..=6).map(Var).collect()
    }

    #[test]
    fn figure_candidate_has_three_maximal_subclauses() {
        let c = SubsetCandidate::of(&figure(), &figure_vars());
        assert_eq!(c.maximal_nonempty.len(), 3);
        assert!(c.guarantees_decrease());
    }

    #[test]
    fn figure_safe_resolution_drops_three_variables() {
        let mut f = figure();
        let mut j = Journal::new();
        let fresh = safe_resolve(&mut f, &mut j, &figure_vars());
        assert_eq!(fresh.len(), 3);
        assert_eq!(f.num_vars(), 9);
        assert_eq!(f.num_clauses(), 6);
        assert!(f.max_degree() <= 3);
    }

    #[test]
    fn search_reduces_figure() {
        let original = figure();
        let mut f = original.clone();
        let mut j = Journal::new();
        let (_, outcome) = step6d_search(&mut f, &mut j, SubsetConfig::default()).expect("a subset");
        assert_eq!(outcome.rule, RuleId::S6d);
        assert!(outcome.vars_eliminated >= 1);
        assert_eq!(f.num_vars() + outcome.vars_eliminated, original.num_vars());
        let m = brute_force_sat(&f).unwrap().unwrap();
        assert!(original.is_satisfied_by(&extend_model(j.records(), m).unwrap()));
    }

    #[test]
    fn nothing_to_do_without_negative_clauses() {
        let mut f = Formula::from_dimacs(&[vec![1, 2], vec![2, 3]]);
        let mut j = Journal::new();
        assert!(step6d_search(&mut f, &mut j, SubsetConfig::default()).is_none());
    }

    #[test]
    fn incremental_count_matches_direct() {
        for seed in 0..40 {
            let f = random_3occur(14, &Profile::default(), seed).unwrap();
            let mut s = SubsetSearch::new(SubsetConfig::default());
            s.build_index(&f);
            let vars: Vec<Var> = f.vars().collect();
            for (k, &v) in vars.iter().enumerate().take(8) {
                s.push_var(v);
                let direct = SubsetCandidate::of(&f, &vars[..=k]);
                assert_eq!(s.scratch.maximal.len(), direct.maximal_nonempty.len(), "seed {seed}");
                assert_eq!(s.scratch.contain, f.clauses_containing(&vars[..=k]).len());
            }
            for &v in vars.iter().take(8).rev() {
                s.pop_var(v);
            }
            assert!(s.scratch.maximal.is_empty());
            assert_eq!((s.scratch.contain, s.scratch.clause_print, s.scratch.var_print), (0, 0, 0));
        }
    }

    #[test]
    fn accepted_subsets_preserve_satisfiability() {
        let mut fired = 0;
        for seed in 0..150 {
            let original = random_3occur(14, &Profile::default(), seed).unwrap();
            let mut f = original.clone();
            let mut j = Journal::new();
            if step6d_search(&mut f, &mut j, SubsetConfig::default()).is_none() {
                continue;
            }
            fired += 1;
            assert!(f.num_vars() < original.num_vars());
            assert_eq!(is_satisfiable(&original).unwrap(), is_satisfiable(&f).unwrap(), "seed {seed}");
            if let Some(m) = brute_force_sat(&f).unwrap() {
                assert!(original.is_satisfied_by(&extend_model(j.records(), m).unwrap()));
            }
        }
        assert!(fired > 0);
    }
}
