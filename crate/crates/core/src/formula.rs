//! Occurrence-indexed CNF formulas.
//!
//! A [`Formula`] owns a slab of clauses addressed by stable [`ClauseId`]
//! handles together with a per-literal occurrence index. Every mutation goes
//! through a small set of primitives (`add_clause`, `remove_clause`,
//! `remove_lit`, `flip`, `fresh_variable`) which keep the index exact and,
//! while a checkpoint is open, journal an undo entry so that trial rewrites
//! can be rolled back cheaply.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A propositional variable. Ids start at 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal, packed as `var << 1 | negative`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        debug_assert!(var.0 > 0, "variable ids start at 1");
        Lit((var.0 << 1) | (!positive as u32))
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Builds a literal from a non-zero DIMACS integer.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(Var(value.unsigned_abs()), value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var().0)
        } else {
            write!(f, "¬x{}", self.var().0)
        }
    }
}

/// Stable handle of a clause inside one [`Formula`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClauseId(pub u32);

impl ClauseId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type LitVec = SmallVec<[Lit; 4]>;

/// A disjunction of literals, kept sorted by literal code.
///
/// Repeated literals are representable (raw DIMACS input may contain them);
/// standardization removes them.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: LitVec,
}

impl Clause {
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Clause {
        let mut lits: LitVec = lits.into_iter().collect();
        lits.sort_unstable();
        Clause { lits }
    }

    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause::new(values.iter().map(|&v| Lit::from_dimacs(v)))
    }

    #[inline]
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.contains(var.pos()) || self.contains(var.neg())
    }

    pub fn has_duplicates(&self) -> bool {
        self.lits.windows(2).any(|w| w[0] == w[1])
    }

    /// True when the clause holds both `x` and `¬x` for some variable.
    pub fn is_tautology(&self) -> bool {
        // x and ¬x are adjacent codes, so they are adjacent after sorting
        // unless a duplicate sits between them.
        let mut prev: Option<Lit> = None;
        for &l in &self.lits {
            if let Some(p) = prev {
                if p.var() == l.var() && p != l {
                    return true;
                }
            }
            prev = Some(l);
        }
        false
    }

    pub fn is_all_negative(&self) -> bool {
        self.lits.iter().all(|l| l.is_negative())
    }

    pub fn is_all_positive(&self) -> bool {
        self.lits.iter().all(|l| l.is_positive())
    }

    pub fn has_positive(&self) -> bool {
        self.lits.iter().any(|l| l.is_positive())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// Sorted-merge subset test (multiset semantics are irrelevant after
    /// deduplication, so duplicates are skipped).
    pub fn is_subset_of(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            // Could still be a subset when `self` has duplicates; handle the
            // general case below.
            if !self.has_duplicates() {
                return false;
            }
        }
        let mut j = 0;
        let b = other.lits();
        for (i, &l) in self.lits.iter().enumerate() {
            if i > 0 && self.lits[i - 1] == l {
                continue;
            }
            while j < b.len() && b[j] < l {
                j += 1;
            }
            if j == b.len() || b[j] != l {
                return false;
            }
        }
        true
    }

    /// Literals shared with `other` (sorted, duplicate-free).
    /// Number of distinct literals shared with `other`.
    pub fn common_len(&self, other: &Clause) -> usize {
        let (a, b) = (self.lits(), other.lits());
        let (mut i, mut j, mut n) = (0, 0, 0);
        let mut last = None;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if last != Some(a[i]) {
                        n += 1;
                        last = Some(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn intersection(&self, other: &Clause) -> LitVec {
        let (a, b) = (self.lits(), other.lits());
        let (mut i, mut j) = (0, 0);
        let mut out = LitVec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if out.last() != Some(&a[i]) {
                        out.push(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Removes repeated literals in place.
    pub fn dedup(&mut self) {
        self.lits.dedup();
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| model.get(l.var().index()).copied().unwrap_or(false) == l.is_positive())
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:?}", l)?;
        }
        write!(f, ")")
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        Clause::new(iter)
    }
}

/// `maximal(C, V)`: the literals of `clause` whose variable lies outside `vars`.
pub fn maximal_subclause(clause: &Clause, vars: &[Var]) -> Clause {
    Clause::new(
        clause
            .lits()
            .iter()
            .copied()
            .filter(|l| !vars.contains(&l.var())),
    )
}

/// Raw occurrence counts of a variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct OccurrenceProfile {
    pub pos: usize,
    pub neg: usize,
}

impl OccurrenceProfile {
    #[inline]
    pub fn degree(self) -> usize {
        self.pos + self.neg
    }

    /// The `(i, j)` shape with `i >= j`.
    pub fn normalized(self) -> (usize, usize) {
        (self.pos.max(self.neg), self.pos.min(self.neg))
    }
}

#[derive(Clone, Debug)]
enum Undo {
    Added(ClauseId),
    Removed(ClauseId, Clause),
    LitRemoved(ClauseId, Lit),
    Fresh(u32),
    Flipped(Var),
}

/// Position in the undo journal returned by [`Formula::checkpoint`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[must_use]
pub struct Checkpoint(usize);

/// An occurrence-indexed CNF formula.
#[derive(Clone, Default)]
pub struct Formula {
    clauses: Vec<Option<Clause>>,
    /// Clause ids per literal code, sorted, one entry per occurrence.
    occ: Vec<Vec<ClauseId>>,
    num_clauses: usize,
    num_vars: usize,
    num_empty: usize,
    next_fresh: u32,
    undo: Vec<Undo>,
    open_checkpoints: usize,
}

impl Formula {
    pub fn new() -> Formula {
        Formula {
            next_fresh: 1,
            ..Default::default()
        }
    }

    /// Builds a formula from DIMACS-style integer clauses.
    pub fn from_dimacs(clauses: &[Vec<i32>]) -> Formula {
        let mut f = Formula::new();
        for c in clauses {
            f.add_clause(Clause::from_dimacs(c));
        }
        f
    }

    pub fn from_clauses<I: IntoIterator<Item = Clause>>(clauses: I) -> Formula {
        let mut f = Formula::new();
        for c in clauses {
            f.add_clause(c);
        }
        f
    }

    /// Makes sure `var` is addressable and that fresh ids stay above it.
    pub fn reserve_var(&mut self, var: Var) {
        let need = (var.index() + 1) * 2;
        if self.occ.len() < need {
            self.occ.resize_with(need, Vec::new);
        }
        if var.0 >= self.next_fresh {
            let old = self.next_fresh;
            self.next_fresh = var.0 + 1;
            if self.open_checkpoints > 0 {
                self.undo.push(Undo::Fresh(old));
            }
        }
    }

    /// Exclusive upper bound on variable ids ever used in this formula.
    #[inline]
    pub fn var_bound(&self) -> u32 {
        self.next_fresh
    }

    /// A variable id never used before; fresh ids are strictly increasing.
    pub fn fresh_variable(&mut self) -> Var {
        let v = Var(self.next_fresh);
        self.reserve_var(v);
        v
    }

    pub fn add_clause(&mut self, clause: Clause) -> ClauseId {
        // Sorted by code, so the last literal has the largest variable.
        if let Some(&top) = clause.lits().last() {
            self.reserve_var(top.var());
        }
        let id = ClauseId(self.clauses.len() as u32);
        for &l in clause.lits() {
            self.attach(l, id);
        }
        if clause.is_empty() {
            self.num_empty += 1;
        }
        self.num_clauses += 1;
        self.clauses.push(Some(clause));
        if self.open_checkpoints > 0 {
            self.undo.push(Undo::Added(id));
        }
        id
    }

    pub fn add_lits<I: IntoIterator<Item = Lit>>(&mut self, lits: I) -> ClauseId {
        self.add_clause(Clause::new(lits))
    }

    /// Removes a live clause and returns its contents.
    pub fn remove_clause(&mut self, id: ClauseId) -> Clause {
        let clause = self.clauses[id.index()]
            .take()
            .expect("remove_clause on a dead clause");
        for &l in clause.lits() {
            self.detach(l, id);
        }
        if clause.is_empty() {
            self.num_empty -= 1;
        }
        self.num_clauses -= 1;
        if self.open_checkpoints > 0 {
            self.undo.push(Undo::Removed(id, clause.clone()));
        }
        clause
    }

    /// Deletes one occurrence of `lit` from clause `id`.
    pub fn remove_lit(&mut self, id: ClauseId, lit: Lit) {
        let clause = self.clauses[id.index()]
            .as_mut()
            .expect("remove_lit on a dead clause");
        let pos = clause
            .lits
            .iter()
            .position(|&l| l == lit)
            .expect("remove_lit: literal not in clause");
        clause.lits.remove(pos);
        if clause.lits.is_empty() {
            self.num_empty += 1;
        }
        self.detach(lit, id);
        if self.open_checkpoints > 0 {
            self.undo.push(Undo::LitRemoved(id, lit));
        }
    }

    /// Negates every occurrence of `var` (the `i >= j` polarity convention).
    /// A no-op when `var` does not occur.
    pub fn flip(&mut self, var: Var) {
        if !self.contains_var(var) {
            return;
        }
        let p = var.pos().code();
        let n = var.neg().code();
        let ids: Vec<ClauseId> = self.occ[p].iter().chain(self.occ[n].iter()).copied().collect();
        let mut seen: Vec<ClauseId> = Vec::with_capacity(ids.len());
        for id in ids {
            if seen.contains(&id) {
                continue;
            }
            seen.push(id);
            let c = self.clauses[id.index()].as_mut().expect("flip: dead clause in index");
            for l in c.lits.iter_mut() {
                if l.var() == var {
                    *l = !*l;
                }
            }
            c.lits.sort_unstable();
        }
        self.occ.swap(p, n);
        if self.open_checkpoints > 0 {
            self.undo.push(Undo::Flipped(var));
        }
    }

    fn attach(&mut self, lit: Lit, id: ClauseId) {
        let var = lit.var();
        if self.degree(var) == 0 {
            self.num_vars += 1;
        }
        let list = &mut self.occ[lit.code()];
        let pos = list.partition_point(|&c| c < id);
        list.insert(pos, id);
    }

    fn detach(&mut self, lit: Lit, id: ClauseId) {
        let list = &mut self.occ[lit.code()];
        let pos = list
            .binary_search(&id)
            .expect("occurrence index out of sync");
        list.remove(pos);
        if self.degree(lit.var()) == 0 {
            self.num_vars -= 1;
        }
    }

    // ----- queries -------------------------------------------------------

    #[inline]
    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.get(id.index()).and_then(|c| c.as_ref())
    }

    /// Live clauses in ascending id order.
    pub fn clauses(&self) -> impl Iterator<Item = (ClauseId, &Clause)> + '_ {
        self.clauses
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (ClauseId(i as u32), c)))
    }

    pub fn clause_ids(&self) -> Vec<ClauseId> {
        self.clauses().map(|(id, _)| id).collect()
    }

    /// Exclusive upper bound on clause ids handed out so far.
    pub fn clause_id_bound(&self) -> u32 {
        self.clauses.len() as u32
    }

    #[inline]
    pub fn occurrences(&self, lit: Lit) -> &[ClauseId] {
        self.occ.get(lit.code()).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn profile(&self, var: Var) -> OccurrenceProfile {
        OccurrenceProfile {
            pos: self.occurrences(var.pos()).len(),
            neg: self.occurrences(var.neg()).len(),
        }
    }

    #[inline]
    pub fn degree(&self, var: Var) -> usize {
        self.occurrences(var.pos()).len() + self.occurrences(var.neg()).len()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.degree(var) > 0
    }

    /// Variables of degree at least one, ascending.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (1..self.next_fresh)
            .map(Var)
            .filter(move |&v| self.degree(v) > 0)
    }

    /// `|Vars(F)|`.
    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.num_clauses == 0
    }

    #[inline]
    pub fn has_empty_clause(&self) -> bool {
        self.num_empty > 0
    }

    pub fn max_degree(&self) -> usize {
        self.vars().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn num_literals(&self) -> usize {
        self.clauses().map(|(_, c)| c.len()).sum()
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses()
            .all(|(_, c)| c.is_all_positive() || c.is_all_negative())
    }

    /// Ids of clauses with no positive literal (including the empty clause).
    pub fn all_negative_clauses(&self) -> Vec<ClauseId> {
        self.clauses()
            .filter(|(_, c)| c.is_all_negative())
            .map(|(id, _)| id)
            .collect()
    }

    /// `N(l)`: variables sharing a clause with the literal `lit`.
    pub fn neighbors(&self, lit: Lit) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for &id in self.occurrences(lit) {
            if let Some(c) = self.clause(id) {
                out.extend(c.vars().filter(|&v| v != lit.var()));
            }
        }
        out
    }

    /// Variables sharing a clause with either literal of `var`.
    pub fn var_neighbors(&self, var: Var) -> BTreeSet<Var> {
        let mut out = self.neighbors(var.pos());
        out.extend(self.neighbors(var.neg()));
        out
    }

    /// `F_contain V`: ids of the clauses holding a variable of `vars`, ascending.
    pub fn clauses_containing(&self, vars: &[Var]) -> Vec<ClauseId> {
        let mut ids: Vec<ClauseId> = vars
            .iter()
            .flat_map(|&v| {
                self.occurrences(v.pos())
                    .iter()
                    .chain(self.occurrences(v.neg()))
                    .copied()
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Ids of the clauses holding `var` in either polarity, ascending.
    pub fn clauses_of(&self, var: Var) -> Vec<ClauseId> {
        self.clauses_containing(&[var])
    }

    /// Evaluates the formula under a total assignment indexed by variable id.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses().all(|(_, c)| c.is_satisfied_by(model))
    }

    pub fn to_dimacs_clauses(&self) -> Vec<Vec<i32>> {
        self.clauses().map(|(_, c)| c.to_dimacs()).collect()
    }

    /// Clause contents as a sorted list, for order-insensitive comparison.
    pub fn canonical_clauses(&self) -> Vec<Vec<i32>> {
        let mut out: Vec<Vec<i32>> = self.to_dimacs_clauses();
        for c in out.iter_mut() {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    // ----- mutation on top of primitives ---------------------------------

    /// `F[l]`: removes every clause containing `lit` and every occurrence of
    /// `¬lit`.
    pub fn assign(&mut self, lit: Lit) -> Result<()> {
        if !self.contains_var(lit.var()) {
            return Err(Error::Contract(format!(
                "assign: variable {} does not occur in the formula",
                lit.var()
            )));
        }
        self.assign_unchecked(lit);
        Ok(())
    }

    /// Like [`Formula::assign`] but a no-op for absent variables.
    pub fn assign_unchecked(&mut self, lit: Lit) {
        while let Some(&id) = self.occurrences(lit).first() {
            self.remove_clause(id);
        }
        while let Some(&id) = self.occurrences(!lit).first() {
            self.remove_lit(id, !lit);
        }
    }

    /// Replaces the literals of a clause (new content, same handle).
    pub fn replace_clause(&mut self, id: ClauseId, clause: Clause) -> ClauseId {
        self.remove_clause(id);
        self.add_clause(clause)
    }

    // ----- journaling ----------------------------------------------------

    /// Opens a checkpoint; mutations are journaled until it is rolled back or
    /// released.
    pub fn checkpoint(&mut self) -> Checkpoint {
        self.open_checkpoints += 1;
        Checkpoint(self.undo.len())
    }

    /// Undoes every mutation since `cp` and closes it.
    pub fn rollback(&mut self, cp: Checkpoint) {
        assert!(self.open_checkpoints > 0, "rollback without checkpoint");
        while self.undo.len() > cp.0 {
            let op = self.undo.pop().expect("journal underflow");
            match op {
                Undo::Added(id) => {
                    let c = self.clauses[id.index()]
                        .take()
                        .expect("undo Added: clause already dead");
                    for &l in c.lits() {
                        self.detach(l, id);
                    }
                    if c.is_empty() {
                        self.num_empty -= 1;
                    }
                    self.num_clauses -= 1;
                    debug_assert_eq!(id.index() + 1, self.clauses.len());
                    self.clauses.pop();
                }
                Undo::Removed(id, c) => {
                    for &l in c.lits() {
                        self.attach(l, id);
                    }
                    if c.is_empty() {
                        self.num_empty += 1;
                    }
                    self.num_clauses += 1;
                    self.clauses[id.index()] = Some(c);
                }
                Undo::LitRemoved(id, lit) => {
                    let c = self.clauses[id.index()]
                        .as_mut()
                        .expect("undo LitRemoved: clause dead");
                    if c.lits.is_empty() {
                        self.num_empty -= 1;
                    }
                    let pos = c.lits.partition_point(|&l| l < lit);
                    c.lits.insert(pos, lit);
                    self.attach(lit, id);
                }
                Undo::Fresh(old) => {
                    self.next_fresh = old;
                }
                Undo::Flipped(var) => {
                    // Flip is an involution; replay it without journaling.
                    let open = self.open_checkpoints;
                    self.open_checkpoints = 0;
                    self.flip(var);
                    self.open_checkpoints = open;
                }
            }
        }
        self.open_checkpoints -= 1;
        if self.open_checkpoints == 0 {
            self.undo.clear();
        }
    }

    /// Closes `cp` keeping every mutation made since.
    pub fn release(&mut self, cp: Checkpoint) {
        assert!(self.open_checkpoints > 0, "release without checkpoint");
        debug_assert!(cp.0 <= self.undo.len());
        self.open_checkpoints -= 1;
        if self.open_checkpoints == 0 {
            self.undo.clear();
        }
    }

    // ----- audit ---------------------------------------------------------

    /// True iff the occurrence index and counters match the clause set.
    pub fn audit(&self) -> bool {
        let mut expected: Vec<Vec<ClauseId>> = vec![Vec::new(); self.occ.len()];
        let mut clauses = 0;
        let mut empty = 0;
        for (id, c) in self.clauses() {
            clauses += 1;
            if c.is_empty() {
                empty += 1;
            }
            if c.lits().windows(2).any(|w| w[0] > w[1]) {
                return false;
            }
            for &l in c.lits() {
                if l.code() >= expected.len() || l.var().0 >= self.next_fresh {
                    return false;
                }
                expected[l.code()].push(id);
            }
        }
        if expected != self.occ {
            return false;
        }
        let vars = (1..self.next_fresh)
            .filter(|&v| self.degree(Var(v)) > 0)
            .count();
        clauses == self.num_clauses && empty == self.num_empty && vars == self.num_vars
    }

    /// Test hook: desynchronizes the occurrence index.
    #[doc(hidden)]
    pub fn corrupt_index_for_test(&mut self) {
        if let Some(list) = self.occ.iter_mut().find(|l| !l.is_empty()) {
            list.pop();
        } else {
            self.occ.resize_with(4, Vec::new);
            self.occ[2].push(ClauseId(u32::MAX));
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.clauses().map(|(_, c)| c)).finish()
    }
}
