//! Local reduction rules. Each rule fires at most once per call, strictly
//! lowers the number of variables and keeps the formula equisatisfiable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Clause, ClauseId, Formula, Lit, Var};
use crate::reconstruct::{Journal, ReconstructionRecord};
use crate::resolution::{renormalize_since, resolve_variable, split_common};
use crate::standardize::standardize_from;

/// Identifies a reduction rule in traces and statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    /// Standardization.
    S3,
    /// Pure variable set true.
    S4a,
    /// Variable with one positive and one negative occurrence resolved away.
    S4b,
    S5a,
    S5b,
    S5c,
    S5d,
    S6a,
    S6b,
    S6c,
    /// Safe resolution of a variable subset.
    S6d,
    /// Variables outside every all-negative clause set true.
    S8,
    /// Degree reduction of a general CNF input.
    Transform,
}

impl RuleId {
    pub const ALL: [RuleId; 13] = [
        RuleId::S3,
        RuleId::S4a,
        RuleId::S4b,
        RuleId::S5a,
        RuleId::S5b,
        RuleId::S5c,
        RuleId::S5d,
        RuleId::S6a,
        RuleId::S6b,
        RuleId::S6c,
        RuleId::S6d,
        RuleId::S8,
        RuleId::Transform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::S3 => "S3",
            RuleId::S4a => "S4a",
            RuleId::S4b => "S4b",
            RuleId::S5a => "S5a",
            RuleId::S5b => "S5b",
            RuleId::S5c => "S5c",
            RuleId::S5d => "S5d",
            RuleId::S6a => "S6a",
            RuleId::S6b => "S6b",
            RuleId::S6c => "S6c",
            RuleId::S6d => "S6d",
            RuleId::S8 => "S8",
            RuleId::Transform => "transform",
        }
    }

    /// Position in [`RuleId::ALL`], for counters.
    pub fn index(self) -> usize {
        RuleId::ALL.iter().position(|&r| r == self).expect("listed")
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fired rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule: RuleId,
    pub vars_eliminated: usize,
}

fn outcome(f: &Formula, rule: RuleId, before: usize) -> RuleOutcome {
    RuleOutcome {
        rule,
        vars_eliminated: before.saturating_sub(f.num_vars()),
    }
}

/// Flips every variable with more negative than positive occurrences.
/// Returns the number of flips.
pub fn normalize_polarity(f: &mut Formula, journal: &mut Journal) -> usize {
    let flips: Vec<Var> = f
        .vars()
        .filter(|&v| {
            let p = f.profile(v);
            p.neg > p.pos
        })
        .collect();
    for &v in &flips {
        f.flip(v);
        journal.push(ReconstructionRecord::Flipped(v));
    }
    flips.len()
}

/// Sets one pure variable to its occurring polarity, or else resolves away
/// one variable with exactly one occurrence of each sign.
pub fn eliminate_low_degree(f: &mut Formula, journal: &mut Journal) -> Option<RuleOutcome> {
    let before = f.num_vars();
    let mut mixed = None;
    let mut pure = None;
    for v in f.vars() {
        let p = f.profile(v);
        if p.neg == 0 || p.pos == 0 {
            pure = Some(if p.neg == 0 { v.pos() } else { v.neg() });
            break;
        }
        if mixed.is_none() && p.pos == 1 && p.neg == 1 {
            mixed = Some(v);
        }
    }
    if let Some(lit) = pure {
        journal.push(ReconstructionRecord::Assigned(lit));
        f.assign_unchecked(lit);
        return Some(outcome(f, RuleId::S4a, before));
    }
    let v = mixed?;
    let since = f.clause_id_bound();
    resolve_variable(f, journal, v);
    standardize_new(f, journal, since);
    Some(outcome(f, RuleId::S4b, before))
}

fn standardize_new(f: &mut Formula, journal: &mut Journal, since: u32) {
    let seeds: Vec<ClauseId> = (since..f.clause_id_bound())
        .map(ClauseId)
        .filter(|&id| f.clause(id).is_some())
        .collect();
    standardize_from(f, journal, seeds);
}

fn is_21(f: &Formula, v: Var) -> bool {
    let p = f.profile(v);
    p.pos == 2 && p.neg == 1
}

/// Whether a clause created at or after `since` holds a variable of degree
/// above three.
fn degree_exceeded_since(f: &Formula, since: u32) -> bool {
    (since..f.clause_id_bound())
        .filter_map(|id| f.clause(ClauseId(id)))
        .any(|c| c.vars().any(|v| f.degree(v) > 3))
}

/// Runs `rewrite` under a checkpoint; keeps the result only when the
/// variable count dropped and the degree bound survives (after
/// renormalizing if needed).
fn attempt<F>(f: &mut Formula, journal: &mut Journal, rule: RuleId, rewrite: F) -> Option<RuleOutcome>
where
    F: FnOnce(&mut Formula, &mut Journal) -> bool,
{
    let before = f.num_vars();
    let mark = journal.len();
    let since = f.clause_id_bound();
    let cp = f.checkpoint();
    let ok = rewrite(f, journal) && {
        if !f.has_empty_clause() && degree_exceeded_since(f, since) {
            renormalize_since(f, journal, since);
        }
        f.has_empty_clause() || f.num_vars() < before
    };
    if ok {
        f.release(cp);
        Some(outcome(f, rule, before))
    } else {
        f.rollback(cp);
        journal.truncate(mark);
        None
    }
}

/// Resolves `vars` in order, standardizes, and, when exactly two of the new
/// clauses contain all of `common`, splits it out with a fresh variable.
fn resolve_then_split(f: &mut Formula, journal: &mut Journal, vars: &[Var], common: &[Lit]) {
    let since = f.clause_id_bound();
    for &v in vars {
        if f.contains_var(v) {
            resolve_variable(f, journal, v);
        }
    }
    standardize_new(f, journal, since);
    if common.is_empty() || f.has_empty_clause() {
        return;
    }
    let holders: Vec<ClauseId> = (since..f.clause_id_bound())
        .map(ClauseId)
        .filter(|&id| {
            f.clause(id)
                .is_some_and(|c| common.iter().all(|&l| c.contains(l)))
        })
        .collect();
    if let [a, b] = holders[..] {
        let (_, ids) = split_common(f, journal, a, b, common);
        standardize_from(f, journal, ids.into_iter().filter(|&id| f.clause(id).is_some()).collect::<Vec<_>>());
    }
}

fn rest(c: &Clause, drop: &[Var]) -> Vec<Lit> {
    c.lits().iter().copied().filter(|l| !drop.contains(&l.var())).collect()
}

fn union(parts: &[&[Lit]]) -> Vec<Lit> {
    let mut out: Vec<Lit> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Two variables that share at least two clauses, smallest pair first.
fn find_shared_pair(f: &Formula) -> Option<(Var, Var, Vec<ClauseId>)> {
    for x in f.vars() {
        let ids = f.clauses_of(x);
        let mut partners: Vec<Var> = ids
            .iter()
            .flat_map(|&id| f.clause(id).expect("live").vars().filter(move |&v| v != x))
            .filter(|&v| v > x)
            .collect();
        partners.sort_unstable();
        for w in partners.windows(2) {
            if w[0] == w[1] {
                let y = w[0];
                let shared: Vec<ClauseId> = ids
                    .iter()
                    .copied()
                    .filter(|&id| f.clause(id).expect("live").contains_var(y))
                    .collect();
                return Some((x, y, shared));
            }
        }
    }
    None
}

/// Handles two variables that occur together in two clauses.
pub fn shared_pair_reduction(f: &mut Formula, journal: &mut Journal) -> Option<RuleOutcome> {
    let (x, y, shared) = find_shared_pair(f)?;
    if !is_21(f, x) || !is_21(f, y) {
        return None;
    }
    if shared.len() >= 3 {
        // Every occurrence of x sits next to y: resolving x alone already
        // removes a variable.
        return attempt(f, journal, RuleId::S5c, |f, j| {
            resolve_then_split(f, j, &[x], &[]);
            true
        });
    }
    let sign = |id: ClauseId, v: Var| f.clause(id).expect("live").contains(v.pos());
    let (a, b) = (shared[0], shared[1]);
    let pattern = [(sign(a, x), sign(a, y)), (sign(b, x), sign(b, y))];
    let other = |v: Var, lit: Lit| -> Clause {
        let id = f
            .occurrences(lit)
            .iter()
            .copied()
            .find(|id| !shared.contains(id))
            .expect("third occurrence");
        debug_assert!(lit.var() == v);
        f.clause(id).expect("live").clone()
    };
    let both = [x, y];
    match pattern {
        [(true, true), (true, true)] => {
            // (x∨y∨α),(x∨y∨β),(¬x∨γ),(¬y∨δ) → (z∨α),(z∨β),(¬z∨γ∨δ)
            let gamma = rest(&other(x, x.neg()), &both);
            let delta = rest(&other(y, y.neg()), &both);
            let common = union(&[&gamma, &delta]);
            attempt(f, journal, RuleId::S5a, |f, j| {
                resolve_then_split(f, j, &[x, y], &common);
                true
            })
        }
        [(true, true), (true, false)] | [(true, false), (true, true)] => {
            // (x∨y∨α),(x∨¬y∨β),(¬x∨γ),(y∨δ) → (α∨z),(δ∨z),(¬z∨β∨γ)
            let beta_clause = if pattern[0] == (true, false) { a } else { b };
            let beta = rest(f.clause(beta_clause).expect("live"), &both);
            let gamma = rest(&other(x, x.neg()), &both);
            let common = union(&[&beta, &gamma]);
            attempt(f, journal, RuleId::S5b, |f, j| {
                resolve_then_split(f, j, &[x, y], &common);
                true
            })
        }
        [(true, true), (false, true)] | [(false, true), (true, true)] => {
            // Same as above with the roles of x and y exchanged.
            let beta_clause = if pattern[0] == (false, true) { a } else { b };
            let beta = rest(f.clause(beta_clause).expect("live"), &both);
            let gamma = rest(&other(y, y.neg()), &both);
            let common = union(&[&beta, &gamma]);
            attempt(f, journal, RuleId::S5b, |f, j| {
                resolve_then_split(f, j, &[y, x], &common);
                true
            })
        }
        [(true, true), (false, false)] | [(false, false), (true, true)] => {
            // (x∨y∨α),(¬x∨¬y∨β),(x∨γ),(y∨δ) → (γ∨β∨δ)
            attempt(f, journal, RuleId::S5c, |f, j| {
                resolve_then_split(f, j, &[x, y], &[]);
                true
            })
        }
        [(false, true), (true, false)] | [(true, false), (false, true)] => {
            // (¬x∨y∨α),(x∨¬y∨β),(x∨γ),(y∨δ): x = y = 1 satisfies all four.
            attempt(f, journal, RuleId::S5d, |f, j| {
                for v in both {
                    j.push(ReconstructionRecord::Assigned(v.pos()));
                    f.assign_unchecked(v.pos());
                }
                true
            })
        }
        _ => None,
    }
}

/// The two clauses holding `x` positively.
fn positive_pair(f: &Formula, x: Var) -> Option<[ClauseId; 2]> {
    match f.occurrences(x.pos()) {
        [a, b] => Some([*a, *b]),
        _ => None,
    }
}

fn try_6a(f: &mut Formula, journal: &mut Journal, x: Var, y: Var) -> Option<RuleOutcome> {
    // (¬x∨¬y∨α),(x∨u∨β),(y∨¬u∨γ),(u∨δ): resolve u, drop (x∨y∨β∨γ).
    for p in positive_pair(f, x)? {
        let pc = f.clause(p).expect("live").clone();
        for &u in pc.lits() {
            if u.var() == x || u.var() == y || !is_21(f, u.var()) || !u.is_positive() {
                continue;
            }
            let Some(&q) = f.occurrences(!u).first() else { continue };
            if !f.clause(q).expect("live").contains(y.pos()) {
                continue;
            }
            let fired = attempt(f, journal, RuleId::S6a, |f, j| {
                let since = f.clause_id_bound();
                resolve_variable(f, j, u.var());
                let redundant = (since..f.clause_id_bound()).map(ClauseId).find(|&id| {
                    f.clause(id)
                        .is_some_and(|c| c.contains(x.pos()) && c.contains(y.pos()))
                });
                if let Some(id) = redundant {
                    let clause = f.remove_clause(id);
                    j.push(ReconstructionRecord::Redundant { clause, witness: x.pos() });
                }
                standardize_new(f, j, since);
                true
            });
            if fired.is_some() {
                return fired;
            }
        }
    }
    None
}

fn try_6b(f: &mut Formula, journal: &mut Journal, neg: &Clause, x: Var, y: Var) -> Option<RuleOutcome> {
    // (¬x∨¬y∨γ),(x∨u),(y∨u),(x∨α),(y∨β)
    let px = positive_pair(f, x)?;
    let py = positive_pair(f, y)?;
    for (i, &cx) in px.iter().enumerate() {
        let c = f.clause(cx).expect("live");
        if c.len() != 2 {
            continue;
        }
        let u = rest(c, &[x])[0];
        for &cy in &py {
            let d = f.clause(cy).expect("live");
            if d.len() == 2 && d.contains(u) && px[1 - i] != cy {
                let gamma = rest(neg, &[x, y]);
                let fired = attempt(f, journal, RuleId::S6b, |f, j| {
                    resolve_then_split(f, j, &[x, y], &gamma);
                    true
                });
                if fired.is_some() {
                    return fired;
                }
            }
        }
    }
    None
}

fn try_6c(f: &mut Formula, journal: &mut Journal, x: Var, y: Var) -> Option<RuleOutcome> {
    // (¬x∨¬y),(x∨u),(y∨u∨β),(x∨α),(y∨γ)
    let px = positive_pair(f, x)?;
    let py = positive_pair(f, y)?;
    for (i, &cx) in px.iter().enumerate() {
        let c = f.clause(cx).expect("live");
        if c.len() != 2 {
            continue;
        }
        let u = rest(c, &[x])[0];
        for (k, &cy) in py.iter().enumerate() {
            if !f.clause(cy).expect("live").contains(u) || px[1 - i] == cy {
                continue;
            }
            let gamma = rest(f.clause(py[1 - k]).expect("live"), &[y]);
            let fired = attempt(f, journal, RuleId::S6c, |f, j| {
                resolve_then_split(f, j, &[x, y], &gamma);
                true
            });
            if fired.is_some() {
                return fired;
            }
        }
    }
    None
}

/// Rewrites around all-negative clauses; the first match in ascending
/// clause order fires.
pub fn neg_clause_reductions(f: &mut Formula, journal: &mut Journal) -> Option<RuleOutcome> {
    for id in f.all_negative_clauses() {
        let Some(neg) = f.clause(id).cloned() else { continue };
        let vars: Vec<Var> = neg.vars().collect();
        for &x in &vars {
            for &y in &vars {
                if x == y || !is_21(f, x) || !is_21(f, y) {
                    continue;
                }
                if let Some(o) = try_6a(f, journal, x, y) {
                    return Some(o);
                }
                if x < y {
                    if let Some(o) = try_6b(f, journal, &neg, x, y) {
                        return Some(o);
                    }
                }
                if neg.len() == 2 {
                    if let Some(o) = try_6c(f, journal, x, y) {
                        return Some(o);
                    }
                }
            }
        }
    }
    None
}

/// The variables that occur in no all-negative clause.
pub fn outside_negative_clauses(f: &Formula) -> Vec<Var> {
    let mut inside = vec![false; f.var_bound() as usize];
    for (_, c) in f.clauses() {
        if c.is_all_negative() {
            for v in c.vars() {
                inside[v.index()] = true;
            }
        }
    }
    f.vars().filter(|v| !inside[v.index()]).collect()
}

/// True when every clause holding a negative literal over `set` also holds
/// a positive literal over `set`.
pub fn is_autarkic(f: &Formula, set: &[Var]) -> bool {
    let mut member = vec![false; f.var_bound() as usize];
    for v in set {
        member[v.index()] = true;
    }
    f.clauses().all(|(_, c)| {
        let touches_neg = c.lits().iter().any(|l| l.is_negative() && member[l.var().index()]);
        !touches_neg || c.lits().iter().any(|l| l.is_positive() && member[l.var().index()])
    })
}

/// Sets every variable outside the all-negative clauses to 1.
///
/// Fails without touching the formula when that set is not autarkic, which
/// means the formula lacks the structure earlier steps should have built.
pub fn autarky_reduce(f: &mut Formula, journal: &mut Journal) -> Result<Option<RuleOutcome>> {
    let s = outside_negative_clauses(f);
    if s.is_empty() {
        return Ok(None);
    }
    if !is_autarkic(f, &s) {
        return Err(Error::Invariant(
            "variables outside all-negative clauses do not form an autarky".into(),
        ));
    }
    let before = f.num_vars();
    for v in s {
        if f.contains_var(v) {
            journal.push(ReconstructionRecord::Assigned(v.pos()));
            f.assign_unchecked(v.pos());
        }
    }
    Ok(Some(outcome(f, RuleId::S8, before)))
}
