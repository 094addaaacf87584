//! Variable elimination by resolution and the renormalization that brings
//! occurrence counts back down to three afterwards.

use crate::formula::{Clause, ClauseId, Formula, Lit, LitVec, Var};
use crate::reconstruct::{Journal, ReconstructionRecord};
use crate::standardize::standardize_from;

/// The resolvent of `a` and `b` on `var`, or `None` when it is trivial.
pub fn resolvent(a: &Clause, b: &Clause, var: Var) -> Option<Clause> {
    let mut lits: LitVec = a
        .lits()
        .iter()
        .chain(b.lits())
        .copied()
        .filter(|l| l.var() != var)
        .collect();
    lits.sort_unstable();
    lits.dedup();
    let c = Clause::new(lits);
    (!c.is_tautology()).then_some(c)
}

/// Replaces every clause holding `var` by the nontrivial resolvents on
/// `var`. Returns the ids of the added clauses.
pub fn resolve_variable(f: &mut Formula, journal: &mut Journal, var: Var) -> Vec<ClauseId> {
    let pos: Vec<ClauseId> = f.occurrences(var.pos()).to_vec();
    let neg: Vec<ClauseId> = f.occurrences(var.neg()).to_vec();
    let mut removed = Vec::with_capacity(pos.len() + neg.len());
    let mut ids = pos.clone();
    ids.extend(neg.iter().filter(|id| !pos.contains(id)));
    let pos_clauses: Vec<Clause> = pos.iter().map(|&id| f.clause(id).expect("live").clone()).collect();
    let neg_clauses: Vec<Clause> = neg.iter().map(|&id| f.clause(id).expect("live").clone()).collect();
    for id in ids {
        removed.push(f.remove_clause(id));
    }
    journal.push(ReconstructionRecord::Resolved { var, clauses: removed });
    let mut added = Vec::new();
    for a in &pos_clauses {
        if a.contains(var.neg()) {
            continue;
        }
        for b in &neg_clauses {
            if b.contains(var.pos()) {
                continue;
            }
            if let Some(r) = resolvent(a, b, var) {
                added.push(f.add_clause(r));
            }
        }
    }
    added
}

/// Splits the shared part `common` out of clauses `a` and `b`:
/// `(C∨α),(C∨β)` becomes `(C∨¬i),(α∨i),(β∨i)` for a fresh `i`.
/// Returns the fresh variable and the ids of the three new clauses.
pub fn split_common(
    f: &mut Formula,
    journal: &mut Journal,
    a: ClauseId,
    b: ClauseId,
    common: &[Lit],
) -> (Var, [ClauseId; 3]) {
    let ca = f.remove_clause(a);
    let cb = f.remove_clause(b);
    let i = f.fresh_variable();
    let rest = |c: &Clause| -> Clause {
        Clause::new(c.lits().iter().copied().filter(|l| !common.contains(l)).chain([i.pos()]))
    };
    let shared = Clause::new(common.iter().copied().chain([i.neg()]));
    let (ra, rb) = (rest(&ca), rest(&cb));
    let ids = [
        f.add_clause(shared.clone()),
        f.add_clause(ra.clone()),
        f.add_clause(rb.clone()),
    ];
    journal.push(ReconstructionRecord::Introduced {
        var: i,
        defining: vec![shared, ra, rb],
    });
    (i, ids)
}

/// Largest literal set shared by two distinct live clauses, where at least
/// one of them is in `scope`.
fn largest_common_subclause(f: &Formula, scope: &[ClauseId]) -> Option<(ClauseId, ClauseId, LitVec)> {
    let mut best: Option<(usize, ClauseId, ClauseId)> = None;
    for &id in scope {
        let Some(c) = f.clause(id) else { continue };
        for &l in c.lits() {
            for &other in f.occurrences(l) {
                if other == id {
                    continue;
                }
                let common = c.common_len(f.clause(other).expect("live"));
                let (lo, hi) = if id < other { (id, other) } else { (other, id) };
                let better = match best {
                    None => true,
                    Some((bn, bl, bh)) => common > bn || (common == bn && (lo, hi) < (bl, bh)),
                };
                if better {
                    best = Some((common, lo, hi));
                }
            }
        }
    }
    best.map(|(_, a, b)| {
        let common = f.clause(a).expect("live").intersection(f.clause(b).expect("live"));
        (a, b, common)
    })
}

/// Restores the three-occurrence shape after resolution.
///
/// Repeats: standardize; split the largest subclause (of length at least
/// two) that two clauses share; otherwise split two occurrences of the
/// highest-degree variable while it has degree four or more. Only clauses
/// with id at least `since` (those created by the caller) are examined, so
/// the formula outside them must already be in shape. Returns the fresh
/// variables introduced.
pub fn renormalize_since(f: &mut Formula, journal: &mut Journal, since: u32) -> Vec<Var> {
    let mut fresh = Vec::new();
    let mut seeds: Vec<ClauseId> = (since..f.clause_id_bound()).map(ClauseId).collect();
    loop {
        standardize_from(f, journal, seeds.iter().copied().filter(|&id| f.clause(id).is_some()).collect::<Vec<_>>());
        if f.has_empty_clause() {
            return fresh;
        }
        let scope: Vec<ClauseId> = (since..f.clause_id_bound())
            .map(ClauseId)
            .filter(|&id| f.clause(id).is_some())
            .collect();
        if let Some((a, b, common)) = largest_common_subclause(f, &scope) {
            if common.len() >= 2 {
                let (i, ids) = split_common(f, journal, a, b, &common);
                fresh.push(i);
                seeds = ids.to_vec();
                continue;
            }
        }
        let mut top: Option<(usize, Var)> = None;
        for &id in &scope {
            for v in f.clause(id).expect("live").vars() {
                let d = f.degree(v);
                if d >= 4 && top.is_none_or(|(bd, bv)| d > bd || (d == bd && v < bv)) {
                    top = Some((d, v));
                }
            }
        }
        let Some((_, x)) = top else { return fresh };
        let p = f.profile(x);
        let lit = if p.pos >= p.neg { x.pos() } else { x.neg() };
        let occ = f.occurrences(lit);
        let (a, b) = (occ[0], occ[1]);
        let (i, ids) = split_common(f, journal, a, b, &[lit]);
        fresh.push(i);
        seeds = ids.to_vec();
    }
}

/// [`renormalize_since`] over the whole formula.
pub fn renormalize(f: &mut Formula, journal: &mut Journal) -> Vec<Var> {
    renormalize_since(f, journal, 0)
}

/// Why a safe resolution was abandoned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Blowup;

/// Resolves every variable of `vars` (lowest current degree first, ties by
/// id) and renormalizes. With `clause_limit`, gives up as soon as the
/// formula holds more clauses than that; the formula is then left
/// mid-rewrite and the caller must roll back.
pub fn safe_resolve_limited(
    f: &mut Formula,
    journal: &mut Journal,
    vars: &[Var],
    clause_limit: Option<usize>,
) -> Result<Vec<Var>, Blowup> {
    let since = f.clause_id_bound();
    let mut left: Vec<Var> = vars.to_vec();
    while !left.is_empty() {
        let (k, _) = left
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| (f.degree(v), v))
            .expect("nonempty");
        let v = left.swap_remove(k);
        if !f.contains_var(v) {
            continue;
        }
        resolve_variable(f, journal, v);
        if f.has_empty_clause() {
            return Ok(Vec::new());
        }
        if clause_limit.is_some_and(|limit| f.num_clauses() > limit) {
            return Err(Blowup);
        }
    }
    Ok(renormalize_since(f, journal, since))
}

/// Safe resolution of `vars`: resolve them all, then renormalize.
pub fn safe_resolve(f: &mut Formula, journal: &mut Journal, vars: &[Var]) -> Vec<Var> {
    let mut fresh = safe_resolve_limited(f, journal, vars, None).expect("no limit");
    fresh.extend(renormalize(f, journal));
    fresh
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_satisfiable;
    use crate::reconstruct::extend_model;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_dimacs(&cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn single_resolvent() {
        // v=1 a=2 b=3
        let mut g = f(&[&[1, 2], &[-1, 3]]);
        let mut j = Journal::new();
        resolve_variable(&mut g, &mut j, Var(1));
        assert_eq!(g.canonical_clauses(), vec![vec![2, 3]]);
        assert_eq!(j.len(), 1);
    }

    #[test]
    fn trivial_resolvent_dropped() {
        let mut g = f(&[&[1, 2], &[-1, -2]]);
        let mut j = Journal::new();
        resolve_variable(&mut g, &mut j, Var(1));
        assert!(g.is_empty());
    }

    #[test]
    fn shared_subclause_split() {
        // a=1 b=2 p=3 q=4 → (a∨b∨¬i),(p∨i),(q∨i) with i=5
        let mut g = f(&[&[1, 2, 3], &[1, 2, 4]]);
        let mut j = Journal::new();
        let fresh = renormalize(&mut g, &mut j);
        assert_eq!(fresh, vec![Var(5)]);
        assert_eq!(g.canonical_clauses(), vec![vec![-5, 1, 2], vec![3, 5], vec![4, 5]]);
    }

    #[test]
    fn already_in_shape_is_unchanged() {
        let mut g = f(&[&[1, 2, 3], &[-1, 4], &[-2, -4], &[3, 4]]);
        let before = g.canonical_clauses();
        let mut j = Journal::new();
        assert!(renormalize(&mut g, &mut j).is_empty());
        assert_eq!(g.canonical_clauses(), before);
    }

    #[test]
    fn high_degree_is_split() {
        // x=1 occurs 5 times.
        let mut g = f(&[&[1, 2], &[1, 3], &[1, 4], &[1, 5], &[-1, 6]]);
        let mut j = Journal::new();
        renormalize(&mut g, &mut j);
        assert!(g.max_degree() <= 3);
        assert!(g.audit());
    }

    #[test]
    fn empty_set_only_standardizes() {
        let mut g = f(&[&[1, 2], &[1, 2, 3], &[-1, 4]]);
        let mut j = Journal::new();
        safe_resolve(&mut g, &mut j, &[]);
        assert_eq!(g.canonical_clauses(), vec![vec![-1, 4], vec![1, 2]]);
    }

    #[test]
    fn resolution_preserves_satisfiability_and_models() {
        use crate::gen::{random_3occur, Profile};
        for seed in 0..200 {
            let original = random_3occur(12, &Profile::default(), seed).unwrap();
            let mut g = original.clone();
            let mut j = Journal::new();
            let vars: Vec<Var> = g.vars().take(4).collect();
            safe_resolve(&mut g, &mut j, &vars);
            assert!(g.max_degree() <= 3 || g.has_empty_clause());
            let before = is_satisfiable(&original).unwrap();
            assert_eq!(before, is_satisfiable(&g).unwrap(), "seed {seed}");
            if let Some(m) = crate::oracle::brute_force_sat(&g).unwrap() {
                let m = extend_model(j.records(), m).unwrap();
                assert!(original.is_satisfied_by(&m), "seed {seed}");
            }
        }
    }
}
