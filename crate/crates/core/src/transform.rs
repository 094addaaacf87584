//! Degree reduction for general CNF.
//!
//! Variables with at most two occurrences are assigned or resolved away.
//! Every remaining variable `u` with more than three occurrences is cut
//! down by chaining: two clauses `(u∨α),(u∨β)` become `(v∨α),(v∨β),(¬v∨u)`
//! for a fresh `v`, which lowers the degree of `u` by one and leaves every
//! other degree alone. A variable of degree `d` thus ends up represented
//! by `d - 2` variables.

use crate::formula::{Clause, Formula, Var};
use crate::reconstruct::{Journal, ReconstructionRecord};
use crate::resolution::resolve_variable;

/// Degree summary of a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DegreeStats {
    pub num_vars: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    /// Sum over variables of `deg - 2` (zero for degree below two).
    pub rep_total: usize,
    pub min_degree: usize,
}

impl DegreeStats {
    pub fn of(f: &Formula) -> DegreeStats {
        let mut s = DegreeStats::default();
        let mut total = 0;
        s.min_degree = usize::MAX;
        for v in f.vars() {
            let d = f.degree(v);
            s.num_vars += 1;
            total += d;
            s.max_degree = s.max_degree.max(d);
            s.min_degree = s.min_degree.min(d);
            s.rep_total += d.saturating_sub(2);
        }
        if s.num_vars == 0 {
            s.min_degree = 0;
        } else {
            s.avg_degree = total as f64 / s.num_vars as f64;
        }
        s
    }

    /// The `(d-2)n` ceiling on the output size, for `d >= 3`.
    pub fn variable_bound(&self) -> usize {
        self.max_degree.saturating_sub(2) * self.num_vars
    }
}

/// Result of [`reduce_degree`].
#[derive(Clone, Debug)]
pub struct Transformed {
    pub formula: Formula,
    pub journal: Journal,
    /// Each chained original variable with the fresh variables that now
    /// carry some of its occurrences, oldest first.
    pub chains: Vec<(Var, Vec<Var>)>,
    pub input: DegreeStats,
    /// Degrees once every variable of degree at most two is gone; the
    /// chaining preserves `rep_total` of this profile exactly.
    pub after_elimination: DegreeStats,
    pub changed: bool,
}

/// Drops tautologies and repeated literals.
fn clean(f: &mut Formula, journal: &mut Journal) {
    for id in f.clause_ids() {
        let c = f.clause(id).expect("live");
        if c.is_tautology() {
            let removed = f.remove_clause(id);
            let witness = removed.lits()[0];
            journal.push(ReconstructionRecord::Redundant {
                clause: removed,
                witness,
            });
        } else if c.has_duplicates() {
            let mut d = c.clone();
            d.dedup();
            f.replace_clause(id, d);
        }
    }
}

/// Assigns pure variables of degree at most two and resolves `(1,1)`
/// variables until every variable has degree three or more.
fn eliminate_small(f: &mut Formula, journal: &mut Journal) {
    loop {
        let Some(v) = f.vars().find(|&v| f.degree(v) <= 2) else {
            return;
        };
        let p = f.profile(v);
        if p.pos == 0 || p.neg == 0 {
            let lit = if p.neg == 0 { v.pos() } else { v.neg() };
            journal.push(ReconstructionRecord::Assigned(lit));
            f.assign_unchecked(lit);
        } else {
            for id in resolve_variable(f, journal, v) {
                if f.clause(id).is_some_and(|c| c.has_duplicates()) {
                    let mut d = f.clause(id).expect("live").clone();
                    d.dedup();
                    f.replace_clause(id, d);
                }
            }
        }
        if f.has_empty_clause() {
            return;
        }
    }
}

/// Produces an equisatisfiable formula of maximum degree three.
///
/// A formula that already has maximum degree three is returned unchanged.
pub fn reduce_degree(input: &Formula) -> Transformed {
    let stats = DegreeStats::of(input);
    let mut f = input.clone();
    let mut journal = Journal::new();
    if stats.max_degree <= 3 {
        return Transformed {
            formula: f,
            journal,
            chains: Vec::new(),
            input: stats,
            after_elimination: stats,
            changed: false,
        };
    }
    clean(&mut f, &mut journal);
    eliminate_small(&mut f, &mut journal);
    let after = DegreeStats::of(&f);
    let mut chains = Vec::new();
    let heavy: Vec<Var> = f.vars().filter(|&v| f.degree(v) > 3).collect();
    for u in heavy {
        let mut chain = Vec::new();
        while f.degree(u) > 3 {
            let p = f.profile(u);
            if p.neg > p.pos {
                f.flip(u);
                journal.push(ReconstructionRecord::Flipped(u));
            }
            let occ = f.occurrences(u.pos());
            let (a, b) = (occ[occ.len() - 2], occ[occ.len() - 1]);
            let ca = f.remove_clause(a);
            let cb = f.remove_clause(b);
            let v = f.fresh_variable();
            let swap = |c: &Clause| Clause::new(c.lits().iter().map(|&l| if l == u.pos() { v.pos() } else { l }));
            let (na, nb) = (swap(&ca), swap(&cb));
            let link = Clause::new([v.neg(), u.pos()]);
            f.add_clause(na.clone());
            f.add_clause(nb.clone());
            f.add_clause(link.clone());
            journal.push(ReconstructionRecord::Introduced {
                var: v,
                defining: vec![na, nb, link],
            });
            chain.push(v);
        }
        chains.push((u, chain));
    }
    Transformed {
        formula: f,
        journal,
        chains,
        input: stats,
        after_elimination: after,
        changed: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_bounded_degree;
    use crate::oracle::{brute_force_sat, is_satisfiable};
    use crate::reconstruct::extend_model;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_dimacs(&cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn one_chain_link() {
        // u=1 occurring (4,1); a..e = 2..6 each occur three times elsewhere.
        let g = f(&[
            &[1, 2],
            &[1, 3],
            &[1, 4],
            &[1, 5],
            &[-1, 6],
            &[2, 3, 4],
            &[5, 6, 2],
            &[-3, -4, -5],
            &[-6, 3, 4],
            &[-2, 5, 6],
        ]);
        let t = reduce_degree(&g);
        assert!(t.formula.max_degree() <= 3);
        assert_eq!(t.chains[0], (Var(1), vec![Var(7), Var(8)]));
        assert_eq!(t.formula.num_vars(), t.after_elimination.rep_total);
    }

    #[test]
    fn three_occur_input_is_untouched() {
        let g = f(&[&[1, 2], &[-1, 3], &[1, 2, 3]]);
        let t = reduce_degree(&g);
        assert!(!t.changed);
        assert_eq!(t.formula.canonical_clauses(), g.canonical_clauses());
    }

    #[test]
    fn random_inputs_meet_the_bound() {
        for seed in 0..200 {
            let g = random_bounded_degree(7, 1, 5, 2, 4, seed).unwrap();
            let t = reduce_degree(&g);
            assert!(t.formula.max_degree() <= 3, "seed {seed}");
            if t.input.max_degree >= 3 {
                assert!(t.formula.num_vars() <= t.input.variable_bound(), "seed {seed}");
            }
            if t.changed && !t.formula.has_empty_clause() {
                assert_eq!(t.formula.num_vars(), t.after_elimination.rep_total, "seed {seed}");
            }
            assert_eq!(is_satisfiable(&g).unwrap(), is_satisfiable(&t.formula).unwrap(), "seed {seed}");
            if let Some(m) = brute_force_sat(&t.formula).unwrap() {
                assert!(g.is_satisfied_by(&extend_model(t.journal.records(), m).unwrap()), "seed {seed}");
            }
        }
    }

    #[test]
    fn min_degree_three_gives_exact_count() {
        for seed in 0..100 {
            let g = random_bounded_degree(8, 3, 7, 2, 4, seed).unwrap();
            if DegreeStats::of(&g).min_degree < 3 || g.clauses().any(|(_, c)| c.has_duplicates() || c.is_tautology()) {
                continue;
            }
            let t = reduce_degree(&g);
            assert_eq!(t.formula.num_vars(), t.input.rep_total, "seed {seed}");
        }
    }
}
