//! Brute-force satisfiability oracle.
//!
//! Works directly on integer clause lists and shares no code with the
//! rewriting solver, so it can serve as the independent reference in
//! equisatisfiability checks.

use crate::error::{Error, Result};
use crate::formula::Formula;

pub const DEFAULT_ORACLE_CAP: usize = 24;

/// Result of an oracle run: `Some(model)` when satisfiable. The model is
/// indexed by variable id; index 0 is unused.
pub type OracleResult = Option<Vec<bool>>;

/// Decides `f` exactly, refusing formulas with more than `cap` variables.
pub fn brute_force_sat_capped(f: &Formula, cap: usize) -> Result<OracleResult> {
    let vars = f.num_vars();
    if vars > cap {
        return Err(Error::OracleCap { vars, cap });
    }
    let clauses = f.to_dimacs_clauses();
    Ok(solve_clauses(&clauses, f.var_bound() as usize))
}

/// Decides `f` exactly with the default cap of 24 variables.
pub fn brute_force_sat(f: &Formula) -> Result<OracleResult> {
    brute_force_sat_capped(f, DEFAULT_ORACLE_CAP)
}

/// Convenience: satisfiability only.
pub fn is_satisfiable(f: &Formula) -> Result<bool> {
    Ok(brute_force_sat(f)?.is_some())
}

/// Backtracking search with unit propagation over plain integer clauses.
/// `bound` is one past the largest variable id.
pub fn solve_clauses(clauses: &[Vec<i32>], bound: usize) -> OracleResult {
    let mut assign: Vec<Option<bool>> = vec![None; bound.max(1)];
    if search(clauses, &mut assign) {
        Some(assign.iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

enum State {
    Conflict,
    Unit(i32),
    Open(i32),
    Done,
}

fn lit_value(assign: &[Option<bool>], lit: i32) -> Option<bool> {
    assign[lit.unsigned_abs() as usize].map(|v| v == (lit > 0))
}

fn scan(clauses: &[Vec<i32>], assign: &[Option<bool>]) -> State {
    let mut branch = None;
    for c in clauses {
        let mut satisfied = false;
        let mut free = 0;
        let mut last_free = 0;
        for &l in c {
            match lit_value(assign, l) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => {
                    free += 1;
                    last_free = l;
                }
            }
        }
        if satisfied {
            continue;
        }
        match free {
            0 => return State::Conflict,
            1 => return State::Unit(last_free),
            _ => {
                if branch.is_none() {
                    branch = Some(last_free);
                }
            }
        }
    }
    match branch {
        Some(l) => State::Open(l),
        None => State::Done,
    }
}

fn search(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    loop {
        match scan(clauses, assign) {
            State::Conflict => {
                for v in trail {
                    assign[v] = None;
                }
                return false;
            }
            State::Done => return true,
            State::Unit(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = Some(l > 0);
                trail.push(v);
            }
            State::Open(l) => {
                let v = l.unsigned_abs() as usize;
                for value in [l > 0, l < 0] {
                    assign[v] = Some(value);
                    if search(clauses, assign) {
                        return true;
                    }
                }
                assign[v] = None;
                for v in trail {
                    assign[v] = None;
                }
                return false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_dimacs(&cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn basic_verdicts() {
        assert!(is_satisfiable(&f(&[&[1]])).unwrap());
        assert!(!is_satisfiable(&f(&[&[1], &[-1]])).unwrap());
        assert!(is_satisfiable(&Formula::new()).unwrap());
        assert!(!is_satisfiable(&f(&[&[]])).unwrap());
    }

    #[test]
    fn models_satisfy_the_formula() {
        let g = f(&[&[1, 2, -3], &[-1, 3], &[-2, 3], &[-3, 4], &[-4, -1]]);
        let m = brute_force_sat(&g).unwrap().unwrap();
        assert!(g.is_satisfied_by(&m));
    }

    #[test]
    fn cap_is_enforced() {
        let clauses: Vec<Vec<i32>> = (1..=30).map(|v| vec![v]).collect();
        let g = Formula::from_dimacs(&clauses);
        assert!(matches!(brute_force_sat(&g), Err(Error::OracleCap { vars: 30, cap: 24 })));
        assert!(brute_force_sat_capped(&g, 30).unwrap().is_some());
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,j) = pigeon i in hole j, var = 2*(i-1)+j
        let p = |i: i32, j: i32| 2 * (i - 1) + j;
        let mut cs: Vec<Vec<i32>> = (1..=3).map(|i| vec![p(i, 1), p(i, 2)]).collect();
        for j in 1..=2 {
            for a in 1..=3 {
                for b in a + 1..=3 {
                    cs.push(vec![-p(a, j), -p(b, j)]);
                }
            }
        }
        assert!(brute_force_sat(&Formula::from_dimacs(&cs)).unwrap().is_none());
    }
}
