//! The final stage: structure checks on a fully reduced formula and a
//! plain DPLL solver for what is left.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, Lit};

/// What the endgame structure check found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EndgameReport {
    pub num_vars: usize,
    pub two_clauses: usize,
    pub three_clauses: usize,
    pub violations: Vec<String>,
}

impl EndgameReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<EndgameReport> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::Invariant(self.to_string()))
        }
    }
}

impl fmt::Display for EndgameReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(
                f,
                "endgame ok: {} vars, {} 2-clauses, {} 3-clauses",
                self.num_vars, self.two_clauses, self.three_clauses
            )
        } else {
            write!(f, "endgame violations: {}", self.violations.join("; "))
        }
    }
}

/// Checks that `f` is monotone, has only 2- and 3-clauses, has at most
/// `n/3` 3-clauses, and that variables of all-negative 3-clauses occur
/// positively only in 2-clauses.
pub fn check_endgame(f: &Formula) -> EndgameReport {
    let mut r = EndgameReport {
        num_vars: f.num_vars(),
        ..EndgameReport::default()
    };
    for (id, c) in f.clauses() {
        if !c.is_all_negative() && !c.is_all_positive() {
            r.violations.push(format!("clause {} mixes polarities", id.0));
        }
        match c.len() {
            2 => r.two_clauses += 1,
            3 => r.three_clauses += 1,
            n => r.violations.push(format!("clause {} has length {n}", id.0)),
        }
        if c.len() == 3 && c.is_all_negative() {
            for v in c.vars() {
                if f.occurrences(v.pos()).iter().any(|&o| f.clause(o).expect("live").len() >= 3) {
                    r.violations.push(format!("variable {} of all-negative 3-clause {} is in a long positive clause", v.0, id.0));
                }
            }
        }
    }
    if 3 * r.three_clauses > r.num_vars {
        r.violations.push(format!(
            "{} 3-clauses exceed a third of {} variables",
            r.three_clauses, r.num_vars
        ));
    }
    r
}

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    occ: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Lit>,
    nodes: u64,
}

impl Dpll {
    fn new(f: &Formula) -> Dpll {
        let bound = f.var_bound() as usize + 1;
        let clauses: Vec<Vec<Lit>> = f.clauses().map(|(_, c)| c.lits().to_vec()).collect();
        let mut occ = vec![Vec::new(); 2 * bound];
        for (i, c) in clauses.iter().enumerate() {
            for l in c {
                occ[l.code()].push(i);
            }
        }
        Dpll {
            clauses,
            occ,
            value: vec![0; bound],
            trail: Vec::new(),
            nodes: 0,
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var().index()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: Lit) {
        self.value[l.var().index()] = if l.is_positive() { 1 } else { -1 };
        self.trail.push(l);
    }

    fn undo(&mut self, mark: usize) {
        for l in self.trail.drain(mark..) {
            self.value[l.var().index()] = 0;
        }
    }

    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let l = self.trail[head];
            head += 1;
            for k in 0..self.occ[(!l).code()].len() {
                let ci = self.occ[(!l).code()][k];
                let mut open = None;
                let mut count = 0;
                let mut satisfied = false;
                for &m in &self.clauses[ci] {
                    match self.lit_value(m) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            count += 1;
                            open = Some(m);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match (count, open) {
                    (0, _) => return false,
                    (1, Some(m)) => self.set(m),
                    _ => {}
                }
            }
        }
        true
    }

    /// Open clause with the fewest unassigned literals.
    fn pick(&self) -> Option<Lit> {
        let mut best: Option<(usize, Lit)> = None;
        for c in &self.clauses {
            let mut open = 0;
            let mut first = None;
            let mut satisfied = false;
            for &m in c {
                match self.lit_value(m) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        first.get_or_insert(m);
                    }
                    _ => {}
                }
            }
            if !satisfied && best.is_none_or(|(b, _)| open < b) {
                best = Some((open, first.expect("propagation leaves no falsified clause")));
            }
        }
        best.map(|(_, l)| l)
    }

    fn search(&mut self, head: usize) -> bool {
        self.nodes += 1;
        if !self.propagate(head) {
            return false;
        }
        let Some(l) = self.pick() else { return true };
        for choice in [l, !l] {
            let mark = self.trail.len();
            self.set(choice);
            if self.search(mark) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Decides `f` by DPLL with unit propagation. Returns a model indexed by
/// variable id on success.
pub fn solve_3sat(f: &Formula) -> Option<Vec<bool>> {
    solve_3sat_counting(f).0
}

/// Like [`solve_3sat`], also returning the number of search nodes.
pub fn solve_3sat_counting(f: &Formula) -> (Option<Vec<bool>>, u64) {
    if f.has_empty_clause() {
        return (None, 0);
    }
    let mut d = Dpll::new(f);
    // Units have nothing to propagate from, so seed them directly.
    let units: Vec<Lit> = d.clauses.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    for u in units {
        match d.lit_value(u) {
            0 => d.set(u),
            -1 => return (None, 0),
            _ => {}
        }
    }
    let sat = d.search(0);
    let model = sat.then(|| d.value.iter().map(|&v| v == 1).collect());
    (model, d.nodes)
}
