//! The branch-and-reduce driver.
//!
//! Each node runs, in order and restarting after every change: verdict
//! checks, the all-positive check, standardization, low-degree elimination,
//! the shared-pair rules, the all-negative-clause rules, subset safe
//! resolution, primary branching, the autarky step, secondary branching and
//! finally the endgame solver.
//!
//! Branching is measure and gate: every candidate branch is simulated on the
//! live formula under a checkpoint, the number of variables it removes is
//! counted, and a candidate is taken once its branching factor is within
//! [`GATE`](crate::tau::GATE).

use log::{debug, warn};
use serde::Serialize;

use crate::endgame::{check_endgame, solve_3sat_counting};
use crate::error::{Error, Result};
use crate::formula::{ClauseId, Formula, Lit, Var};
use crate::reconstruct::{extend_model, Journal, ReconstructionRecord};
use crate::rules::{
    autarky_reduce, eliminate_low_degree, neg_clause_reductions, normalize_polarity, shared_pair_reduction, RuleId,
    RuleOutcome,
};
use crate::standardize::standardize;
use crate::subset::{SearchStats, SubsetConfig, SubsetSearch};
use crate::tau::{tau, within_gate};
use crate::transform::reduce_degree;

/// Solver settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Largest subset tried by safe resolution.
    pub max_subset: usize,
    /// Subset candidates per search on the main path.
    pub subset_budget: usize,
    /// Subset candidates per search inside branch simulations.
    pub simulation_subset_budget: usize,
    /// Search nodes before giving up with an unknown verdict.
    pub node_budget: Option<u64>,
    /// Reconstruct a model on SAT.
    pub models: bool,
    /// Check the structural invariants as the search goes.
    pub check_invariants: bool,
    /// Makes the given rule drop a clause after every firing, to show that
    /// the cross-checks notice a broken rule.
    #[doc(hidden)]
    pub fault: Option<RuleId>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_subset: 10,
            subset_budget: 10_000,
            simulation_subset_budget: 1_000,
            node_budget: None,
            models: true,
            check_invariants: cfg!(debug_assertions),
            fault: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

/// Counters collected during one solve.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    /// Firings per rule, indexed by [`RuleId::index`].
    pub rule_counts: [u64; 13],
    pub vars_eliminated: u64,
    pub simulations: u64,
    pub branches: u64,
    pub step7_branches: u64,
    pub step9_branches: u64,
    /// Largest factor among gated branching decisions.
    pub max_factor: f64,
    /// Gated decisions whose factor exceeded the gate (always zero unless
    /// the gate logic is broken).
    pub gate_violations: u64,
    pub fallbacks: u64,
    pub fallback_max_factor: f64,
    pub sat_probes: u64,
    pub forced: u64,
    pub refuted: u64,
    pub endgame_calls: u64,
    pub endgame_nodes: u64,
    pub invariant_checks: u64,
    pub invariant_violations: u64,
    pub violations: Vec<String>,
    pub subset_candidates: u64,
    pub subset_trials: u64,
}

impl SolveStats {
    pub fn rule_count(&self, rule: RuleId) -> u64 {
        self.rule_counts[rule.index()]
    }
}

/// Outcome of [`solve`].
#[derive(Clone, Debug)]
pub struct SolveVerdict {
    pub verdict: Verdict,
    /// Model over the input variables, indexed by variable id.
    pub model: Option<Vec<bool>>,
    pub stats: SolveStats,
}

impl SolveVerdict {
    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }
}

/// One line of the trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub step: u8,
    pub rule: String,
    pub vars_eliminated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub depth: usize,
}

/// Hooks into a running solve. Simulated branches are not reported.
pub trait Observer {
    /// Whether [`Observer::rule_fired`] should receive clause snapshots.
    fn wants_snapshots(&self) -> bool {
        false
    }

    /// A rule changed the formula from `before` to `after` (DIMACS clauses).
    fn rule_fired(&mut self, _rule: RuleId, _before: &[Vec<i32>], _after: &[Vec<i32>]) {}

    fn event(&mut self, _event: &TraceEvent) {}
}

/// Ignores everything.
pub struct NoObserver;

impl Observer for NoObserver {}

#[derive(Clone, Copy, Debug)]
struct Sim {
    eliminated: u32,
    verdict: Option<bool>,
}

/// A measured branching: the branches in exploration order, the number of
/// variables each one eliminates, and the resulting branching factor.
#[derive(Clone, Debug)]
pub struct BranchDecision {
    pub branches: Vec<Vec<Lit>>,
    pub vector: Vec<u32>,
    pub factor: f64,
}

/// What a branching step settles on.
#[derive(Clone, Debug)]
pub enum BranchChoice {
    Branch(BranchDecision),
    /// Assigning these literals reduces the formula to a satisfiable one.
    Sat(Vec<Lit>),
    /// Every other branch was refuted during measurement.
    Forced(Vec<Lit>),
    /// Every branch was refuted.
    Refuted,
}

enum Evaluated {
    /// A branch reached SAT during simulation.
    Sat(Vec<Lit>),
    /// Every branch is unsatisfiable.
    Refuted,
    /// Only one branch can be satisfiable.
    Forced(Vec<Lit>),
    Decision(BranchDecision),
}

enum Pick {
    Follow { step: u8, rule: &'static str, lits: Vec<Lit> },
    Refuted(u8),
    Branch(u8, BranchDecision),
    Nothing,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Sat,
    Unsat,
    Unknown,
}

const MAX_RECORDED_VIOLATIONS: usize = 32;

struct Solver<'o> {
    f: Formula,
    journal: Journal,
    config: SolverConfig,
    stats: SolveStats,
    subset: SubsetSearch,
    observer: &'o mut dyn Observer,
    snapshots: bool,
    model: Option<Vec<bool>>,
    /// Cheapest rejected decision seen at the current node.
    best: Option<(u8, BranchDecision)>,
}

fn has_no_negative_clause(f: &Formula) -> bool {
    f.clauses().all(|(_, c)| c.has_positive())
}

impl<'o> Solver<'o> {
    fn new(f: Formula, config: SolverConfig, observer: &'o mut dyn Observer) -> Solver<'o> {
        let subset = SubsetSearch::new(SubsetConfig {
            max_subset: config.max_subset,
            budget: config.subset_budget,
        });
        let snapshots = observer.wants_snapshots();
        Solver {
            f,
            journal: Journal::new(),
            config,
            stats: SolveStats::default(),
            subset,
            observer,
            snapshots,
            model: None,
            best: None,
        }
    }

    fn violation(&mut self, what: String) {
        self.stats.invariant_violations += 1;
        warn!("invariant violated: {what}");
        if self.stats.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.stats.violations.push(what);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if self.config.check_invariants {
            self.stats.invariant_checks += 1;
            if !ok {
                let w = what();
                self.violation(w);
            }
        }
    }

    fn emit(&mut self, step: u8, rule: &str, vars_eliminated: usize, decision: Option<&BranchDecision>, depth: usize) {
        let event = TraceEvent {
            step,
            rule: rule.to_string(),
            vars_eliminated,
            vector: decision.map(|d| d.vector.clone()),
            tau: decision.map(|d| d.factor),
            depth,
        };
        self.observer.event(&event);
    }

    /// One reduction among steps 3 to 6, or `None` at the fixpoint.
    fn reduce_step(&mut self, simulating: bool) -> Option<RuleOutcome> {
        let before_vars = self.f.num_vars();
        let snapshot = (self.snapshots && !simulating).then(|| self.f.to_dimacs_clauses());
        let outcome = self.reduce_step_inner(simulating, before_vars)?;
        if self.config.fault == Some(outcome.rule) {
            if let Some(id) = self.f.clause_ids().pop() {
                self.f.remove_clause(id);
            }
        }
        if let Some(before) = snapshot {
            let after = self.f.to_dimacs_clauses();
            self.observer.rule_fired(outcome.rule, &before, &after);
        }
        Some(outcome)
    }

    fn reduce_step_inner(&mut self, simulating: bool, before_vars: usize) -> Option<RuleOutcome> {
        let s = standardize(&mut self.f, &mut self.journal);
        if s.changed() {
            return Some(RuleOutcome {
                rule: RuleId::S3,
                vars_eliminated: before_vars.saturating_sub(self.f.num_vars()),
            });
        }
        normalize_polarity(&mut self.f, &mut self.journal);
        if let Some(o) = eliminate_low_degree(&mut self.f, &mut self.journal) {
            return Some(o);
        }
        if let Some(o) = shared_pair_reduction(&mut self.f, &mut self.journal) {
            return Some(o);
        }
        if let Some(o) = neg_clause_reductions(&mut self.f, &mut self.journal) {
            return Some(o);
        }
        self.subset.config.budget = if simulating {
            self.config.simulation_subset_budget
        } else {
            self.config.subset_budget
        };
        self.subset.run(&mut self.f, &mut self.journal).map(|(_, o)| o)
    }

    fn apply(&mut self, lits: &[Lit]) {
        for &l in lits {
            if self.f.contains_var(l.var()) {
                self.journal.push(ReconstructionRecord::Assigned(l));
                self.f.assign_unchecked(l);
            }
        }
    }

    /// Assigns `lits` and reduces with steps 1 to 6, then undoes it all.
    fn simulate(&mut self, lits: &[Lit]) -> Sim {
        self.stats.simulations += 1;
        let before = self.f.num_vars();
        let cp = self.f.checkpoint();
        let mark = self.journal.len();
        self.apply(lits);
        let verdict = loop {
            if self.f.is_empty() {
                break Some(true);
            }
            if self.f.has_empty_clause() {
                break Some(false);
            }
            if has_no_negative_clause(&self.f) {
                break Some(true);
            }
            if self.reduce_step(true).is_none() {
                break None;
            }
        };
        let eliminated = match verdict {
            Some(_) => before,
            None => before.saturating_sub(self.f.num_vars()),
        };
        self.f.rollback(cp);
        self.journal.truncate(mark);
        Sim {
            eliminated: eliminated.max(1) as u32,
            verdict,
        }
    }

    fn evaluate(&mut self, branches: Vec<Vec<Lit>>) -> Evaluated {
        let mut live: Vec<(Vec<Lit>, u32)> = Vec::new();
        for b in branches {
            let s = self.simulate(&b);
            match s.verdict {
                Some(true) => return Evaluated::Sat(b),
                Some(false) => {}
                None => live.push((b, s.eliminated)),
            }
        }
        match live.len() {
            0 => Evaluated::Refuted,
            1 => Evaluated::Forced(live.pop().expect("one").0),
            _ => {
                // Larger elimination first.
                live.sort_by_key(|b| std::cmp::Reverse(b.1));
                let vector: Vec<u32> = live.iter().map(|b| b.1).collect();
                let factor = tau(&vector).expect("entries are positive");
                Evaluated::Decision(BranchDecision {
                    branches: live.into_iter().map(|b| b.0).collect(),
                    vector,
                    factor,
                })
            }
        }
    }

    fn consider(&mut self, step: u8, e: Evaluated) -> Pick {
        match e {
            Evaluated::Sat(lits) => Pick::Follow { step, rule: "sat-probe", lits },
            Evaluated::Refuted => Pick::Refuted(step),
            Evaluated::Forced(lits) => Pick::Follow { step, rule: "forced", lits },
            Evaluated::Decision(d) => {
                if within_gate(d.factor) {
                    Pick::Branch(step, d)
                } else {
                    if self.best.as_ref().is_none_or(|(_, b)| d.factor < b.factor) {
                        self.best = Some((step, d));
                    }
                    Pick::Nothing
                }
            }
        }
    }

    fn negative_clauses_in_scan_order(&self) -> Vec<ClauseId> {
        let mut ids = self.f.all_negative_clauses();
        ids.sort_by_key(|&id| (self.f.clause(id).expect("live").len(), id));
        ids
    }

    /// Primary branching on a variable of an all-negative clause.
    fn step7(&mut self) -> Pick {
        for id in self.negative_clauses_in_scan_order() {
            let Some(c) = self.f.clause(id) else { continue };
            let mut vars: Vec<Var> = c.vars().collect();
            vars.sort_unstable();
            for w in vars {
                let e = self.evaluate(vec![vec![w.pos()], vec![w.neg()]]);
                match self.consider(7, e) {
                    Pick::Nothing => {}
                    p => return p,
                }
            }
        }
        Pick::Nothing
    }

    /// Secondary branching around an all-negative 2-clause.
    fn step9(&mut self) -> Pick {
        for id in self.negative_clauses_in_scan_order() {
            let Some(c) = self.f.clause(id) else { continue };
            if c.len() != 2 {
                continue;
            }
            let (a, b) = (c.lits()[0].var(), c.lits()[1].var());
            for (x, _y) in [(a, b), (b, a)] {
                for z in self.f.neighbors(x.pos()) {
                    let e = self.evaluate(vec![vec![x.neg(), z.pos()], vec![x.neg(), z.neg()], vec![x.pos()]]);
                    match self.consider(9, e) {
                        Pick::Nothing => {}
                        p => return p,
                    }
                }
            }
        }
        Pick::Nothing
    }

    fn leaf_model(&mut self, model: Vec<bool>) -> Result<()> {
        if self.config.models {
            self.model = Some(extend_model(self.journal.records(), model)?);
        }
        Ok(())
    }

    fn check_fixpoint(&mut self) {
        if !self.config.check_invariants {
            return;
        }
        let bad: Vec<Var> = self
            .f
            .vars()
            .filter(|&v| {
                let p = self.f.profile(v);
                (p.pos, p.neg) != (2, 1)
            })
            .collect();
        self.check(bad.is_empty(), || format!("variables {bad:?} are not (2,1) after reduction"));
        let mut shared = None;
        'outer: for x in self.f.vars() {
            let mut partners: Vec<Var> = self
                .f
                .clauses_of(x)
                .into_iter()
                .flat_map(|id| self.f.clause(id).expect("live").vars().filter(move |&v| v != x).collect::<Vec<_>>())
                .collect();
            partners.sort_unstable();
            for w in partners.windows(2) {
                if w[0] == w[1] {
                    shared = Some((x, w[0]));
                    break 'outer;
                }
            }
        }
        self.check(shared.is_none(), || format!("variables {shared:?} share two clauses after reduction"));
    }

    fn branch(&mut self, step: u8, d: BranchDecision, depth: usize) -> Result<Outcome> {
        self.stats.branches += 1;
        if step == 7 {
            self.stats.step7_branches += 1;
        } else {
            self.stats.step9_branches += 1;
        }
        self.stats.max_factor = self.stats.max_factor.max(d.factor);
        if !within_gate(d.factor) {
            self.stats.gate_violations += 1;
        }
        debug!("step {step} branch {:?} factor {:.6} at depth {depth}", d.vector, d.factor);
        self.emit(step, "branch", 0, Some(&d), depth);
        self.explore(d.branches, depth)
    }

    fn explore(&mut self, branches: Vec<Vec<Lit>>, depth: usize) -> Result<Outcome> {
        for lits in branches {
            let cp = self.f.checkpoint();
            let mark = self.journal.len();
            self.apply(&lits);
            let r = self.search(depth + 1);
            self.f.rollback(cp);
            self.journal.truncate(mark);
            match r? {
                Outcome::Unsat => {}
                other => return Ok(other),
            }
        }
        Ok(Outcome::Unsat)
    }

    fn search(&mut self, depth: usize) -> Result<Outcome> {
        self.stats.nodes += 1;
        if self.config.node_budget.is_some_and(|b| self.stats.nodes > b) {
            return Ok(Outcome::Unknown);
        }
        loop {
            if !self.f.has_empty_clause() {
                let d = self.f.max_degree();
                self.check(d <= 3, || format!("maximum degree {d} exceeds 3"));
            }
            // Step 1.
            if self.f.is_empty() {
                let m = vec![false; self.f.var_bound() as usize + 1];
                self.leaf_model(m)?;
                return Ok(Outcome::Sat);
            }
            if self.f.has_empty_clause() {
                return Ok(Outcome::Unsat);
            }
            // Step 2.
            if has_no_negative_clause(&self.f) {
                let m = vec![true; self.f.var_bound() as usize + 1];
                self.leaf_model(m)?;
                return Ok(Outcome::Sat);
            }
            // Steps 3 to 6.
            if let Some(o) = self.reduce_step(false) {
                self.stats.rule_counts[o.rule.index()] += 1;
                self.stats.vars_eliminated += o.vars_eliminated as u64;
                self.emit(step_of(o.rule), o.rule.name(), o.vars_eliminated, None, depth);
                continue;
            }
            self.check_fixpoint();
            self.best = None;
            // Step 7.
            match self.step7() {
                Pick::Nothing => {}
                p => match self.act(p, depth)? {
                    Some(r) => return Ok(r),
                    None => continue,
                },
            }
            // Step 8.
            match autarky_reduce(&mut self.f, &mut self.journal) {
                Ok(Some(o)) => {
                    self.stats.rule_counts[o.rule.index()] += 1;
                    self.stats.vars_eliminated += o.vars_eliminated as u64;
                    self.emit(8, o.rule.name(), o.vars_eliminated, None, depth);
                    continue;
                }
                Ok(None) => {}
                Err(e) => {
                    self.check(false, || e.to_string());
                    return self.fallback(depth, "autarky set");
                }
            }
            let monotone = self.f.is_monotone();
            self.check(monotone, || "formula is not monotone after the autarky step".into());
            // Step 9.
            match self.step9() {
                Pick::Nothing => {}
                p => match self.act(p, depth)? {
                    Some(r) => return Ok(r),
                    None => continue,
                },
            }
            // Step 10.
            let report = check_endgame(&self.f);
            if !report.holds() {
                self.check(false, || report.to_string());
                return self.fallback(depth, "endgame structure");
            }
            self.stats.endgame_calls += 1;
            self.emit(10, "endgame", 0, None, depth);
            let (model, nodes) = solve_3sat_counting(&self.f);
            self.stats.endgame_nodes += nodes;
            return match model {
                Some(m) => {
                    self.leaf_model(m)?;
                    Ok(Outcome::Sat)
                }
                None => Ok(Outcome::Unsat),
            };
        }
    }

    /// Carries out a branching-step pick. `None` means the formula changed
    /// in place and the node loop should restart.
    fn act(&mut self, p: Pick, depth: usize) -> Result<Option<Outcome>> {
        match p {
            Pick::Follow { step, rule, lits } => {
                if rule == "sat-probe" {
                    self.stats.sat_probes += 1;
                } else {
                    self.stats.forced += 1;
                }
                let before = self.f.num_vars();
                self.apply(&lits);
                let gone = before.saturating_sub(self.f.num_vars());
                self.emit(step, rule, gone, None, depth);
                Ok(None)
            }
            Pick::Refuted(step) => {
                self.stats.refuted += 1;
                self.emit(step, "refuted", 0, None, depth);
                Ok(Some(Outcome::Unsat))
            }
            Pick::Branch(step, d) => self.branch(step, d, depth).map(Some),
            Pick::Nothing => Ok(None),
        }
    }

    fn fallback(&mut self, depth: usize, reason: &str) -> Result<Outcome> {
        let Some((step, d)) = self.best.take() else {
            return Err(Error::Invariant(format!(
                "no branching candidate left after failed {reason} check"
            )));
        };
        self.stats.fallbacks += 1;
        self.stats.fallback_max_factor = self.stats.fallback_max_factor.max(d.factor);
        warn!(
            "fallback after failed {reason} check: step {step} branch {:?} factor {:.6}",
            d.vector, d.factor
        );
        self.emit(step, "fallback", 0, Some(&d), depth);
        self.explore(d.branches, depth)
    }
}

fn step_of(rule: RuleId) -> u8 {
    match rule {
        RuleId::S3 => 3,
        RuleId::S4a | RuleId::S4b => 4,
        RuleId::S5a | RuleId::S5b | RuleId::S5c | RuleId::S5d => 5,
        RuleId::S6a | RuleId::S6b | RuleId::S6c | RuleId::S6d => 6,
        RuleId::S8 => 8,
        RuleId::Transform => 0,
    }
}

impl Pick {
    fn into_choice(self) -> Option<BranchChoice> {
        match self {
            Pick::Follow { rule: "sat-probe", lits, .. } => Some(BranchChoice::Sat(lits)),
            Pick::Follow { lits, .. } => Some(BranchChoice::Forced(lits)),
            Pick::Refuted(_) => Some(BranchChoice::Refuted),
            Pick::Branch(_, d) => Some(BranchChoice::Branch(d)),
            Pick::Nothing => None,
        }
    }
}

/// Assigns `lits` on a copy of `f` and reduces with steps 1 to 6. Returns
/// the number of eliminated variables and the verdict, if one was reached
/// (then the count is all of `Vars(f)`).
pub fn simulate_branch(f: &Formula, lits: &[Lit], config: &SolverConfig) -> (u32, Option<bool>) {
    let mut observer = NoObserver;
    let mut s = Solver::new(f.clone(), config.clone(), &mut observer);
    let sim = s.simulate(lits);
    (sim.eliminated, sim.verdict)
}

/// Reduces a copy of `f` with steps 1 to 6 until none applies or a verdict
/// is reached.
pub fn reduce_to_fixpoint(f: &Formula, config: &SolverConfig) -> (Formula, Option<bool>) {
    let mut observer = NoObserver;
    let mut s = Solver::new(f.clone(), config.clone(), &mut observer);
    let verdict = loop {
        if s.f.is_empty() {
            break Some(true);
        }
        if s.f.has_empty_clause() {
            break Some(false);
        }
        if has_no_negative_clause(&s.f) {
            break Some(true);
        }
        if s.reduce_step(false).is_none() {
            break None;
        }
    };
    (s.f, verdict)
}

/// Step 7 on `f`, which should already be reduced by steps 3 to 6. `None`
/// when no candidate passes the gate.
pub fn step7_branch(f: &Formula, config: &SolverConfig) -> Option<BranchChoice> {
    let mut observer = NoObserver;
    let mut s = Solver::new(f.clone(), config.clone(), &mut observer);
    s.step7().into_choice()
}

/// Step 9 on a monotone `f`.
pub fn step9_branch(f: &Formula, config: &SolverConfig) -> Option<BranchChoice> {
    let mut observer = NoObserver;
    let mut s = Solver::new(f.clone(), config.clone(), &mut observer);
    s.step9().into_choice()
}

/// Decides `input`. Formulas with a variable of degree above three are
/// degree-reduced first.
pub fn solve(input: &Formula, config: &SolverConfig) -> Result<SolveVerdict> {
    solve_observed(input, config, &mut NoObserver)
}

/// [`solve`] with an [`Observer`].
pub fn solve_observed(input: &Formula, config: &SolverConfig, observer: &mut dyn Observer) -> Result<SolveVerdict> {
    let transformed = (input.max_degree() > 3).then(|| reduce_degree(input));
    let start = match &transformed {
        Some(t) => {
            if observer.wants_snapshots() {
                observer.rule_fired(RuleId::Transform, &input.to_dimacs_clauses(), &t.formula.to_dimacs_clauses());
            }
            observer.event(&TraceEvent {
                step: 0,
                rule: RuleId::Transform.name().to_string(),
                vars_eliminated: t.input.num_vars.saturating_sub(t.formula.num_vars()),
                vector: None,
                tau: None,
                depth: 0,
            });
            t.formula.clone()
        }
        None => input.clone(),
    };
    let mut solver = Solver::new(start, config.clone(), observer);
    if transformed.is_some() {
        solver.stats.rule_counts[RuleId::Transform.index()] += 1;
    }
    let outcome = solver.search(0)?;
    let SearchStats { candidates, trials, .. } = solver.subset.stats;
    solver.stats.subset_candidates = candidates;
    solver.stats.subset_trials = trials;
    let verdict = match outcome {
        Outcome::Sat => Verdict::Sat,
        Outcome::Unsat => Verdict::Unsat,
        Outcome::Unknown => Verdict::Unknown,
    };
    let mut model = None;
    if verdict == Verdict::Sat && config.models {
        let mut m = solver.model.take().ok_or_else(|| Error::Invariant("SAT without a model".into()))?;
        if let Some(t) = &transformed {
            m = extend_model(t.journal.records(), m)?;
        }
        m.resize(input.var_bound() as usize + 1, false);
        m.truncate(input.var_bound() as usize + 1);
        if !input.is_satisfied_by(&m) {
            return Err(Error::Invariant("reconstructed model does not satisfy the input".into()));
        }
        model = Some(m);
    }
    Ok(SolveVerdict {
        verdict,
        model,
        stats: solver.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_3occur, random_cnf, Profile};
    use crate::oracle::is_satisfiable;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_dimacs(&cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
    }

    fn run(g: &Formula) -> SolveVerdict {
        solve(g, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn base_cases() {
        assert_eq!(run(&Formula::new()).verdict, Verdict::Sat);
        assert_eq!(run(&f(&[&[]])).verdict, Verdict::Unsat);
        let v = run(&f(&[&[1, -2], &[2, 3], &[-1, 3]]));
        assert_eq!(v.verdict, Verdict::Sat);
        assert_eq!(v.stats.nodes, 1);
        assert_eq!(run(&f(&[&[1], &[-1]])).verdict, Verdict::Unsat);
    }

    #[test]
    fn agrees_with_oracle_on_small_instances() {
        for seed in 0..150 {
            let n = 8 + (seed % 8) as usize;
            let g = if seed % 2 == 0 {
                random_3occur(n, &Profile::default(), seed).unwrap()
            } else {
                random_cnf(n, (n as f64 * 4.0) as usize, 3, seed).unwrap()
            };
            let v = run(&g);
            assert_eq!(v.is_sat(), is_satisfiable(&g).unwrap(), "seed {seed}");
            if let Some(m) = v.model {
                assert!(g.is_satisfied_by(&m));
            }
            assert_eq!(v.stats.invariant_violations, 0, "seed {seed}: {:?}", v.stats.violations);
        }
    }

    #[test]
    fn node_budget_gives_unknown() {
        let g = random_3occur(60, &Profile::default(), 4).unwrap();
        let config = SolverConfig {
            node_budget: Some(0),
            ..SolverConfig::default()
        };
        assert_eq!(solve(&g, &config).unwrap().verdict, Verdict::Unknown);
    }
}
