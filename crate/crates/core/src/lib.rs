//! Exact branch-and-reduce satisfiability solving for CNF formulas in which
//! every variable occurs at most three times, plus a degree reducer that
//! brings arbitrary CNF into that shape.

pub mod dimacs;
pub mod endgame;
pub mod error;
pub mod formula;
pub mod gen;
pub mod oracle;
pub mod reconstruct;
pub mod resolution;
pub mod rules;
pub mod solver;
pub mod standardize;
pub mod subset;
pub mod tau;
pub mod transform;

pub use error::{Error, Result};
pub use formula::{Clause, ClauseId, Formula, Lit, Var};
