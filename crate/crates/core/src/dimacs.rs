//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use log::{info, warn};

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, Var};

/// A parsed DIMACS file before it becomes a [`Formula`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsDocument {
    pub num_vars_declared: usize,
    pub num_clauses_declared: usize,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
}

impl DimacsDocument {
    /// Builds the formula. Declared-but-unused variables keep their ids
    /// reserved so that fresh variables never collide with them.
    pub fn to_formula(&self) -> Formula {
        let mut f = Formula::new();
        if self.num_vars_declared > 0 {
            f.reserve_var(Var(self.num_vars_declared as u32));
        }
        for c in &self.clauses {
            f.add_clause(Clause::from_dimacs(c));
        }
        let unused = self.num_vars_declared - f.num_vars().min(self.num_vars_declared);
        if unused > 0 {
            info!("{unused} declared variables do not occur in any clause");
        }
        f
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses DIMACS CNF text.
pub fn parse_document(text: &str) -> Result<DimacsDocument> {
    let mut doc = DimacsDocument::default();
    let mut header_seen = false;
    let mut current: Vec<i32> = Vec::new();
    let mut last_pos = (1, 1);

    'lines: for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix('c') {
            let body = rest.strip_prefix(' ').unwrap_or(rest);
            doc.comments.push(body.to_string());
            continue;
        }
        if trimmed.starts_with('%') {
            // SATLIB end marker.
            break;
        }
        if trimmed.starts_with('p') {
            let column = line.len() - trimmed.len() + 1;
            if header_seen {
                return Err(parse_error(line_no, column, "duplicate problem line"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(parse_error(line_no, column, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = fields[2]
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, column, format!("bad variable count `{}`", fields[2])))?;
            let clauses = fields[3]
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, column, format!("bad clause count `{}`", fields[3])))?;
            if vars > i32::MAX as usize {
                return Err(parse_error(line_no, column, "variable count too large"));
            }
            doc.num_vars_declared = vars;
            doc.num_clauses_declared = clauses;
            header_seen = true;
            continue;
        }
        let mut offset = 0;
        for token in line.split_whitespace() {
            let start = line[offset..].find(token).expect("token comes from line") + offset;
            offset = start + token.len();
            let column = start + 1;
            if !header_seen {
                return Err(parse_error(line_no, column, "clause before the `p cnf` header"));
            }
            if token == "%" {
                break 'lines;
            }
            let value: i64 = token
                .parse()
                .map_err(|_| parse_error(line_no, column, format!("`{token}` is not an integer")))?;
            if value == 0 {
                doc.clauses.push(std::mem::take(&mut current));
                continue;
            }
            if value.unsigned_abs() > doc.num_vars_declared as u64 {
                return Err(parse_error(
                    line_no,
                    column,
                    format!("literal {value} out of range 1..={}", doc.num_vars_declared),
                ));
            }
            current.push(value as i32);
            last_pos = (line_no, column);
        }
    }
    if !header_seen {
        return Err(parse_error(1, 1, "missing `p cnf` header"));
    }
    if !current.is_empty() {
        return Err(parse_error(last_pos.0, last_pos.1, "final clause is not terminated by 0"));
    }
    if doc.clauses.len() != doc.num_clauses_declared {
        warn!(
            "header declares {} clauses but {} were read",
            doc.num_clauses_declared,
            doc.clauses.len()
        );
    }
    Ok(doc)
}

/// Parses DIMACS CNF text into a formula.
pub fn parse(text: &str) -> Result<Formula> {
    Ok(parse_document(text)?.to_formula())
}

/// Writes `f` as DIMACS with variables renumbered densely in ascending id
/// order. The renaming is listed in `c var <new> <old>` comments.
pub fn emit(f: &Formula) -> String {
    emit_with_comments(f, &[])
}

/// Like [`emit`] with extra leading comment lines.
pub fn emit_with_comments(f: &Formula, comments: &[String]) -> String {
    let vars: Vec<Var> = f.vars().collect();
    let mut rename = vec![0i32; f.var_bound() as usize + 1];
    for (i, v) in vars.iter().enumerate() {
        rename[v.index()] = i as i32 + 1;
    }
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    for (i, v) in vars.iter().enumerate() {
        if v.0 as usize != i + 1 {
            let _ = writeln!(out, "c var {} {}", i + 1, v.0);
        }
    }
    let _ = writeln!(out, "p cnf {} {}", vars.len(), f.num_clauses());
    for (_, c) in f.clauses() {
        for l in c.lits() {
            let v = rename[l.var().index()];
            let _ = write!(out, "{} ", if l.is_positive() { v } else { -v });
        }
        out.push_str("0\n");
    }
    out
}

/// Variable renaming recorded by [`emit`]: pairs `(new, old)`.
pub fn renaming_from_comments(doc: &DimacsDocument) -> Vec<(u32, u32)> {
    doc.comments
        .iter()
        .filter_map(|c| {
            let mut it = c.strip_prefix("var ")?.split_whitespace();
            let new = it.next()?.parse().ok()?;
            let old = it.next()?.parse().ok()?;
            Some((new, old))
        })
        .collect()
}
