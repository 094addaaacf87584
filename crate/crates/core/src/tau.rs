//! Branching factors.
//!
//! A branch that splits into `k` subproblems with `n₁, …, n_k` fewer
//! variables has running time governed by the unique root `x > 1` of
//! `Σ x^(-nᵢ) = 1`.

use crate::error::{Error, Result};

/// The gate every accepted branching decision must meet.
pub const GATE: f64 = 1.1199;
/// Slack absorbing root-finder tolerance when comparing against [`GATE`].
pub const GATE_SLACK: f64 = 1e-9;

pub fn within_gate(factor: f64) -> bool {
    factor <= GATE + GATE_SLACK
}

/// Root of `Σ x^(-nᵢ) = 1` to absolute tolerance 1e-12.
pub fn tau(vector: &[u32]) -> Result<f64> {
    if vector.is_empty() {
        return Err(Error::Contract("branch vector is empty".into()));
    }
    if vector.contains(&0) {
        return Err(Error::Contract(format!("branch vector {vector:?} has a zero entry")));
    }
    if vector.len() == 1 {
        // x^(-n) = 1 only at x = 1.
        return Ok(1.0);
    }
    let g = |x: f64| vector.iter().map(|&n| x.powi(-(n as i32))).sum::<f64>() - 1.0;
    let min = *vector.iter().min().expect("nonempty") as f64;
    let mut lo = 1.0_f64;
    // At x = k^(1/min) every term is at most 1/k, so g(hi) <= 0; the
    // small widening keeps that true under rounding.
    let mut hi = (vector.len() as f64).powf(1.0 / min) * (1.0 + 1e-12);
    debug_assert!(g(lo) > 0.0 && g(hi) <= 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
