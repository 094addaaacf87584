//! Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, Lit, Var};
use crate::rules::RuleId;

/// Shape of the formulas produced by [`random_3occur`].
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub min_len: usize,
    pub max_len: usize,
    /// Every variable gets exactly three occurrences; otherwise degrees are
    /// drawn uniformly from 1..=3.
    pub exact_degree: bool,
    /// Every variable occurs twice positively and once negatively. Implies
    /// `exact_degree`.
    pub regular_21: bool,
    /// Probability that an occurrence is negative (ignored when `regular_21`).
    pub neg_prob: f64,
    /// Fraction of clauses deliberately filled from negative occurrences
    /// only, which controls how many all-negative clauses appear.
    pub all_negative_rate: f64,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            min_len: 2,
            max_len: 3,
            exact_degree: true,
            regular_21: false,
            neg_prob: 0.4,
            all_negative_rate: 0.2,
        }
    }
}

impl Profile {
    pub fn regular_21() -> Profile {
        Profile {
            regular_21: true,
            ..Profile::default()
        }
    }
}

#[derive(Clone, Copy)]
struct Slot {
    var: u32,
    positive: bool,
}

/// A random formula in which every variable occurs at most three times.
pub fn random_3occur(n: usize, profile: &Profile, seed: u64) -> Result<Formula> {
    if n < 3 {
        return Err(Error::Generation(format!("need n >= 3, got {n}")));
    }
    let p = profile;
    if p.min_len == 0 || p.min_len > p.max_len {
        return Err(Error::Generation(format!(
            "bad clause length range {}..={}",
            p.min_len, p.max_len
        )));
    }
    if p.max_len > n {
        return Err(Error::Generation(format!(
            "clauses of length {} need at least that many variables, got {n}",
            p.max_len
        )));
    }
    if !(0.0..=1.0).contains(&p.neg_prob) || !(0.0..=1.0).contains(&p.all_negative_rate) {
        return Err(Error::Generation("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut slots: Vec<Slot> = Vec::with_capacity(3 * n);
    for v in 1..=n as u32 {
        let degree = if p.exact_degree || p.regular_21 {
            3
        } else {
            rng.gen_range(1..=3)
        };
        for k in 0..degree {
            let positive = if p.regular_21 {
                k < 2
            } else {
                !rng.gen_bool(p.neg_prob)
            };
            slots.push(Slot { var: v, positive });
        }
    }

    let lengths = clause_lengths(slots.len(), p.min_len, p.max_len, &mut rng).ok_or_else(|| {
        Error::Generation(format!(
            "{} occurrences cannot be split into clauses of length {}..={}",
            slots.len(),
            p.min_len,
            p.max_len
        ))
    })?;

    for _attempt in 0..64 {
        if let Some(clauses) = deal(&slots, &lengths, p.all_negative_rate, &mut rng) {
            let mut f = Formula::new();
            f.reserve_var(Var(n as u32));
            for c in clauses {
                f.add_clause(c);
            }
            return Ok(f);
        }
    }
    Err(Error::Generation(
        "could not deal occurrences into clauses without repeating a variable".into(),
    ))
}

/// Random lengths in `min..=max` summing exactly to `total`.
fn clause_lengths(total: usize, min: usize, max: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut reachable = vec![false; total + 1];
    reachable[0] = true;
    for r in 1..=total {
        reachable[r] = (min..=max.min(r)).any(|l| reachable[r - l]);
    }
    if !reachable[total] {
        return None;
    }
    let mut out = Vec::new();
    let mut left = total;
    while left > 0 {
        let options: Vec<usize> = (min..=max.min(left)).filter(|&l| reachable[left - l]).collect();
        let l = *options.choose(rng)?;
        out.push(l);
        left -= l;
    }
    Some(out)
}

fn deal(slots: &[Slot], lengths: &[usize], neg_rate: f64, rng: &mut ChaCha8Rng) -> Option<Vec<Clause>> {
    let mut negs: Vec<Slot> = slots.iter().copied().filter(|s| !s.positive).collect();
    let mut rest: Vec<Slot> = slots.iter().copied().filter(|s| s.positive).collect();
    negs.shuffle(rng);

    let wanted = (neg_rate * lengths.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.shuffle(rng);
    let mut groups: Vec<Vec<Slot>> = vec![Vec::new(); lengths.len()];
    let mut taken = 0;
    for &ci in order.iter().take(wanted) {
        if negs.len() < lengths[ci] {
            break;
        }
        groups[ci] = negs.split_off(negs.len() - lengths[ci]);
        taken += 1;
    }
    rest.extend(negs);
    rest.shuffle(rng);
    for &ci in order.iter().skip(taken) {
        let at = rest.len() - lengths[ci];
        groups[ci] = rest.split_off(at);
    }
    for &ci in order.iter().take(taken) {
        if groups[ci].is_empty() {
            let at = rest.len() - lengths[ci];
            groups[ci] = rest.split_off(at);
        }
    }
    debug_assert!(rest.is_empty());

    repair_collisions(&mut groups, rng)?;
    Some(
        groups
            .into_iter()
            .map(|g| Clause::new(g.into_iter().map(|s| Lit::new(Var(s.var), s.positive))))
            .collect(),
    )
}

/// Swaps same-polarity slots between clauses until no clause repeats a
/// variable.
fn repair_collisions(groups: &mut [Vec<Slot>], rng: &mut ChaCha8Rng) -> Option<()> {
    let has = |g: &[Slot], v: u32, skip: usize| g.iter().enumerate().any(|(i, s)| i != skip && s.var == v);
    for _ in 0..10_000 {
        let bad = groups.iter().enumerate().find_map(|(ci, g)| {
            (0..g.len()).find(|&i| has(g, g[i].var, i)).map(|i| (ci, i))
        });
        let Some((ci, si)) = bad else { return Some(()) };
        let s = groups[ci][si];
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for (cj, g) in groups.iter().enumerate() {
            if cj == ci {
                continue;
            }
            for (sj, t) in g.iter().enumerate() {
                if t.positive == s.positive
                    && !has(&groups[ci], t.var, si)
                    && !has(g, s.var, sj)
                {
                    candidates.push((cj, sj));
                }
            }
        }
        let &(cj, sj) = candidates.choose(rng)?;
        let t = groups[cj][sj];
        groups[cj][sj] = s;
        groups[ci][si] = t;
    }
    None
}

/// Uniform random `k`-clauses over `n` variables (distinct variables per
/// clause, independent signs).
pub fn random_cnf(n: usize, m: usize, k: usize, seed: u64) -> Result<Formula> {
    if n == 0 || k == 0 {
        return Err(Error::Generation("n and k must be positive".into()));
    }
    if k > n {
        return Err(Error::Generation(format!("cannot draw {k} distinct variables out of {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<u32> = (1..=n as u32).collect();
    let mut f = Formula::new();
    f.reserve_var(Var(n as u32));
    for _ in 0..m {
        let vars = pool.choose_multiple(&mut rng, k);
        let lits: Vec<Lit> = vars.map(|&v| Lit::new(Var(v), rng.gen_bool(0.5))).collect();
        f.add_clause(Clause::new(lits));
    }
    Ok(f)
}

/// Random CNF whose variables reach degree up to `max_degree`: every
/// variable gets a degree in `min_degree..=max_degree`, occurrences get
/// random signs and are dealt into clauses of length `min_len..=max_len`.
pub fn random_bounded_degree(
    n: usize,
    min_degree: usize,
    max_degree: usize,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> Result<Formula> {
    if min_degree == 0 || min_degree > max_degree || min_len == 0 || min_len > max_len || max_len > n {
        return Err(Error::Generation("infeasible degree or length range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { rng.gen_range(min_degree..=max_degree) }).collect();
    for _ in 0..64 {
        let total: usize = degree.iter().sum();
        if let Some(lengths) = clause_lengths(total, min_len, max_len, &mut rng) {
            if let Some(f) = deal_greedy(n, &degree, &lengths, &mut rng) {
                return Ok(f);
            }
        }
        // Nudge the degree sequence and try again.
        let open: Vec<usize> = (1..=n).filter(|&v| degree[v] < max_degree).collect();
        let &v = open.choose(&mut rng).ok_or_else(|| Error::Generation("degree sequence cannot be dealt".into()))?;
        degree[v] += 1;
    }
    Err(Error::Generation("could not deal occurrences into clauses".into()))
}

/// Largest degree first into the clauses with the most room left, which
/// succeeds whenever any dealing without repeated variables exists.
fn deal_greedy(n: usize, degree: &[usize], lengths: &[usize], rng: &mut ChaCha8Rng) -> Option<Formula> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    order.sort_by_key(|&v| std::cmp::Reverse(degree[v]));
    let mut room: Vec<usize> = lengths.to_vec();
    let mut groups: Vec<Vec<Lit>> = vec![Vec::new(); lengths.len()];
    for v in order {
        if degree[v] > groups.len() {
            return None;
        }
        let mut by_room: Vec<usize> = (0..groups.len()).collect();
        by_room.shuffle(rng);
        by_room.sort_by_key(|&c| std::cmp::Reverse(room[c]));
        for &c in by_room.iter().take(degree[v]) {
            if room[c] == 0 {
                return None;
            }
            room[c] -= 1;
            groups[c].push(Lit::new(Var(v as u32), rng.gen_bool(0.5)));
        }
    }
    let mut f = Formula::new();
    f.reserve_var(Var(n as u32));
    for g in groups {
        f.add_clause(Clause::new(g));
    }
    Some(f)
}

const H: i32 = 0;

/// Clauses on which `rule` applies. Positive entries name gadget variables,
/// negative entries their negations, and `H` marks a hole for a background
/// literal.
fn gadget(rule: RuleId, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<i32>>> {
    Some(match rule {
        RuleId::S4a => vec![vec![1, H], vec![1, H, H], vec![1, H]],
        RuleId::S4b => vec![vec![1, H], vec![-1, H, H]],
        RuleId::S5a => vec![vec![1, 2, H], vec![1, 2, H], vec![-1, H], vec![-2, H]],
        RuleId::S5b => vec![vec![1, 2, H], vec![1, -2, H], vec![-1, H], vec![2, H]],
        RuleId::S5c if rng.gen_bool(0.5) => vec![vec![1, 2, H], vec![1, 2, H], vec![-1, -2, H]],
        RuleId::S5c => vec![vec![1, 2, H], vec![-1, -2, H], vec![1, H], vec![2, H]],
        RuleId::S5d => vec![vec![-1, 2, H], vec![1, -2, H], vec![1, H], vec![2, H]],
        RuleId::S6a => vec![
            vec![-1, -2, H],
            vec![1, 3, H],
            vec![2, -3, H],
            vec![3, H],
            vec![1, H],
            vec![2, H],
        ],
        RuleId::S6b => vec![vec![-1, -2, H], vec![1, 3], vec![2, 3], vec![1, H], vec![2, H], vec![-3, H]],
        RuleId::S6c => vec![vec![-1, -2], vec![1, 3], vec![2, 3, H], vec![1, H], vec![2, H], vec![-3, H]],
        RuleId::S6d => vec![
            vec![-1, -2, H, H],
            vec![1, 3],
            vec![1, 4],
            vec![2, 5],
            vec![2, 6],
            vec![3, 4],
            vec![5, 6],
            vec![-3, -5],
            vec![-4, H, H],
            vec![-6, H, H],
        ],
        _ => return None,
    })
}

/// A 3-occur formula made of a gadget on which `rule` applies, wired into
/// `background` extra variables that each occur twice positively and once
/// negatively.
pub fn planted(rule: RuleId, background: usize, seed: u64) -> Result<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let template = gadget(rule, &mut rng).ok_or_else(|| Error::Generation(format!("no gadget for rule {rule}")))?;
    let k = template.iter().flatten().map(|l| l.unsigned_abs()).max().unwrap_or(0);
    let holes = template.iter().flatten().filter(|&&l| l == H).count();
    if 3 * background < holes + 2 {
        return Err(Error::Generation(format!("{background} background variables cannot fill {holes} holes")));
    }
    'attempt: for _ in 0..64 {
        let mut pool: Vec<Slot> = (k + 1..=k + background as u32)
            .flat_map(|v| (0..3).map(move |i| Slot { var: v, positive: i < 2 }))
            .collect();
        pool.shuffle(&mut rng);
        let mut f = Formula::new();
        f.reserve_var(Var(k + background as u32));
        for row in &template {
            let mut lits: Vec<Lit> = row.iter().filter(|&&l| l != H).map(|&l| Lit::from_dimacs(l)).collect();
            for _ in 0..row.iter().filter(|&&l| l == H).count() {
                let Some(at) = pool.iter().position(|s| lits.iter().all(|l| l.var().0 != s.var)) else {
                    continue 'attempt;
                };
                let s = pool.swap_remove(at);
                lits.push(Lit::new(Var(s.var), s.positive));
            }
            f.add_clause(Clause::new(lits));
        }
        let Some(lengths) = clause_lengths(pool.len(), 2, 3, &mut rng) else { continue };
        let Some(rest) = deal(&pool, &lengths, 0.2, &mut rng) else { continue };
        for c in rest {
            f.add_clause(c);
        }
        return Ok(f);
    }
    Err(Error::Generation(format!("could not wire a gadget for rule {rule}")))
}

/// A 3-occur formula whose variables outside the all-negative clauses form
/// an autarkic set: about half the variables sit in all-negative clauses and
/// occur positively elsewhere; the rest only occur negatively next to a
/// positive literal of their own kind.
pub fn planted_autarky(n: usize, seed: u64) -> Result<Formula> {
    if n < 6 {
        return Err(Error::Generation(format!("need n >= 6, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inside = n / 2;
    'attempt: for _ in 0..64 {
        let mut groups: Vec<Vec<Slot>> = Vec::new();
        let mut negs: Vec<Slot> = (1..=inside as u32).map(|v| Slot { var: v, positive: false }).collect();
        negs.shuffle(&mut rng);
        for len in clause_lengths(inside, 2, 3, &mut rng).expect("three or more variables") {
            groups.push(negs.split_off(negs.len() - len));
        }
        let mut positives: Vec<Slot> = (1..=inside as u32)
            .flat_map(|v| [Slot { var: v, positive: true }; 2])
            .collect();
        let mut outside_pos: Vec<Slot> = Vec::new();
        let mut outside_neg: Vec<Slot> = Vec::new();
        for v in inside as u32 + 1..=n as u32 {
            let neg = rng.gen_bool(0.5);
            outside_neg.extend((neg).then_some(Slot { var: v, positive: false }));
            let pos = if neg { 2 } else { 3 };
            outside_pos.extend(std::iter::repeat_n(Slot { var: v, positive: true }, pos));
        }
        outside_pos.shuffle(&mut rng);
        for s in outside_neg {
            let Some(at) = outside_pos.iter().position(|t| t.var != s.var) else { continue 'attempt };
            let mut g = vec![s, outside_pos.swap_remove(at)];
            if rng.gen_bool(0.5) {
                if let Some(p) = positives.pop() {
                    g.push(p);
                }
            }
            groups.push(g);
        }
        positives.extend(outside_pos);
        positives.shuffle(&mut rng);
        let Some(lengths) = clause_lengths(positives.len(), 2, 3, &mut rng) else { continue };
        for len in lengths {
            groups.push(positives.split_off(positives.len() - len));
        }
        if groups.iter().any(|g| (1..g.len()).any(|i| g[..i].iter().any(|s| s.var == g[i].var))) {
            continue;
        }
        let mut f = Formula::new();
        f.reserve_var(Var(n as u32));
        for g in groups {
            f.add_clause(Clause::new(g.into_iter().map(|s| Lit::new(Var(s.var), s.positive))));
        }
        return Ok(f);
    }
    Err(Error::Generation("could not deal an autarkic instance".into()))
}
