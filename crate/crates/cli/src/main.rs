use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use occursat::dimacs::{emit, emit_with_comments, parse};
use occursat::gen::{random_3occur, random_bounded_degree, random_cnf, Profile};
use occursat::oracle::brute_force_sat_capped;
use occursat::rules::RuleId;
use occursat::solver::{solve, solve_observed, Observer, SolverConfig, TraceEvent, Verdict};
use occursat::tau::tau;
use occursat::transform::reduce_degree;
use occursat::Formula;

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNKNOWN: u8 = 30;
/// Largest formula the oracle is asked to decide.
const ORACLE_CAP: usize = 40;

#[derive(Parser)]
#[command(name = "occursat", version, about = "Exact SAT solving for formulas with at most three occurrences per variable")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a DIMACS file ("-" reads standard input).
    Solve {
        path: PathBuf,
        /// Print the model as "v" lines.
        #[arg(long)]
        model: bool,
        /// Write one JSON record per fired rule or branch to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Largest variable subset tried by safe resolution.
        #[arg(long, default_value_t = 10)]
        max_subset: usize,
        /// Give up with an unknown verdict after this many search nodes.
        #[arg(long, env = "OCCURSAT_BUDGET")]
        budget: Option<u64>,
        /// Print solver statistics as comment lines.
        #[arg(long)]
        stats: bool,
    },
    /// Rewrite a DIMACS file into an equisatisfiable one of maximum degree 3.
    Transform {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Branching factor of a branching vector.
    Tau {
        #[arg(required = true)]
        vector: Vec<u32>,
    },
    /// Print a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::Occur3)]
        kind: Kind,
        /// Clauses for `cnf` (default: 4.26 n).
        #[arg(long)]
        m: Option<usize>,
        /// Clause length for `cnf`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest degree for `bounded`.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Cross-check the solver against the brute-force oracle, on generated
    /// instances or on the given DIMACS files.
    Check {
        paths: Vec<PathBuf>,
        /// Solver output ("s" and "v" lines) whose model is checked against
        /// the single given file instead.
        #[arg(long, requires = "paths")]
        solution: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance family; `mixed` rotates through the others.
        #[arg(long, value_enum, default_value_t = Kind::Mixed)]
        kind: Kind,
        #[arg(long, hide = true)]
        fault: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Random formula with at most three occurrences per variable.
    Occur3,
    /// Every variable occurs twice positively and once negatively.
    Regular,
    /// Uniform random k-CNF.
    Cnf,
    /// Random CNF with bounded variable degree.
    Bounded,
    Mixed,
}

fn read_formula(path: &Path) -> Result<Formula, String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

struct TraceWriter {
    out: BufWriter<File>,
    failed: Option<io::Error>,
}

impl Observer for TraceWriter {
    fn event(&mut self, event: &TraceEvent) {
        if self.failed.is_some() {
            return;
        }
        let line = serde_json::to_string(event).expect("trace events serialize");
        if let Err(e) = writeln!(self.out, "{line}") {
            self.failed = Some(e);
        }
    }
}

fn print_model(out: &mut impl Write, model: &[bool], f: &Formula) -> io::Result<()> {
    let lits: Vec<String> = (1..=f.var_bound())
        .map(|v| if model[v as usize] { v.to_string() } else { format!("-{v}") })
        .chain(std::iter::once("0".to_string()))
        .collect();
    for chunk in lits.chunks(10) {
        writeln!(out, "v {}", chunk.join(" "))?;
    }
    Ok(())
}

fn cmd_solve(
    path: &Path,
    model: bool,
    trace: Option<&Path>,
    max_subset: usize,
    budget: Option<u64>,
    stats: bool,
) -> Result<u8, String> {
    let f = read_formula(path)?;
    let config = SolverConfig {
        max_subset,
        node_budget: budget,
        models: model,
        ..SolverConfig::default()
    };
    let result = match trace {
        Some(p) => {
            let file = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let mut w = TraceWriter {
                out: BufWriter::new(file),
                failed: None,
            };
            let r = solve_observed(&f, &config, &mut w);
            if let Some(e) = w.failed.take() {
                return Err(format!("{}: {e}", p.display()));
            }
            w.out.flush().map_err(|e| format!("{}: {e}", p.display()))?;
            r
        }
        None => solve(&f, &config),
    }
    .map_err(|e| e.to_string())?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| e.to_string();
    if stats {
        let json = serde_json::to_string(&result.stats).expect("stats serialize");
        writeln!(out, "c stats {json}").map_err(io_err)?;
    }
    match result.verdict {
        Verdict::Sat => {
            writeln!(out, "s SATISFIABLE").map_err(io_err)?;
            if let Some(m) = &result.model {
                print_model(&mut out, m, &f).map_err(io_err)?;
            }
            Ok(EXIT_SAT)
        }
        Verdict::Unsat => {
            writeln!(out, "s UNSATISFIABLE").map_err(io_err)?;
            Ok(EXIT_UNSAT)
        }
        Verdict::Unknown => {
            writeln!(out, "s UNKNOWN").map_err(io_err)?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_transform(path: &Path, max_degree: usize) -> Result<u8, String> {
    if max_degree != 3 {
        return Err(format!("only --max-degree 3 is supported, got {max_degree}"));
    }
    let f = read_formula(path)?;
    let t = reduce_degree(&f);
    let mut comments = vec![
        format!(
            "input: {} variables, max degree {}, average degree {:.3}",
            t.input.num_vars, t.input.max_degree, t.input.avg_degree
        ),
        format!(
            "output: {} variables, max degree {}, bound (d-2)n = {}",
            t.formula.num_vars(),
            t.formula.max_degree(),
            t.input.variable_bound()
        ),
    ];
    for (u, chain) in &t.chains {
        let fresh: Vec<String> = chain.iter().map(|v| v.0.to_string()).collect();
        comments.push(format!("chain {} {}", u.0, fresh.join(" ")));
    }
    print!("{}", emit_with_comments(&t.formula, &comments));
    Ok(0)
}

fn cmd_tau(vector: &[u32]) -> Result<u8, String> {
    let t = tau(vector).map_err(|e| e.to_string())?;
    println!("{t:.6}");
    Ok(0)
}

fn generate(kind: Kind, n: usize, seed: u64, m: Option<usize>, k: usize, max_degree: usize) -> Result<Formula, String> {
    let kind = match kind {
        Kind::Mixed => [Kind::Occur3, Kind::Regular, Kind::Cnf, Kind::Bounded][(seed % 4) as usize],
        other => other,
    };
    let m = m.unwrap_or((n as f64 * 4.26).round() as usize);
    match kind {
        Kind::Occur3 => random_3occur(n, &Profile::default(), seed),
        Kind::Regular => random_3occur(n, &Profile::regular_21(), seed),
        Kind::Cnf => random_cnf(n, m, k, seed),
        Kind::Bounded => random_bounded_degree(n, 1, max_degree, 2, k.max(2).min(n), seed),
        Kind::Mixed => unreachable!("resolved above"),
    }
    .map_err(|e| e.to_string())
}

fn cmd_check(count: u64, n: usize, seed: u64, kind: Kind, fault: Option<&str>) -> Result<u8, String> {
    let fault = match fault {
        Some(name) => Some(
            RuleId::ALL
                .into_iter()
                .find(|r| r.name().eq_ignore_ascii_case(name))
                .ok_or_else(|| format!("unknown rule `{name}`"))?,
        ),
        None => None,
    };
    let config = SolverConfig {
        fault,
        ..SolverConfig::default()
    };
    let mut disagreements = 0;
    for s in seed..seed + count {
        let f = generate(kind, n, s, None, 3, 6)?;
        let problem = cross_check(&f, &config);
        if let Some(p) = problem {
            disagreements += 1;
            println!("seed {s}: {p}");
        }
    }
    println!("{disagreements} disagreements");
    Ok(if disagreements == 0 { 0 } else { 1 })
}

/// Solves `f` and compares with the oracle when `f` is small enough for it.
/// Returns a description of any problem.
fn cross_check(f: &Formula, config: &SolverConfig) -> Option<String> {
    let expected = match brute_force_sat_capped(f, ORACLE_CAP) {
        Ok(r) => Some(r.is_some()),
        Err(_) => None,
    };
    let v = match solve(f, config) {
        Ok(v) => v,
        Err(e) => return Some(e.to_string()),
    };
    if v.verdict == Verdict::Unknown {
        return Some("no verdict".to_string());
    }
    if let Some(m) = &v.model {
        if !f.is_satisfied_by(m) {
            return Some("model does not satisfy the formula".to_string());
        }
    }
    match expected {
        Some(e) if e != v.is_sat() => Some(format!(
            "solver says {:?}, oracle says {}",
            v.verdict,
            if e { "SAT" } else { "UNSAT" }
        )),
        _ => None,
    }
}

fn cmd_check_files(paths: &[PathBuf]) -> Result<u8, String> {
    let config = SolverConfig {
        models: true,
        ..SolverConfig::default()
    };
    let mut disagreements = 0;
    for path in paths {
        let f = read_formula(path)?;
        if let Some(p) = cross_check(&f, &config) {
            disagreements += 1;
            println!("{}: {p}", path.display());
        }
    }
    println!("{disagreements} disagreements");
    Ok(if disagreements == 0 { 0 } else { 1 })
}

/// Reads the "s" line and the "v" literals of a solver output.
fn parse_solution(text: &str) -> Result<(Option<bool>, Vec<i64>), String> {
    let mut status = None;
    let mut lits = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                _ => None,
            };
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    Ok((status, lits))
}

fn cmd_check_solution(path: &Path, solution: &Path) -> Result<u8, String> {
    let f = read_formula(path)?;
    let text = std::fs::read_to_string(solution).map_err(|e| format!("{}: {e}", solution.display()))?;
    let (status, lits) = parse_solution(&text)?;
    match status {
        Some(true) => {
            let mut model = vec![false; f.var_bound() as usize + 1];
            for l in lits {
                if let Some(slot) = model.get_mut(l.unsigned_abs() as usize) {
                    *slot = l > 0;
                }
            }
            let falsified = f.clauses().filter(|(_, c)| !c.is_satisfied_by(&model)).count();
            if falsified == 0 {
                println!("model satisfies all {} clauses", f.num_clauses());
                Ok(0)
            } else {
                println!("model falsifies {falsified} of {} clauses", f.num_clauses());
                Ok(1)
            }
        }
        Some(false) => match brute_force_sat_capped(&f, ORACLE_CAP) {
            Ok(Some(_)) => {
                println!("claimed unsatisfiable, oracle found a model");
                Ok(1)
            }
            Ok(None) => {
                println!("unsatisfiable, confirmed by the oracle");
                Ok(0)
            }
            Err(_) => {
                println!("unsatisfiable claim not checked: too many variables for the oracle");
                Ok(0)
            }
        },
        None => Err(format!("{}: no \"s SATISFIABLE\" or \"s UNSATISFIABLE\" line", solution.display())),
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Solve {
            path,
            model,
            trace,
            max_subset,
            budget,
            stats,
        } => cmd_solve(&path, model, trace.as_deref(), max_subset, budget, stats),
        Command::Transform { path, max_degree } => cmd_transform(&path, max_degree),
        Command::Tau { vector } => cmd_tau(&vector),
        Command::Gen {
            n,
            seed,
            kind,
            m,
            k,
            max_degree,
        } => {
            let f = generate(kind, n, seed, m, k, max_degree)?;
            print!("{}", emit(&f));
            Ok(0)
        }
        Command::Check {
            paths,
            solution: Some(solution),
            ..
        } => match paths.as_slice() {
            [path] => cmd_check_solution(path, &solution),
            _ => Err("--solution takes exactly one formula".into()),
        },
        Command::Check {
            paths,
            solution: None,
            count,
            n,
            seed,
            kind,
            fault,
        } => {
            if paths.is_empty() {
                cmd_check(count, n, seed, kind, fault.as_deref())
            } else {
                cmd_check_files(&paths)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
