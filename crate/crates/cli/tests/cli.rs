use std::path::Path;
use std::process::{Command, Output};

use occursat::dimacs::parse;

fn occursat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occursat"))
        .args(args)
        .env_remove("OCCURSAT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_sat_and_unsat_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.cnf", "p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n");
    let o = occursat(&["solve", &sat]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("s SATISFIABLE"));

    let unsat = write(dir.path(), "unsat.cnf", "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n");
    let o = occursat(&["solve", &unsat]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).contains("s UNSATISFIABLE"));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cnf", "p cnf 2 1\n1 x 0\n");
    assert_eq!(occursat(&["solve", &bad]).status.code(), Some(1));
    assert_eq!(occursat(&["solve", "/nonexistent/file.cnf"]).status.code(), Some(1));
    assert_eq!(occursat(&["tau"]).status.code(), Some(1));
    assert_eq!(occursat(&["tau", "0"]).status.code(), Some(1));
    assert_eq!(occursat(&["tau", "x"]).status.code(), Some(1));
}

#[test]
fn model_lines_satisfy_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(occursat(&["gen", "--n", "18", "--seed", "4", "--kind", "regular"]).stdout).unwrap();
    let path = write(dir.path(), "g.cnf", &text);
    let o = occursat(&["solve", "--model", &path]);
    let f = parse(&text).unwrap();
    if o.status.code() == Some(10) {
        let mut model = vec![false; f.var_bound() as usize + 1];
        let mut ended = false;
        for line in stdout(&o).lines().filter(|l| l.starts_with("v ")) {
            for tok in line[2..].split_whitespace() {
                let l: i64 = tok.parse().unwrap();
                if l == 0 {
                    ended = true;
                } else {
                    model[l.unsigned_abs() as usize] = l > 0;
                }
            }
        }
        assert!(ended);
        assert!(f.is_satisfied_by(&model));
    } else {
        assert_eq!(o.status.code(), Some(20));
    }
}

#[test]
fn trace_records_are_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(occursat(&["gen", "--n", "40", "--seed", "2", "--kind", "regular"]).stdout).unwrap();
    let path = write(dir.path(), "g.cnf", &text);
    let trace = dir.path().join("trace.jsonl");
    let o = occursat(&["solve", "--trace", trace.to_str().unwrap(), &path]);
    assert!(matches!(o.status.code(), Some(10) | Some(20)));
    let body = std::fs::read_to_string(&trace).unwrap();
    assert!(!body.is_empty());
    for line in body.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["step"].is_u64() && v["rule"].is_string() && v["depth"].is_u64());
        if v["rule"] == "branch" {
            assert!(v["tau"].as_f64().unwrap() <= 1.1199 + 1e-9);
            assert!(v["vector"].is_array());
        }
    }
}

#[test]
fn budget_gives_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(occursat(&["gen", "--n", "60", "--seed", "1", "--kind", "regular"]).stdout).unwrap();
    let path = write(dir.path(), "g.cnf", &text);
    let o = occursat(&["solve", "--budget", "0", &path]);
    assert_eq!(o.status.code(), Some(30));
    assert!(stdout(&o).contains("s UNKNOWN"));
    let o = Command::new(env!("CARGO_BIN_EXE_occursat"))
        .args(["solve", &path])
        .env("OCCURSAT_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(30));
}

#[test]
fn tau_values() {
    assert_eq!(stdout(&occursat(&["tau", "1", "1"])).trim(), "2.000000");
    let t: f64 = stdout(&occursat(&["tau", "6", "7"])).trim().parse().unwrap();
    assert!((t - 1.11278).abs() < 1e-4);
    let t: f64 = stdout(&occursat(&["tau", "5", "8"])).trim().parse().unwrap();
    assert!((t - 1.1148).abs() < 1e-4);
}

#[test]
fn gen_is_deterministic() {
    let a = occursat(&["gen", "--n", "30", "--seed", "1"]);
    let b = occursat(&["gen", "--n", "30", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = occursat(&["gen", "--n", "12", "--seed", "3", "--kind", "cnf", "--m", "30"]);
    assert_eq!(parse(&stdout(&c)).unwrap().num_clauses(), 30);
}

#[test]
fn transform_reaches_degree_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(
        occursat(&["gen", "--n", "10", "--seed", "5", "--kind", "bounded", "--max-degree", "5"]).stdout,
    )
    .unwrap();
    let input = parse(&text).unwrap();
    let path = write(dir.path(), "g.cnf", &text);
    let o = occursat(&["transform", &path]);
    assert!(o.status.success());
    let out = stdout(&o);
    let f = parse(&out).unwrap();
    assert!(f.max_degree() <= 3);
    assert!(out.contains("bound (d-2)n"));
    let d = input.max_degree();
    if d >= 3 {
        assert!(f.num_vars() <= (d - 2) * input.num_vars());
    }

    // Already 3-occur: same clauses back.
    let path = write(dir.path(), "three.cnf", "p cnf 3 3\n1 2 0\n-1 3 0\n1 2 3 0\n");
    let o = occursat(&["transform", &path]);
    let f = parse(&stdout(&o)).unwrap();
    assert_eq!(f.to_dimacs_clauses(), vec![vec![1, 2], vec![-1, 3], vec![1, 2, 3]]);
}

#[test]
fn check_reports_zero_disagreements() {
    let o = occursat(&["check", "--count", "1000", "--n", "16", "--seed", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("0 disagreements"));
}

#[test]
fn check_catches_a_broken_rule() {
    let o = occursat(&["check", "--count", "60", "--n", "14", "--seed", "7", "--kind", "occur3", "--fault", "S4b"]);
    assert!(!o.status.success());
    let out = stdout(&o);
    assert!(out.contains("seed "), "{out}");
}

#[test]
fn check_files_and_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.cnf", "p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n");
    let b = write(dir.path(), "b.cnf", "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n");
    let o = occursat(&["check", &a, &b]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 disagreements"));

    let solved = occursat(&["solve", "--model", &a]);
    let sol = write(dir.path(), "a.out", &stdout(&solved));
    let o = occursat(&["check", &a, "--solution", &sol]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("satisfies all 3 clauses"));

    let wrong = write(dir.path(), "wrong.out", "s SATISFIABLE\nv 1 2 3 0\n");
    assert_eq!(occursat(&["check", &a, "--solution", &wrong]).status.code(), Some(1));
    let lie = write(dir.path(), "lie.out", "s UNSATISFIABLE\n");
    assert_eq!(occursat(&["check", &a, "--solution", &lie]).status.code(), Some(1));
    let unsat = stdout(&occursat(&["solve", &b]));
    let ok = write(dir.path(), "b.out", &unsat);
    assert!(occursat(&["check", &b, "--solution", &ok]).status.success());
}
