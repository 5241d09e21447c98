use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use osc_optimizer::oracle::check;
use osc_optimizer::problem::{ProblemInstance, Witness};

fn oscopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscopt"))
        .args(args)
        .env_remove("OSCOPT_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Random 3-SAT formula satisfied by a planted assignment.
fn planted_dimacs(vars: usize, clauses: usize) -> (String, Vec<bool>) {
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let plant: Vec<bool> = (0..vars).map(|_| next() & 1 == 1).collect();
    let mut text = format!("c planted\np cnf {vars} {clauses}\n");
    let mut made = 0;
    while made < clauses {
        let mut lits = Vec::new();
        while lits.len() < 3 {
            let v = (next() % vars as u64) as usize;
            if lits.iter().any(|&(u, _)| u == v) {
                continue;
            }
            lits.push((v, next() & 1 == 1));
        }
        if !lits.iter().any(|&(v, pos)| plant[v] == pos) {
            continue;
        }
        for (v, pos) in lits {
            let x = v as i64 + 1;
            text.push_str(&format!("{} ", if pos { x } else { -x }));
        }
        text.push_str("0\n");
        made += 1;
    }
    (text, plant)
}

#[test]
fn predict_sat_network() {
    let o = oscopt(&["predict", "sat", "--vars", "110", "--clauses", "1400"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("8733 connections, 5933 merged"), "{}", stdout(&o));
}

#[test]
fn predict_hamilton_path_rows() {
    let o = oscopt(&["predict", "hamilton-path", "--n", "5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for row in ["mixed,derived,", "mixed,printed,", "3sat,derived,", "3sat,printed,"] {
        assert!(out.contains(row), "missing {row}: {out}");
    }
}

#[test]
fn predict_refuses_small_clique() {
    let o = oscopt(&["predict", "clique", "--n", "3", "--k", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("n > 3"), "{}", stderr(&o));
}

#[test]
fn predict_from_instance() {
    let o = oscopt(&["predict", "--instance", p(&fixture("clique_k4")), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["table"], "clique");
}

#[test]
fn solve_planted_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let (text, _) = planted_dimacs(20, 60);
    let cnf = dir.path().join("f.cnf");
    fs::write(&cnf, &text).unwrap();
    let out = dir.path().join("out");
    let o = oscopt(&["solve", p(&cnf), "--restarts", "32", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));

    let sol: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("solution.json")).unwrap()).unwrap();
    for key in ["kind", "feasible", "witness", "objective", "energy", "seed"] {
        assert!(sol.get(key).is_some(), "solution lacks {key}");
    }
    let w: Witness = serde_json::from_value(sol["witness"].clone()).unwrap();
    let f = osc_optimizer::cnf::parse_dimacs(&text).unwrap();
    assert!(check(&ProblemInstance::from_cnf(&f), &w).unwrap());

    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("step,energy\n"));
    assert!(!trace.contains('\r'));

    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let outputs: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(outputs.iter().any(|o| o.ends_with("solution.json")));
    assert!(outputs.iter().any(|o| o.ends_with("trace.csv")));

    let v = oscopt(&["verify", p(&cnf), p(&out.join("solution.json"))]);
    assert_eq!(code(&v), 0);
}

#[test]
fn malformed_dimacs_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("bad.cnf");
    fs::write(&cnf, "p cnf 2 2\n1 -2 0\n2 q 0\n").unwrap();
    let o = oscopt(&["solve", p(&cnf), "--out", p(&dir.path().join("o"))]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn maze_path_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = oscopt(&["solve", p(&fixture("maze_serpentine_3x3")), "--out", p(dir.path())]);
    assert_eq!(code(&o), 0);
    let sol: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("solution.json")).unwrap()).unwrap();
    let order: Vec<u64> = serde_json::from_value(sol["witness"]["order"].clone()).unwrap();
    assert_eq!(order, vec![0, 3, 6, 7, 4, 1, 2, 5, 8]);
}

#[test]
fn sealed_maze_reports_none() {
    let dir = tempfile::tempdir().unwrap();
    let o = oscopt(&["solve", p(&fixture("maze_sealed")), "--out", p(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    let inst = fixture("tsp_random_0");
    for out in [&a, &b] {
        assert_eq!(code(&oscopt(&["solve", p(&inst), "--seed", "11", "--out", p(out)])), 0);
    }
    assert_eq!(code(&oscopt(&["rerun", p(&a.join("manifest.json")), "--out", p(&c)])), 0);
    for file in ["solution.json", "trace.csv"] {
        let x = fs::read(a.join(file)).unwrap();
        assert_eq!(x, fs::read(b.join(file)).unwrap(), "{file}");
        assert_eq!(x, fs::read(c.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn kuramoto_engine_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = oscopt(&[
        "solve",
        p(&fixture("sat_random_0")),
        "--engine",
        "kuramoto",
        "--restarts",
        "4",
        "--time",
        "20",
        "--out",
        p(dir.path()),
    ]);
    assert!(matches!(code(&o), 0 | 2), "{}", stderr(&o));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.json");
    let other = dir.path().join("other.json");
    fs::write(&good, r#"{"order":[0,3,6,7,4,1,2,5,8]}"#).unwrap();
    fs::write(&bad, r#"{"order":[0,1,2,5,8]}"#).unwrap();
    fs::write(&other, r#"{"kind":"tsp","feasible":true,"witness":{"order":[0,1,2]}}"#).unwrap();
    let maze = fixture("maze_serpentine_3x3");
    assert_eq!(code(&oscopt(&["verify", p(&maze), p(&good)])), 0);
    assert_eq!(code(&oscopt(&["verify", p(&maze), p(&bad)])), 2);
    assert_eq!(code(&oscopt(&["verify", p(&maze), p(&other)])), 1);
}

fn copy_fixtures(dir: &Path, names: &[&str]) {
    for n in names {
        fs::copy(fixture(n), dir.join(format!("{n}.json"))).unwrap();
    }
}

#[test]
fn corpus_subset_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path(), &["sat_random_0", "sat_contradiction", "maze_serpentine_3x3", "maze_sealed"]);
    let o = oscopt(&["corpus", p(dir.path()), "--restarts", "8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("4 fixtures, 0 with problems"));
}

#[test]
fn corpus_flags_mislabelled_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("sat_contradiction")).unwrap();
    let flipped = text.replace("\"expect_feasible\": false", "\"expect_feasible\": true");
    assert_ne!(text, flipped);
    fs::write(dir.path().join("sat_contradiction.json"), flipped).unwrap();
    let o = oscopt(&["corpus", p(dir.path()), "--restarts", "4"]);
    assert_ne!(code(&o), 0);
    assert!(stdout(&o).contains("FAIL sat_contradiction"));
}

#[test]
fn corpus_empty_dir() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&oscopt(&["corpus", p(dir.path())])), 1);
}

#[test]
fn usage_error_is_exit_one() {
    assert_eq!(code(&oscopt(&["solve"])), 1);
}
