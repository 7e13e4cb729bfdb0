use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cms::json::{instance_to_json, parse_instance};
use cms::model::{Configuration, Instance, Job};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cms-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn cms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cms")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_instance(dir: &Path, name: &str, inst: &Instance) -> String {
    let path = dir.join(name);
    fs::write(&path, instance_to_json(inst).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn t1() -> Instance {
    Instance::combinatorial(
        vec!["b1".into()],
        vec![Configuration::new(vec![1])],
        vec![Job::new("j1", 5, vec![5])],
    )
}

#[test]
fn gen_tight_family() {
    let out = cms(&["gen", "--kind", "tight-greedy", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let inst = parse_instance(&stdout(&out)).unwrap().instance;
    assert_eq!(inst.n_blocks(), 4);
    assert_eq!(inst.n_jobs(), 3);

    let bad = cms(&["gen", "--kind", "tight-greedy", "--n", "1"]);
    assert_eq!(bad.status.code(), Some(5));
}

#[test]
fn gen_is_deterministic() {
    let dir = workdir("gen");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let out = cms(&["gen", "--kind", "random", "--seed", "1", "-o", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn empty_instance_round_trip() {
    let dir = workdir("empty");
    let path = dir.join("empty.json");
    let p = path.to_str().unwrap();
    assert_eq!(cms(&["gen", "--kind", "random", "--n", "0", "-o", p]).status.code(), Some(0));
    assert_eq!(cms(&["validate", "-i", p]).status.code(), Some(0));
    let out = cms(&["oracle", "-i", p]);
    assert_eq!(stdout(&out).trim(), "opt=0");
}

#[test]
fn solve_exact_and_validate() {
    let dir = workdir("solve");
    let input = write_instance(&dir, "t1.json", &t1());
    let sched = dir.join("s.json");
    let out = cms(&["solve", "--alg", "exact", "-i", &input, "-o", sched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "cost=1 feasible=true");

    let out = cms(&["validate", "-i", &input, "-s", sched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cost=1 feasible=true"));
}

#[test]
fn validate_reports_an_underserved_schedule() {
    let dir = workdir("short");
    let two = Instance::combinatorial(
        vec!["b1".into()],
        vec![Configuration::new(vec![1])],
        vec![Job::new("j1", 5, vec![5]), Job::new("j2", 5, vec![5])],
    );
    let input = write_instance(&dir, "two.json", &two);
    let single = write_instance(&dir, "t1.json", &t1());
    let sched = dir.join("s.json");
    cms(&["solve", "--alg", "exact", "-i", &single, "-o", sched.to_str().unwrap()]);
    let out = cms(&["validate", "-i", &input, "-s", sched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("feasible=false"));
}

#[test]
fn solve_greedy_log_with_ratio() {
    let dir = workdir("ratio");
    let fam = dir.join("fam.json");
    cms(&["gen", "--kind", "tight-greedy", "--n", "3", "-o", fam.to_str().unwrap()]);
    let out = cms(&["solve", "--alg", "greedy-log", "-i", fam.to_str().unwrap(), "--opt"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields.len(), 4);
    assert_eq!(fields[1], "feasible=true");
    assert_eq!(fields[2], "opt=2");
    let cost: f64 = fields[0].strip_prefix("cost=").unwrap().parse().unwrap();
    let ratio: f64 = fields[3].strip_prefix("ratio=").unwrap().parse().unwrap();
    assert!((ratio - cost / 2.0).abs() < 1e-4);
}

#[test]
fn every_algorithm_solves_its_kind() {
    let dir = workdir("algs");
    let comb = write_instance(&dir, "t1.json", &t1());
    for alg in ["greedy-log", "fixed", "ptas", "exact", "dp"] {
        let out = cms(&["solve", "--alg", alg, "-i", &comb, "--epsilon", "1/2"]);
        assert_eq!(out.status.code(), Some(0), "{alg}");
        assert!(stdout(&out).contains("feasible=true"), "{alg}");
    }
    let num = write_instance(&dir, "num.json", &Instance::numerical(4, vec![Job::new("j", 6, vec![1, 3, 4, 5])]));
    for alg in ["numerical", "exact", "dp"] {
        let out = cms(&["solve", "--alg", alg, "-i", &num, "--epsilon", "0.5"]);
        assert_eq!(stdout(&out).trim(), "cost=1 feasible=true", "{alg}");
    }
    for alg in ["fixed", "greedy-log", "ptas"] {
        assert_eq!(cms(&["solve", "--alg", alg, "-i", &num]).status.code(), Some(6), "{alg}");
    }
    assert_eq!(cms(&["solve", "--alg", "numerical", "-i", &comb]).status.code(), Some(6));
}

#[test]
fn error_exit_codes() {
    let dir = workdir("errors");
    let dead = Instance::combinatorial(
        vec!["b1".into()],
        vec![Configuration::new(vec![1])],
        vec![Job::new("j1", 5, vec![0])],
    );
    let dead = write_instance(&dir, "dead.json", &dead);
    assert_eq!(cms(&["solve", "--alg", "exact", "-i", &dead]).status.code(), Some(2));
    assert_eq!(cms(&["solve", "--alg", "greedy-log", "-i", &dead]).status.code(), Some(2));

    let missing = dir.join("missing.json");
    assert_eq!(cms(&["validate", "-i", missing.to_str().unwrap()]).status.code(), Some(5));
    let garbage = dir.join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(cms(&["oracle", "-i", garbage.to_str().unwrap()]).status.code(), Some(5));
    assert_eq!(cms(&["solve", "--alg", "nope", "-i", "x"]).status.code(), Some(5));
    assert_eq!(cms(&["bench", "--suite", "huge"]).status.code(), Some(5));

    let fam = dir.join("fam.json");
    cms(&["gen", "--kind", "tight-greedy", "--n", "4", "-o", fam.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_cms"))
        .args(["oracle", "-i", fam.to_str().unwrap()])
        .env("CMS_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_tight_suite() {
    let dir = workdir("bench");
    let csv = dir.join("rows.csv");
    let out = cms(&["bench", "--suite", "tight", "--trials", "1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().skip(1).filter(|l| l.starts_with("tight-")).collect();
    let csv = fs::read_to_string(csv).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(body.len(), 12);
    assert_eq!(rows.len(), body.len());
    for (t, c) in body.iter().zip(&rows) {
        let t: Vec<&str> = t.split_whitespace().collect();
        let c: Vec<&str> = c.split(',').collect();
        assert_eq!(t[..3], c[..3]);
    }
    for n in 3..=6 {
        for alg in ["exact", "fixed", "greedy-log"] {
            assert!(rows.iter().any(|r| r.starts_with(&format!("tight-{n},{alg},"))));
        }
    }
}

#[test]
fn bench_empty_suite() {
    let out = cms(&["bench", "--suite", "small", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 rows"));
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cms::cli::run(["cms", "gen", "--kind", "numerical-random", "--seed", "3"], &mut out, &mut err);
    assert_eq!(code, 0);
    let inst = parse_instance(std::str::from_utf8(&out).unwrap()).unwrap().instance;
    assert!(inst.is_numerical());

    let mut out = Vec::new();
    assert_eq!(cms::cli::run(["cms", "--help"], &mut out, &mut err), 0);
    assert!(String::from_utf8(out).unwrap().contains("bench"));
}
