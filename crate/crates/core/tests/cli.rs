use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fair-kset")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn gen_to(path: &Path, args: &[&str]) {
    let mut full = vec!["gen", "-o", path.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gen_then_solve_reports_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pc.json");
    gen_to(&file, &["--family", "path-cycle", "--components", "path:3,cycle:4", "--k", "3"]);
    let o = run(&["solve", file.to_str().unwrap(), "--alg", "auto"]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["routed"], "delta2");
    assert_eq!(report["value"], report["oracle"]);
    assert_eq!(report["chosen"].as_array().unwrap().len(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("algorithm"));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let args = ["gen", "--family", "random-bipartite", "--n", "6", "--m", "8", "--delta", "3", "--k", "3", "--weights", "uniform:1:2"];
    let a = run(&[&args[..], &["--seed", "9"]].concat());
    let b = run(&[&args[..], &["--seed", "9"]].concat());
    let c = run(&[&args[..], &["--seed", "10"]].concat());
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn lp_reports_threshold_and_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gap.json");
    gen_to(&file, &["--family", "gap", "--k", "3"]);
    let v = json(&run(&["lp", file.to_str().unwrap()]));
    assert_eq!(v["t_star"], 1.0);
    assert_eq!(v["x"].as_array().unwrap().len(), 9);
    assert!(v["residuals"]["row"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn round_writes_marginals_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gap.json");
    let csv = dir.path().join("freq.csv");
    gen_to(&file, &["--family", "gap", "--k", "2"]);
    let o = run(&["round", file.to_str().unwrap(), "--alg", "pipage", "--trials", "300", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["feasible_rate"], 1.0);
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("marginal")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("pair")).count(), 6);
}

#[test]
fn bench_without_timing_is_reproducible() {
    let args = ["bench", "--seeds", "2", "--m", "6", "--omit-timing", "--families", "path-cycle,random-laminar", "--algs", "auto,pipage"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    assert!(text.lines().skip(1).all(|l| l.ends_with(',')));

    let lll = run(&["bench", "--seeds", "5", "--m", "8", "--families", "path-cycle,random-bipartite,random-laminar", "--algs", "lll,pipage"]);
    let text = stdout(&lll);
    assert_eq!(text.lines().count(), 1 + 30);
    assert!(text.lines().filter(|l| l.contains(",lll,")).all(|l| l.contains(",true,")));
}

#[test]
fn verify_passes_small_suite() {
    let o = run(&["verify", "gap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite,case,measure,value,bound,pass"));
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["solve", missing.to_str().unwrap()]).status.code(), Some(1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":1,"m":2,"k":3,"adj":[[0]]}"#).unwrap();
    assert_eq!(run(&["solve", bad.to_str().unwrap()]).status.code(), Some(1));

    // Independent rounding needs at least 16 agents.
    let small = dir.path().join("small.json");
    std::fs::write(&small, r#"{"n":2,"m":2,"k":1,"adj":[[0,1],[1]]}"#).unwrap();
    assert_eq!(run(&["solve", small.to_str().unwrap(), "--alg", "independent"]).status.code(), Some(2));

    assert_eq!(run(&["solve", small.to_str().unwrap(), "--alg", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}
