//! Command-line front end. Exit codes: 0 success, 1 bad input, 2 solver
//! failure, 3 a verification or guarantee check failed.

pub mod bench;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::brute_force_opt;
use crate::gen::{BipartiteParams, ComponentKind, GenSpec, WeightSpec};
use crate::instance::Instance;
use crate::io::InstanceDoc;
use crate::lp::{self, Doubling, Residuals};
use crate::rounding::trials::JOINT_LIMIT;
use crate::rounding::{run_trials, Algorithm, LllOptions};
use crate::solve::{prepare, solve, Method, Preparation, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fair-kset", version, about = "Select k candidates minimizing the worst agent disagreement")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve an instance and report the selection.
    Solve(SolveArgs),
    /// Solve the LP relaxation and print the fractional point.
    Lp {
        file: PathBuf,
    },
    /// Round the LP point many times and report empirical marginals.
    Round(RoundArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
    /// Run a benchmark grid and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    edge_prob: Option<f64>,
    #[arg(long)]
    elements: Option<usize>,
    #[arg(long)]
    sets: Option<usize>,
    /// Comma-separated components such as `path:3,cycle:4`.
    #[arg(long)]
    components: Option<String>,
    /// `unit`, `uniform:LO:HI` or `int:LO:HI`.
    #[arg(long, default_value = "unit")]
    weights: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "auto")]
    alg: String,
    /// Skip the brute-force optimum.
    #[arg(long)]
    no_oracle: bool,
    #[arg(long, default_value_t = crate::exact::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Overrides the LLL sampling boost.
    #[arg(long)]
    boost: Option<f64>,
    /// Resampling budget for the LLL phase.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct RoundArgs {
    file: PathBuf,
    #[arg(long, default_value = "pipage")]
    alg: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Write per-candidate and per-pair frequencies here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(default_value = "all")]
    suite: String,
    /// Instances per class, or rounding trials for statistical suites.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 10)]
    max_m: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = bench::FAMILIES.map(String::from))]
    families: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = ["auto".to_string(), "lll".into(), "pipage".into()])]
    algs: Vec<String>,
    /// Number of seeds per family, starting at `--seed`.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    delta: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "unit")]
    weights: String,
    #[arg(long, default_value_t = 16)]
    oracle_cap: usize,
    /// Leave the timing column empty so output is reproducible.
    #[arg(long)]
    omit_timing: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs the CLI on the process arguments.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen(a) => gen(a, seed),
        Command::Solve(a) => solve_cmd(a, seed),
        Command::Lp { file } => lp_cmd(&InstanceDoc::read(&file)?.to_instance()?),
        Command::Round(a) => round_cmd(a, seed),
        Command::Verify(a) => verify_cmd(a, seed),
        Command::Bench(a) => bench_cmd(a, seed),
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn parse_weights(s: &str) -> Result<WeightSpec> {
    let bad = || Error::InvalidParameters(format!("bad weight spec `{s}` (unit, uniform:LO:HI or int:LO:HI)"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["unit"] => Ok(WeightSpec::Unit),
        ["uniform", lo, hi] => Ok(WeightSpec::Uniform {
            lo: lo.parse().map_err(|_| bad())?,
            hi: hi.parse().map_err(|_| bad())?,
        }),
        ["int", lo, hi] => Ok(WeightSpec::Integer {
            lo: lo.parse().map_err(|_| bad())?,
            hi: hi.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

pub fn parse_components(s: &str) -> Result<Vec<(ComponentKind, usize)>> {
    s.split(',')
        .map(|part| {
            let bad = || Error::InvalidParameters(format!("bad component `{part}` (path:LEN or cycle:LEN)"));
            let (kind, len) = part.trim().split_once(':').ok_or_else(bad)?;
            let kind = match kind {
                "path" => ComponentKind::Path,
                "cycle" => ComponentKind::Cycle,
                _ => return Err(bad()),
            };
            Ok((kind, len.parse().map_err(|_| bad())?))
        })
        .collect()
}

fn required<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameters(format!("family `{family}` needs --{flag}")))
}

fn gen_spec(a: &GenArgs) -> Result<GenSpec> {
    let f = a.family.as_str();
    let weights = parse_weights(&a.weights)?;
    Ok(match f {
        "gap" => GenSpec::Gap { k: required(a.k, "k", f)? },
        "incidence" => GenSpec::Incidence {
            vertices: required(a.vertices, "vertices", f)?,
            edge_prob: required(a.edge_prob, "edge-prob", f)?,
            k: required(a.k, "k", f)?,
        },
        "random-bipartite" => GenSpec::RandomBipartite(BipartiteParams {
            n: required(a.n, "n", f)?,
            m: required(a.m, "m", f)?,
            max_degree: required(a.delta, "delta", f)?,
            k: required(a.k, "k", f)?,
            weights,
        }),
        "random-laminar" => GenSpec::RandomLaminar {
            elements: required(a.elements, "elements", f)?,
            sets: required(a.sets, "sets", f)?,
            k: required(a.k, "k", f)?,
            weights,
        },
        "path-cycle" => GenSpec::PathCycle {
            components: parse_components(&required(a.components.clone(), "components", f)?)?,
            k: required(a.k, "k", f)?,
            weights,
        },
        _ => {
            return Err(Error::InvalidParameters(format!(
                "unknown family `{f}` (gap, incidence, random-bipartite, random-laminar, path-cycle)"
            )))
        }
    })
}

fn gen(a: GenArgs, seed: u64) -> Result<i32> {
    let doc = gen_spec(&a)?.generate(seed)?;
    let mut text = doc.to_json();
    text.push('\n');
    write_or_print(a.output.as_ref(), &text)?;
    Ok(EXIT_OK)
}

fn solve_cmd(a: SolveArgs, seed: u64) -> Result<i32> {
    let doc = InstanceDoc::read(&a.file)?;
    let instance = doc.to_instance()?;
    let alg: Method = a.alg.parse()?;
    let options = SolveOptions {
        seed,
        oracle_cap: a.oracle_cap,
        lll: LllOptions { boost: a.boost, budget: a.budget },
    };
    let start = Instant::now();
    let solved = solve(&doc, alg, &options)?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let oracle = if a.no_oracle || instance.n_candidates > a.oracle_cap {
        None
    } else {
        Some(brute_force_opt(&instance, true, a.oracle_cap)?.value)
    };
    let report = report::RunReport::new(&instance, alg, seed, &solved, oracle, millis);
    eprint!("{}", report.table());
    print_json(&report)?;
    Ok(if report.feasible && report.bound_ok != Some(false) { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Serialize)]
struct LpReport {
    t_star: f64,
    weighted: bool,
    /// One coordinate per original candidate; isolated candidates sit at 1.
    x: Vec<f64>,
    residuals: Residuals,
}

/// Fractional point in original indices with its threshold.
pub fn lp_point(instance: &Instance) -> Result<(f64, Vec<f64>)> {
    let pre = instance.preprocess();
    let mut x = vec![0.0; instance.n_candidates];
    for &v in &pre.readded {
        x[v] = 1.0;
    }
    let Some(residual) = &pre.residual else { return Ok((0.0, x)) };
    let (t, rx) = if residual.is_unit_weight() {
        let s = lp::guess_tstar_unweighted(residual)?;
        (s.t_star, s.x)
    } else {
        match lp::doubling(residual)? {
            Doubling::ZeroWeight(sel) => {
                let mut rx = vec![0.0; residual.n_candidates];
                for v in sel.chosen {
                    rx[v] = 1.0;
                }
                (0.0, rx)
            }
            Doubling::Bound(s) => (s.t_star, s.x),
        }
    };
    for (r, xv) in rx.into_iter().enumerate() {
        x[pre.kept[r]] = xv;
    }
    Ok((t, x))
}

fn lp_cmd(instance: &Instance) -> Result<i32> {
    let (t_star, x) = lp_point(instance)?;
    let residuals = lp::residuals(instance, t_star, &x);
    print_json(&LpReport { t_star, weighted: !instance.is_unit_weight(), x, residuals })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct RoundSummary {
    alg: Algorithm,
    trials: usize,
    t_star: f64,
    feasible_rate: f64,
    mean_value: f64,
    max_value: f64,
}

#[derive(Debug, Serialize)]
struct FreqRow {
    kind: &'static str,
    u: usize,
    v: Option<usize>,
    target: f64,
    empirical: f64,
}

fn round_cmd(a: RoundArgs, seed: u64) -> Result<i32> {
    let instance = InstanceDoc::read(&a.file)?.to_instance()?;
    let alg: Algorithm = a.alg.parse()?;
    if a.trials == 0 {
        return Err(Error::InvalidParameters("--trials must be positive".into()));
    }
    let pre = instance.preprocess();
    let Some(residual) = &pre.residual else {
        return Err(Error::Precondition("every candidate is isolated; nothing to round".into()));
    };
    let p = match prepare(residual)? {
        Preparation::Ready(p) => p,
        Preparation::Zero(_) => {
            return Err(Error::Precondition("enough zero-weight candidates exist; nothing to round".into()))
        }
    };
    let seeds: Vec<u64> = (0..a.trials as u64).map(|s| seed.wrapping_add(s)).collect();
    let stats = run_trials(alg, &p.work, &p.x, &seeds, p.weighted)?;
    // Removed heavy candidates are never selected, so values scale back exactly.
    let scale = if p.weighted { p.t_star } else { 1.0 };
    let values: Vec<f64> = stats.values.iter().map(|v| v * scale).collect();
    let summary = RoundSummary {
        alg,
        trials: stats.trials,
        t_star: p.t_star,
        feasible_rate: stats.feasible_rate,
        mean_value: values.iter().sum::<f64>() / values.len() as f64,
        max_value: values.iter().copied().fold(0.0, f64::max),
    };
    if let Some(path) = &a.csv {
        let original = |w: usize| pre.kept[p.kept[w]];
        let mut w = csv::Writer::from_path(path)?;
        for (v, (&f, &xv)) in stats.freq.iter().zip(&p.x.x).enumerate() {
            w.serialize(FreqRow { kind: "marginal", u: original(v), v: None, target: xv, empirical: f })?;
        }
        if let Some(joint) = &stats.joint {
            for u in 0..joint.len() {
                for v in u + 1..joint.len() {
                    let target = p.x.x[u] * p.x.x[v];
                    w.serialize(FreqRow { kind: "pair", u: original(u), v: Some(original(v)), target, empirical: joint[u][v] })?;
                }
            }
        } else {
            eprintln!("note: pair frequencies skipped above {JOINT_LIMIT} candidates");
        }
        w.flush()?;
    }
    print_json(&summary)?;
    Ok(EXIT_OK)
}

fn verify_cmd(a: VerifyArgs, seed: u64) -> Result<i32> {
    let suites: Vec<verify::Suite> = if a.suite == "all" {
        verify::Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(Error::InvalidParameters)?]
    };
    let mut rows = Vec::new();
    for suite in suites {
        let statistical = matches!(suite, verify::Suite::Marginals | verify::Suite::Negcorr);
        let trials = a.trials.unwrap_or(if statistical { 20_000 } else { 100 });
        let budget = verify::Budget { trials, max_m: a.max_m, seed };
        let suite_rows = verify::run(suite, &budget)?;
        let failed = suite_rows.iter().filter(|r| !r.pass).count();
        eprintln!("{:<16} {:>6} rows  {}", suite.name(), suite_rows.len(), if failed == 0 { "PASS".into() } else { format!("FAIL ({failed})") });
        rows.extend(suite_rows);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv is UTF-8");
    write_or_print(a.output.as_ref(), &text)?;
    Ok(if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_VERIFY })
}

fn bench_cmd(a: BenchArgs, seed: u64) -> Result<i32> {
    let cfg = bench::BenchConfig {
        families: a.families,
        algs: a.algs.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        seeds: (0..a.seeds).map(|s| seed.wrapping_add(s)).collect(),
        m: a.m,
        delta: a.delta,
        k: a.k,
        weights: parse_weights(&a.weights)?,
        oracle_cap: a.oracle_cap,
        omit_timing: a.omit_timing,
    };
    let rows = bench::run(&cfg)?;
    match &a.output {
        Some(p) => bench::write_csv(&rows, std::fs::File::create(p)?)?,
        None => bench::write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}
