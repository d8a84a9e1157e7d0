//! Benchmark grid: families x algorithms x seeds, one CSV row per run.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::brute_force_opt;
use crate::gen::{self, BipartiteParams, WeightSpec};
use crate::io::InstanceDoc;
use crate::rounding::seeded;
use crate::solve::{solve, Method, SolveOptions};

use super::report::ratio;
use super::verify::random_delta2;

pub const FAMILIES: [&str; 5] = ["path-cycle", "random-bipartite", "random-laminar", "gap", "incidence"];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub families: Vec<String>,
    pub algs: Vec<Method>,
    pub seeds: Vec<u64>,
    pub m: usize,
    pub delta: usize,
    /// Defaults to `max(1, m / 3)`.
    pub k: Option<usize>,
    pub weights: WeightSpec,
    pub oracle_cap: usize,
    pub omit_timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: usize,
    pub alg: Method,
    pub seed: u64,
    pub value: Option<f64>,
    pub oracle: Option<f64>,
    pub ratio: Option<f64>,
    pub feasible: bool,
    pub millis: Option<f64>,
}

fn instance_for(family: &str, cfg: &BenchConfig, seed: u64) -> Result<InstanceDoc> {
    let m = cfg.m.max(1);
    let k = cfg.k.unwrap_or((m / 3).max(1)).min(m);
    match family {
        "path-cycle" => {
            let mut i = random_delta2(&mut seeded(seed), m, cfg.weights, seed)?;
            i.demand = k.min(i.n_candidates);
            Ok(InstanceDoc::Bipartite(i))
        }
        "random-bipartite" => {
            let p = BipartiteParams { n: m, m, max_degree: cfg.delta.max(1), k, weights: cfg.weights };
            Ok(InstanceDoc::Bipartite(gen::random_bipartite(&p, seed)?))
        }
        "random-laminar" => Ok(InstanceDoc::Laminar(gen::random_laminar(m, m, k, cfg.weights, seed)?)),
        "gap" => Ok(InstanceDoc::Bipartite(gen::gap(k.clamp(2, 4))?)),
        "incidence" => gen::GenSpec::Incidence { vertices: m, edge_prob: 0.3, k }.generate(seed),
        other => Err(Error::InvalidParameters(format!("unknown family `{other}` (expected one of {})", FAMILIES.join(", ")))),
    }
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut instances = Vec::new();
    for family in &cfg.families {
        for &seed in &cfg.seeds {
            let doc = instance_for(family, cfg, seed)?;
            let i = doc.to_instance()?;
            let oracle = (i.n_candidates <= cfg.oracle_cap)
                .then(|| brute_force_opt(&i, true, cfg.oracle_cap).map(|s| s.value))
                .transpose()?;
            instances.push((family.clone(), seed, doc, i, oracle));
        }
    }
    let jobs: Vec<(usize, Method)> =
        (0..instances.len()).flat_map(|j| cfg.algs.iter().map(move |&a| (j, a))).collect();
    Ok(jobs
        .par_iter()
        .map(|&(j, alg)| {
            let (family, seed, doc, i, oracle) = &instances[j];
            let options = SolveOptions { seed: *seed, oracle_cap: cfg.oracle_cap, ..Default::default() };
            let start = Instant::now();
            let solved = solve(doc, alg, &options);
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let (value, feasible) = match &solved {
                Ok(s) => (Some(s.selection.value), s.selection.meets_demand(i)),
                Err(_) => (None, false),
            };
            BenchRow {
                family: family.clone(),
                n: i.n_agents(),
                m: i.n_candidates,
                k: i.demand,
                delta: i.degree_profile().max_degree,
                alg,
                seed: *seed,
                value,
                oracle: *oracle,
                ratio: value.zip(*oracle).map(|(v, o)| ratio(v, o)),
                feasible,
                millis: (!cfg.omit_timing).then_some(millis),
            }
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
