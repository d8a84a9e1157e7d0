//! Run reports: JSON for machines, an aligned table for humans.

use serde::Serialize;

use crate::instance::Instance;
use crate::solve::{guarantee, Method, Solved};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: usize,
    pub alg: Method,
    pub routed: Method,
    pub seed: u64,
    pub chosen: Vec<usize>,
    pub value: f64,
    pub oracle: Option<f64>,
    pub ratio: Option<f64>,
    pub t_star: Option<f64>,
    pub bound: Option<f64>,
    pub bound_ok: Option<bool>,
    pub feasible: bool,
    pub millis: f64,
}

/// `value / oracle`, with `0 / 0 = 1`.
pub fn ratio(value: f64, oracle: f64) -> f64 {
    if oracle == 0.0 {
        if value == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        value / oracle
    }
}

impl RunReport {
    pub fn new(instance: &Instance, alg: Method, seed: u64, solved: &Solved, oracle: Option<f64>, millis: f64) -> Self {
        let value = instance.max_disagreement(&solved.selection.chosen).expect("selection indexes the instance");
        let weighted = !instance.is_unit_weight();
        let bound = guarantee(solved.method, instance.n_agents(), solved.delta, weighted, oracle, solved.t_star);
        RunReport {
            n: instance.n_agents(),
            m: instance.n_candidates,
            k: instance.demand,
            delta: instance.degree_profile().max_degree,
            alg,
            routed: solved.method,
            seed,
            chosen: solved.selection.chosen.clone(),
            value,
            oracle,
            ratio: oracle.map(|o| ratio(value, o)),
            t_star: solved.t_star,
            bound,
            bound_ok: bound.map(|b| value <= b * (1.0 + 1e-9)),
            feasible: solved.selection.chosen.len() >= instance.demand,
            millis,
        }
    }

    pub fn table(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v}"));
        let rows = [
            ("instance", format!("n={} m={} k={} delta={}", self.n, self.m, self.k, self.delta)),
            ("algorithm", format!("{} (ran {})", self.alg, self.routed)),
            ("seed", self.seed.to_string()),
            ("selected", format!("{} candidates", self.chosen.len())),
            ("value", format!("{}", self.value)),
            ("oracle", opt(self.oracle)),
            ("ratio", opt(self.ratio)),
            ("lp bound", opt(self.t_star)),
            ("guarantee", opt(self.bound)),
            ("feasible", self.feasible.to_string()),
            ("time", format!("{:.3} ms", self.millis)),
        ];
        rows.iter().map(|(k, v)| format!("{k:>10}  {v}\n")).collect()
    }
}
