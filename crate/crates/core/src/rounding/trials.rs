//! Repeated seeded runs of a rounding algorithm and their statistics.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};
use crate::lp::{trim_to_demand, FractionalSolution};
use crate::rounding::independent::independent_rounding;
use crate::rounding::lll::{lll_rounding, LllOptions};
use crate::rounding::pipage::pipage_rounding;
use crate::rounding::rng::seeded;

/// Pair statistics are only collected up to this many candidates.
pub const JOINT_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Independent,
    Pipage,
    Lll,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Independent, Algorithm::Pipage, Algorithm::Lll];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Independent => "independent",
            Algorithm::Pipage => "pipage",
            Algorithm::Lll => "lll",
        }
    }

    /// One run. Pipage trims `x` to the demand first.
    pub fn run(self, instance: &Instance, x: &FractionalSolution, seed: u64, weighted: bool) -> Result<Selection> {
        let mut rng = seeded(seed);
        match self {
            Algorithm::Independent => independent_rounding(instance, x, &mut rng),
            Algorithm::Pipage => pipage_rounding(instance, &trim_to_demand(x, instance.demand)?, &mut rng),
            Algorithm::Lll => Ok(lll_rounding(instance, x, &mut rng, weighted, LllOptions::default())?.selection),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown rounding algorithm `{s}`")))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: usize,
    /// Empirical `Pr[v in S]`.
    pub freq: Vec<f64>,
    /// Empirical `Pr[u in S and v in S]`; `None` above [`JOINT_LIMIT`] candidates.
    pub joint: Option<Vec<Vec<f64>>>,
    /// Fraction of runs with at least `k` candidates.
    pub feasible_rate: f64,
    /// Objective value of every run, in seed order.
    pub values: Vec<f64>,
    /// Empirical mean of `w_v X_v`.
    pub contribution: Vec<f64>,
}

impl TrialStats {
    pub fn from_selections(instance: &Instance, selections: &[Selection]) -> Self {
        let m = instance.n_candidates;
        let t = selections.len();
        let mut count = vec![0usize; m];
        let mut pairs = (m <= JOINT_LIMIT).then(|| vec![vec![0usize; m]; m]);
        let mut feasible = 0;
        for s in selections {
            if s.meets_demand(instance) {
                feasible += 1;
            }
            for &v in &s.chosen {
                count[v] += 1;
            }
            if let Some(pairs) = pairs.as_mut() {
                for (i, &u) in s.chosen.iter().enumerate() {
                    for &v in &s.chosen[i + 1..] {
                        pairs[u][v] += 1;
                        pairs[v][u] += 1;
                    }
                }
            }
        }
        let div = t.max(1) as f64;
        let freq: Vec<f64> = count.iter().map(|&c| c as f64 / div).collect();
        let contribution = freq.iter().zip(&instance.weights).map(|(f, w)| f * w).collect();
        TrialStats {
            trials: t,
            joint: pairs.map(|p| p.iter().map(|row| row.iter().map(|&c| c as f64 / div).collect()).collect()),
            freq,
            feasible_rate: feasible as f64 / div,
            values: selections.iter().map(|s| s.value).collect(),
            contribution,
        }
    }
}

/// Runs `algorithm` once per seed, in parallel, and aggregates in seed order.
pub fn run_trials(
    algorithm: Algorithm,
    instance: &Instance,
    x: &FractionalSolution,
    seeds: &[u64],
    weighted: bool,
) -> Result<TrialStats> {
    let selections = seeds
        .par_iter()
        .map(|&seed| algorithm.run(instance, x, seed, weighted))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialStats::from_selections(instance, &selections))
}
