//! Verification suites run from the command line. Each produces one CSV row
//! per measurement and passes only if every row passes.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{brute_force_opt, laminar::solve_laminar, solve_delta2_unweighted, solve_delta2_weighted};
use crate::gen::{self, BipartiteParams, ComponentKind, WeightSpec};
use crate::instance::Instance;
use crate::lp::{self, Doubling, FractionalSolution, EPS};
use crate::rounding::{lll, run_trials, seeded, Algorithm, LllOptions};
use crate::solve::{prepare, Preparation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ExactVsOracle,
    Marginals,
    Negcorr,
    RatioBounds,
    Gap,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::ExactVsOracle, Suite::Marginals, Suite::Negcorr, Suite::RatioBounds, Suite::Gap];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ExactVsOracle => "exact-vs-oracle",
            Suite::Marginals => "marginals",
            Suite::Negcorr => "negcorr",
            Suite::RatioBounds => "ratio-bounds",
            Suite::Gap => "gap",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub suite: &'static str,
    pub case: String,
    pub measure: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Instances per class, or rounding trials for the statistical suites.
    pub trials: usize,
    pub max_m: usize,
    pub seed: u64,
}

pub fn run(suite: Suite, budget: &Budget) -> Result<Vec<Row>> {
    match suite {
        Suite::ExactVsOracle => exact_vs_oracle(budget),
        Suite::Marginals => pipage_stats(budget, false),
        Suite::Negcorr => pipage_stats(budget, true),
        Suite::RatioBounds => ratio_bounds(budget),
        Suite::Gap => gap(),
    }
}

fn row(suite: Suite, case: String, measure: &'static str, value: f64, bound: f64, pass: bool) -> Row {
    Row { suite: suite.name(), case, measure, value, bound, pass }
}

/// Random instance with maximum degree two: disjoint paths and cycles.
pub fn random_delta2(rng: &mut crate::rounding::Rng, max_m: usize, weights: WeightSpec, seed: u64) -> Result<Instance> {
    let mut components = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(1..=max_m);
    while total < target {
        let room = target - total;
        let (kind, len) = if room >= 2 && rng.gen_bool(0.5) {
            (ComponentKind::Cycle, rng.gen_range(2..=room))
        } else {
            (ComponentKind::Path, rng.gen_range(1..=room))
        };
        components.push((kind, len));
        total += len;
    }
    gen::path_cycle(&components, 1, weights, seed)
}

fn exact_vs_oracle(budget: &Budget) -> Result<Vec<Row>> {
    let suite = Suite::ExactVsOracle;
    let classes = ["delta2-unweighted", "delta2-weighted", "laminar"];
    let jobs: Vec<(usize, usize)> = (0..classes.len()).flat_map(|c| (0..budget.trials).map(move |t| (c, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(class, t)| -> Result<Vec<Row>> {
            let seed = budget.seed.wrapping_add(t as u64);
            let mut rng = seeded(seed ^ ((class as u64) << 32));
            let mut out = Vec::new();
            match class {
                0 | 1 => {
                    let w = if class == 0 { WeightSpec::Unit } else { WeightSpec::Integer { lo: 0, hi: 9 } };
                    let base = random_delta2(&mut rng, budget.max_m, w, seed)?;
                    for k in 1..=base.n_candidates {
                        let i = Instance { demand: k, ..base.clone() };
                        let got = if class == 0 { solve_delta2_unweighted(&i)? } else { solve_delta2_weighted(&i)? };
                        let oracle = brute_force_opt(&i, true, budget.max_m.max(1))?.value;
                        let case = format!("{}#{t}/k={k}", classes[class]);
                        out.push(row(suite, case, "value", got.value, oracle, got.value == oracle && got.len() == k));
                    }
                }
                _ => {
                    let elements = rng.gen_range(1..=budget.max_m);
                    let sets = rng.gen_range(1..=(2 * elements - 1).min(budget.max_m));
                    for k in 1..=sets {
                        let f = gen::random_laminar(elements, sets, k, WeightSpec::Integer { lo: 0, hi: 9 }, seed)?;
                        let got = solve_laminar(&f)?;
                        let oracle = brute_force_opt(&f.to_instance()?, true, budget.max_m.max(1))?.value;
                        let case = format!("laminar#{t}/k={k}");
                        out.push(row(suite, case, "value", got.value, oracle, got.value == oracle && got.len() == k));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Six candidates with distinct fractional values summing to three.
pub fn marginal_fixture() -> (Instance, FractionalSolution) {
    let i = Instance::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]], None, 3).expect("fixture is valid");
    let x = FractionalSolution { x: vec![0.15, 0.35, 0.5, 0.65, 0.85, 0.5], t_star: 1.5, normalized: false };
    (i, x)
}

fn pipage_stats(budget: &Budget, pairs: bool) -> Result<Vec<Row>> {
    let (suite, i, x) = if pairs {
        let (i, x) = marginal_fixture();
        (Suite::Negcorr, i, x)
    } else {
        let (i, x) = marginal_fixture();
        (Suite::Marginals, i, x)
    };
    let seeds: Vec<u64> = (0..budget.trials as u64).map(|s| budget.seed.wrapping_add(s)).collect();
    let stats = run_trials(Algorithm::Pipage, &i, &x, &seeds, false)?;
    let t = stats.trials as f64;
    let mut rows = vec![row(suite, "all".into(), "exactly_k_rate", stats.feasible_rate, 1.0, stats.feasible_rate == 1.0)];
    if pairs {
        let joint = stats.joint.as_ref().expect("six candidates");
        for u in 0..6 {
            for v in u + 1..6 {
                let product = stats.freq[u] * stats.freq[v];
                let sigma = (joint[u][v] * (1.0 - joint[u][v]) / t).sqrt().max((product * (1.0 - product) / t).sqrt());
                let bound = product + 3.0 * sigma;
                rows.push(row(suite, format!("({u},{v})"), "joint", joint[u][v], bound, joint[u][v] <= bound));
            }
        }
    } else {
        for v in 0..6 {
            let sigma = (x.x[v] * (1.0 - x.x[v]) / t).sqrt();
            let dev = (stats.freq[v] - x.x[v]).abs();
            rows.push(row(suite, format!("v{v}"), "abs_dev", dev, 3.0 * sigma, dev <= 3.0 * sigma));
        }
    }
    Ok(rows)
}

fn ratio_bounds(budget: &Budget) -> Result<Vec<Row>> {
    let suite = Suite::RatioBounds;
    let rows = (0..budget.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<Row>> {
            let seed = budget.seed.wrapping_add(t as u64);
            let mut rng = seeded(seed);
            let delta = rng.gen_range(2..=4);
            let m = rng.gen_range(4..=budget.max_m.max(4));
            let n = rng.gen_range(m.div_ceil(delta)..=m + 2);
            let k = rng.gen_range(1..=m);
            let weighted = t % 2 == 1;
            let weights = if weighted { WeightSpec::Integer { lo: 1, hi: 6 } } else { WeightSpec::Unit };
            let i = gen::random_bipartite(&BipartiteParams { n, m, max_degree: delta, k, weights }, seed)?;
            let opt = brute_force_opt(&i, true, budget.max_m.max(4))?.value;
            let case = format!("{}#{t}", if weighted { "weighted" } else { "unit" });
            let mut out = Vec::new();

            let pre = i.preprocess();
            let Some(residual) = &pre.residual else { return Ok(out) };
            if weighted {
                if let Doubling::Bound(x) = lp::doubling(residual)? {
                    let res = lp::residuals(residual, x.t_star, &x.x).max();
                    out.push(row(suite, case.clone(), "doubling_over_2opt", x.t_star, 2.0 * opt, x.t_star <= 2.0 * opt));
                    out.push(row(suite, case.clone(), "lp_residual", res, EPS, res <= EPS));
                }
            } else {
                let x = lp::guess_tstar_unweighted(residual)?;
                let res = lp::residuals(residual, x.t_star, &x.x).max();
                out.push(row(suite, case.clone(), "tstar_over_opt", x.t_star, opt, x.t_star <= opt));
                out.push(row(suite, case.clone(), "lp_residual", res, EPS, res <= EPS));
            }

            let Preparation::Ready(p) = prepare(residual)? else { return Ok(out) };
            let outcome = lll::lll_rounding(&p.work, &p.x, &mut seeded(seed), p.weighted, LllOptions::default())?;
            let chosen = pre.lift(&outcome.selection.chosen.iter().map(|&v| p.kept[v]).collect::<Vec<_>>());
            let value = i.max_disagreement(&chosen)?;
            let delta = p.work.degree_profile().max_degree.max(1);
            let bound = if weighted {
                lll::bound_weighted(delta, opt).min(lll::bound_weighted_scaled(delta, opt, p.t_star))
            } else {
                lll::bound_unweighted(delta, opt)
            };
            out.push(row(suite, case.clone(), "lll_size", chosen.len() as f64, k as f64, chosen.len() >= k));
            out.push(row(suite, case, "lll_value", value, bound, value <= bound));
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn gap() -> Result<Vec<Row>> {
    let suite = Suite::Gap;
    let mut rows = Vec::new();
    for k in [2, 3] {
        let i = gen::gap(k)?;
        let opt = brute_force_opt(&i, true, crate::exact::DEFAULT_ORACLE_CAP)?.value;
        let t = lp::guess_tstar_unweighted(&i)?.t_star;
        rows.push(row(suite, format!("k={k}"), "opt", opt, k as f64, opt == k as f64));
        rows.push(row(suite, format!("k={k}"), "tstar", t, 1.0, t == 1.0));
    }
    Ok(rows)
}
