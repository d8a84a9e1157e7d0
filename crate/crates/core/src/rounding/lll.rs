//! Rounding through the algorithmic Lovász Local Lemma.
//!
//! Every candidate gets a boosted probability `p_v = (x_v + 1/Δ) * boost`.
//! Candidates with `p_v >= 1` are taken outright. The rest are sampled and
//! resampled (Moser-Tardos) until no bad event occurs: no agent receives too
//! much weight, and no index group of `Δ` candidates falls below its
//! fractional mass. One extra candidate closes any remaining gap.

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};
use crate::lp::FractionalSolution;
use crate::rounding::rng::Rng;

/// Default boost `4 ln(2eΔ²)`.
pub fn default_boost(delta: usize) -> f64 {
    let d = delta as f64;
    4.0 * (2.0 * std::f64::consts::E * d * d).ln()
}

/// Unit-weight guarantee `12 ln(2eΔ²)(opt + 2)`.
pub fn bound_unweighted(delta: usize, opt: f64) -> f64 {
    3.0 * default_boost(delta) * (opt + 2.0)
}

/// Weighted guarantee `12 ln(2eΔ²)(3 opt + 1)`.
pub fn bound_weighted(delta: usize, opt: f64) -> f64 {
    3.0 * default_boost(delta) * (3.0 * opt + 1.0)
}

/// Weighted guarantee in original units when the rounding ran on weights
/// divided by `t_star`: `12 ln(2eΔ²)(3 opt + t_star)`.
pub fn bound_weighted_scaled(delta: usize, opt: f64, t_star: f64) -> f64 {
    3.0 * default_boost(delta) * (3.0 * opt + t_star)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventParams {
    pub delta: usize,
    pub t_star: f64,
    /// Performance events sum weights instead of counting.
    pub weighted: bool,
    pub boost: f64,
}

impl EventParams {
    pub fn new(delta: usize, t_star: f64, weighted: bool) -> Self {
        EventParams { delta, t_star, weighted, boost: default_boost(delta) }
    }

    /// Performance threshold `2 * boost * (t_star + 1)`.
    pub fn performance_threshold(&self) -> f64 {
        2.0 * self.boost * (self.t_star + 1.0)
    }

    pub fn probability(&self, x: f64) -> f64 {
        ((x + 1.0 / self.delta as f64) * self.boost).min(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EventKind {
    /// Occurs when the (weighted) count of selected neighbours of `agent`
    /// reaches `threshold`.
    Performance { agent: usize, threshold: f64 },
    /// Occurs when fewer than `target` candidates of `group` are selected.
    Feasibility { group: usize, target: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadEvent {
    pub kind: EventKind,
    /// Variable indices, i.e. residual candidate indices.
    pub vars: Vec<usize>,
}

/// Variables, bad events and their dependency graph. Events are ordered
/// performance events by agent, then feasibility events by group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadEventSystem {
    pub probs: Vec<f64>,
    pub weights: Vec<f64>,
    pub events: Vec<BadEvent>,
    pub neighbors: Vec<Vec<usize>>,
    /// Maximum degree of the dependency graph.
    pub max_degree: usize,
}

impl BadEventSystem {
    pub fn occurs(&self, event: usize, assignment: &[bool]) -> bool {
        let e = &self.events[event];
        match e.kind {
            EventKind::Performance { threshold, .. } => {
                let load: f64 = e.vars.iter().filter(|&&v| assignment[v]).map(|&v| self.weights[v]).sum();
                load >= threshold
            }
            EventKind::Feasibility { target, .. } => {
                (e.vars.iter().filter(|&&v| assignment[v]).count() as f64) < target
            }
        }
    }

    pub fn occurring(&self, assignment: &[bool]) -> Vec<usize> {
        (0..self.events.len()).filter(|&e| self.occurs(e, assignment)).collect()
    }

    /// `1000 (1 + 1/d) |events|`, with `d` at least one.
    pub fn default_budget(&self) -> usize {
        let d = self.max_degree.max(1) as f64;
        (1000.0 * (1.0 + 1.0 / d) * self.events.len() as f64).ceil() as usize
    }
}

/// Builds the bad events over a residual instance (`x` indexed by its
/// candidates). Unit-weight mode counts selected neighbours.
pub fn build_bad_events(residual: &Instance, x: &[f64], params: &EventParams) -> Result<BadEventSystem> {
    let m = residual.n_candidates;
    if x.len() != m {
        return Err(Error::InvalidParameters(format!("{} coordinates for {m} candidates", x.len())));
    }
    if params.delta == 0 {
        return Err(Error::InvalidParameters("delta must be positive".into()));
    }
    let probs: Vec<f64> = x.iter().map(|&xv| params.probability(xv)).collect();
    if let Some(v) = probs.iter().position(|&p| p >= 1.0) {
        return Err(Error::Precondition(format!("candidate {v} has probability 1; it belongs to the fixed phase")));
    }
    let weights = if params.weighted { residual.weights.clone() } else { vec![1.0; m] };

    let mut events = Vec::new();
    let threshold = params.performance_threshold();
    for (agent, list) in residual.adj.iter().enumerate() {
        if !list.is_empty() {
            events.push(BadEvent { kind: EventKind::Performance { agent, threshold }, vars: list.clone() });
        }
    }
    let delta = params.delta;
    let n_groups = m.div_ceil(delta);
    for group in 0..n_groups {
        let vars: Vec<usize> = (group * delta..((group + 1) * delta).min(m)).collect();
        let target: f64 = vars.iter().map(|&v| x[v]).sum();
        if group + 1 == n_groups {
            let boosted: f64 = vars.iter().map(|&v| x[v] + 1.0 / delta as f64).sum();
            if boosted < 1.0 {
                continue;
            }
        }
        events.push(BadEvent { kind: EventKind::Feasibility { group, target }, vars });
    }

    // Adjacency through shared variables.
    let mut var_events = vec![Vec::new(); m];
    for (e, event) in events.iter().enumerate() {
        for &v in &event.vars {
            var_events[v].push(e);
        }
    }
    let mut neighbors = Vec::with_capacity(events.len());
    for (e, event) in events.iter().enumerate() {
        let mut list: Vec<usize> =
            event.vars.iter().flat_map(|&v| var_events[v].iter().copied()).filter(|&f| f != e).collect();
        list.sort_unstable();
        list.dedup();
        neighbors.push(list);
    }
    let max_degree = neighbors.iter().map(Vec::len).max().unwrap_or(0);
    Ok(BadEventSystem { probs, weights, events, neighbors, max_degree })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resampled {
    pub assignment: Vec<bool>,
    pub resamples: usize,
}

/// Samples every variable, then repeatedly resamples the variables of the
/// lowest-index occurring event. `budget` defaults to
/// [`BadEventSystem::default_budget`].
pub fn moser_tardos(system: &BadEventSystem, rng: &mut Rng, budget: Option<usize>) -> Result<Resampled> {
    let budget = budget.unwrap_or_else(|| system.default_budget());
    let mut assignment: Vec<bool> = system.probs.iter().map(|&p| rng.gen::<f64>() < p).collect();
    let mut resamples = 0;
    while let Some(e) = (0..system.events.len()).find(|&e| system.occurs(e, &assignment)) {
        if resamples == budget {
            return Err(Error::ResampleBudgetExhausted { budget, occurring: system.occurring(&assignment) });
        }
        for &v in &system.events[e].vars {
            assignment[v] = rng.gen::<f64>() < system.probs[v];
        }
        resamples += 1;
    }
    Ok(Resampled { assignment, resamples })
}

/// Options for [`lll_rounding`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LllOptions {
    /// Overrides `4 ln(2eΔ²)`.
    pub boost: Option<f64>,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllOutcome {
    pub selection: Selection,
    /// Last phase that ran (1, 2 or 3).
    pub phase: u8,
    pub fixed: usize,
    pub sampled: usize,
    pub resamples: usize,
    pub events: usize,
    pub dependency_degree: usize,
}

/// Runs the three phases on `instance` with fractional point `x`. Weighted
/// mode expects weights already divided by the threshold (`x.t_star = 1`).
pub fn lll_rounding(
    instance: &Instance,
    x: &FractionalSolution,
    rng: &mut Rng,
    weighted: bool,
    options: LllOptions,
) -> Result<LllOutcome> {
    instance.ensure_valid()?;
    let m = instance.n_candidates;
    let k = instance.demand;
    if x.x.len() != m {
        return Err(Error::InvalidParameters(format!("{} coordinates for {m} candidates", x.x.len())));
    }
    if weighted && instance.weights.iter().any(|&w| w > 1.0 + 1e-12) {
        return Err(Error::Precondition("weighted rounding needs weights normalized to [0, 1]".into()));
    }
    let delta = instance.degree_profile().max_degree.max(1);
    let mut params = EventParams::new(delta, x.t_star, weighted);
    if let Some(boost) = options.boost {
        params.boost = boost;
    }

    let fixed: Vec<usize> = (0..m).filter(|&v| params.probability(x.x[v]) >= 1.0).collect();
    if fixed.len() >= k {
        return Ok(LllOutcome {
            selection: Selection::evaluate(instance, fixed.clone())?,
            phase: 1,
            fixed: fixed.len(),
            sampled: 0,
            resamples: 0,
            events: 0,
            dependency_degree: 0,
        });
    }

    // Residual graph on the unfixed candidates; agents keep their index and
    // may end up with empty lists.
    let mut is_fixed = vec![false; m];
    fixed.iter().for_each(|&v| is_fixed[v] = true);
    let rest: Vec<usize> = (0..m).filter(|&v| !is_fixed[v]).collect();
    let mut new_index = vec![usize::MAX; m];
    for (i, &v) in rest.iter().enumerate() {
        new_index[v] = i;
    }
    let adj = instance
        .adj
        .iter()
        .map(|list| list.iter().filter(|&&v| !is_fixed[v]).map(|&v| new_index[v]).collect())
        .collect();
    let residual = Instance {
        n_candidates: rest.len(),
        adj,
        weights: rest.iter().map(|&v| instance.weights[v]).collect(),
        demand: k - fixed.len(),
    };
    let residual_x: Vec<f64> = rest.iter().map(|&v| x.x[v]).collect();
    let system = build_bad_events(&residual, &residual_x, &params)?;
    let resampled = moser_tardos(&system, rng, options.budget)?;

    let sampled: Vec<usize> = (0..rest.len()).filter(|&i| resampled.assignment[i]).map(|i| rest[i]).collect();
    let mut chosen = fixed.clone();
    chosen.extend_from_slice(&sampled);
    let mut phase = 2;
    if chosen.len() < k {
        let mut taken = vec![false; m];
        chosen.iter().for_each(|&v| taken[v] = true);
        let extra = (0..m).find(|&v| !taken[v]).expect("m >= k leaves an unselected candidate");
        chosen.push(extra);
        phase = 3;
    }
    if chosen.len() < k {
        return Err(Error::DemandMismatch { sum: x.sum(), k });
    }
    Ok(LllOutcome {
        selection: Selection::evaluate(instance, chosen)?,
        phase,
        fixed: fixed.len(),
        sampled: sampled.len(),
        resamples: resampled.resamples,
        events: system.events.len(),
        dependency_degree: system.max_degree,
    })
}
