//! Feasibility LP, threshold search and weight normalization.
//!
//! For a threshold `t` the LP asks for `x` in `[0,1]^m` with `sum x >= k`
//! and `sum_{v in N(u)} w_v x_v <= t` for every agent `u`. It is solved as a
//! packing LP that maximizes `sum x` under the agent rows; the threshold is
//! feasible when the maximum reaches `k - EPS`.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};

pub const EPS: f64 = 1e-9;

/// A fractional point together with the threshold it certifies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub t_star: f64,
    pub normalized: bool,
}

impl FractionalSolution {
    pub fn sum(&self) -> f64 {
        self.x.iter().sum()
    }
}

/// Largest constraint violations of a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Residuals {
    /// max over agents of `load - t`, clamped at 0.
    pub row: f64,
    /// Largest distance of a coordinate outside `[0,1]`.
    pub bounds: f64,
    /// `k - sum x`, clamped at 0.
    pub demand: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.row.max(self.bounds).max(self.demand)
    }
}

pub fn residuals(instance: &Instance, t: f64, x: &[f64]) -> Residuals {
    let mut r = Residuals::default();
    for list in &instance.adj {
        let load: f64 = list.iter().map(|&v| instance.weights[v] * x[v]).sum();
        r.row = r.row.max(load - t);
    }
    for &xv in x {
        r.bounds = r.bounds.max(-xv).max(xv - 1.0);
    }
    r.demand = (instance.demand as f64 - x.iter().sum::<f64>()).max(0.0);
    r
}

/// Solves the LP at threshold `t`. Returns `None` when infeasible.
pub fn check_feasible(instance: &Instance, t: f64) -> Result<Option<FractionalSolution>> {
    check_feasible_restricted(instance, t, &vec![true; instance.n_candidates])
}

/// As [`check_feasible`], with `x_v` fixed to zero wherever `allowed[v]` is false.
pub fn check_feasible_restricted(
    instance: &Instance,
    t: f64,
    allowed: &[bool],
) -> Result<Option<FractionalSolution>> {
    instance.ensure_valid()?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameters(format!("threshold must be non-negative, got {t}")));
    }
    let m = instance.n_candidates;
    let k = instance.demand as f64;
    if (allowed.iter().filter(|&&a| a).count() as f64) < k - EPS {
        return Ok(None);
    }

    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..m).map(|v| allowed[v].then(|| problem.add_var(1.0, (0.0, 1.0)))).collect();
    for list in &instance.adj {
        let mut expr = LinearExpr::empty();
        let mut any = false;
        for &v in list {
            if let Some(var) = vars[v] {
                if instance.weights[v] > 0.0 {
                    expr.add(var, instance.weights[v]);
                    any = true;
                }
            }
        }
        if any {
            problem.add_constraint(expr, ComparisonOp::Le, t);
        }
    }
    let solution = problem.solve().map_err(|e| Error::Lp { message: e.to_string(), residual: f64::NAN })?;
    let mut x: Vec<f64> = vars
        .iter()
        .map(|var| var.map_or(0.0, |var| solution.var_value(var).clamp(0.0, 1.0)))
        .collect();

    // Pull the point back inside every row if the solver overshot.
    let mut scale: f64 = 1.0;
    for list in &instance.adj {
        let load: f64 = list.iter().map(|&v| instance.weights[v] * x[v]).sum();
        if load > t {
            scale = scale.min(t / load);
        }
    }
    if scale < 1.0 {
        for xv in &mut x {
            *xv *= scale;
        }
    }

    if x.iter().sum::<f64>() < k - EPS {
        return Ok(None);
    }
    let res = residuals(instance, t, &x);
    if res.max() > EPS {
        return Err(Error::Lp { message: "returned point violates the constraints".into(), residual: res.max() });
    }
    Ok(Some(FractionalSolution { x, t_star: t, normalized: false }))
}

/// Smallest integer threshold in `[1, k]` at which the unit-weight LP is
/// feasible, with its witness.
pub fn guess_tstar_unweighted(instance: &Instance) -> Result<FractionalSolution> {
    if !instance.is_unit_weight() {
        return Err(Error::Precondition("unit weights required".into()));
    }
    let (mut lo, mut hi) = (1usize, instance.demand);
    let mut best = check_feasible(instance, hi as f64)?
        .ok_or_else(|| Error::Lp { message: "threshold k is infeasible".into(), residual: f64::NAN })?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match check_feasible(instance, mid as f64)? {
            Some(sol) => {
                hi = mid;
                best = sol;
            }
            None => lo = mid + 1,
        }
    }
    Ok(best)
}

/// Result of [`doubling`].
#[derive(Clone, Debug, PartialEq)]
pub enum Doubling {
    /// At least `k` candidates weigh nothing, so the optimum is 0.
    ZeroWeight(Selection),
    /// Last feasible threshold of the halving sequence; the next one is infeasible.
    Bound(FractionalSolution),
}

/// Halves the threshold from the largest agent load while the LP, restricted
/// to candidates no heavier than the threshold, stays feasible.
pub fn doubling(instance: &Instance) -> Result<Doubling> {
    instance.ensure_valid()?;
    if instance.candidate_degrees().contains(&0) {
        return Err(Error::Precondition("instance has isolated candidates; preprocess first".into()));
    }
    let w = &instance.weights;
    let zeros: Vec<usize> = (0..instance.n_candidates).filter(|&v| w[v] == 0.0).collect();
    if zeros.len() >= instance.demand {
        return Ok(Doubling::ZeroWeight(Selection::evaluate(instance, zeros[..instance.demand].to_vec())?));
    }
    let min_positive = w.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let allowed = |t: f64| w.iter().map(|&x| x <= t).collect::<Vec<_>>();

    let mut t = instance
        .adj
        .iter()
        .map(|list| list.iter().map(|&v| w[v]).sum::<f64>())
        .fold(0.0, f64::max);
    let mut last = check_feasible_restricted(instance, t, &allowed(t))?
        .ok_or_else(|| Error::Lp { message: "largest agent load is infeasible".into(), residual: f64::NAN })?;
    loop {
        let half = t / 2.0;
        if half < min_positive / 2.0 {
            break;
        }
        match check_feasible_restricted(instance, half, &allowed(half))? {
            Some(sol) => {
                t = half;
                last = sol;
            }
            None => break,
        }
    }
    Ok(Doubling::Bound(last))
}

/// An instance with heavy candidates cut and weights scaled by `1 / scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedInstance {
    pub instance: Instance,
    /// Normalized candidate index to original index.
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    pub scale: f64,
}

impl NormalizedInstance {
    pub fn lift(&self, chosen: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = chosen.iter().map(|&v| self.kept[v]).collect();
        out.sort_unstable();
        out
    }

    pub fn denormalize(&self, value: f64) -> f64 {
        value * self.scale
    }
}

/// Removes candidates heavier than `t_star` and divides the remaining weights
/// by it, so the LP point becomes feasible at threshold 1.
pub fn normalize(
    instance: &Instance,
    t_star: f64,
    x: &FractionalSolution,
) -> Result<(NormalizedInstance, FractionalSolution)> {
    if t_star.is_nan() || t_star <= 0.0 {
        return Err(Error::InvalidParameters(format!("normalization needs a positive threshold, got {t_star}")));
    }
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    let mut new_index = vec![usize::MAX; instance.n_candidates];
    for v in 0..instance.n_candidates {
        if instance.weights[v] > t_star {
            removed.push(v);
        } else {
            new_index[v] = kept.len();
            kept.push(v);
        }
    }
    if kept.len() < instance.demand {
        return Err(Error::DemandTooLarge { k: instance.demand, available: kept.len() });
    }
    let adj = instance
        .adj
        .iter()
        .map(|list| list.iter().filter(|&&v| new_index[v] != usize::MAX).map(|&v| new_index[v]).collect())
        .collect();
    let weights = kept.iter().map(|&v| instance.weights[v] / t_star).collect();
    let normalized = Instance::new(kept.len(), adj, Some(weights), instance.demand)?;
    let frac = FractionalSolution { x: kept.iter().map(|&v| x.x[v]).collect(), t_star: 1.0, normalized: true };
    Ok((NormalizedInstance { instance: normalized, kept, removed, scale: t_star }, frac))
}

/// Lowers coordinates from the highest index down until `sum x = k`. A sum
/// short of `k` by at most `EPS` is topped up from the lowest index.
pub fn trim_to_demand(x: &FractionalSolution, k: usize) -> Result<FractionalSolution> {
    let k_f = k as f64;
    let sum = x.sum();
    if sum < k_f - EPS {
        return Err(Error::DemandMismatch { sum, k });
    }
    let mut out = x.clone();
    if sum > k_f {
        // Keep the longest prefix summing to at most k, cut the rest.
        let mut prefix = 0.0;
        for xv in out.x.iter_mut() {
            if prefix >= k_f {
                *xv = 0.0;
            } else if prefix + *xv > k_f {
                *xv = k_f - prefix;
                prefix = k_f;
            } else {
                prefix += *xv;
            }
        }
    } else {
        let mut deficit = k_f - sum;
        for xv in out.x.iter_mut() {
            let add = (1.0 - *xv).min(deficit);
            *xv += add;
            deficit -= add;
            if deficit <= 0.0 {
                break;
            }
        }
    }
    Ok(out)
}
