//! Independent rounding with a boosted sampling probability.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};
use crate::lp::FractionalSolution;
use crate::rounding::rng::Rng;

/// Smallest agent count for which `ln ln n > 1`.
pub const MIN_AGENTS: usize = 16;

/// Boost factor `10 ln n / ln ln n`.
pub fn boost(n: usize) -> f64 {
    let ln = (n as f64).ln();
    10.0 * ln / ln.ln()
}

/// Value guarantee `20 ln n / ln ln n * t_star`.
pub fn value_bound(n: usize, t_star: f64) -> f64 {
    2.0 * boost(n) * t_star
}

/// Keeps every candidate with `x_v >= 1 / boost(n)` and samples the rest
/// independently with probability `boost(n) * x_v`. When the small
/// coordinates sum to at most one, the lowest-index small candidate is taken
/// instead. The result may fall short of the demand.
pub fn independent_rounding(instance: &Instance, x: &FractionalSolution, rng: &mut Rng) -> Result<Selection> {
    let n = instance.n_agents();
    if n < MIN_AGENTS {
        return Err(Error::TooFewAgents { n });
    }
    if x.x.len() != instance.n_candidates {
        return Err(Error::InvalidParameters(format!(
            "fractional point has {} coordinates for {} candidates",
            x.x.len(),
            instance.n_candidates
        )));
    }
    let s = boost(n);
    let threshold = 1.0 / s;
    let mut chosen = Vec::new();
    let mut small = Vec::new();
    for (v, &xv) in x.x.iter().enumerate() {
        if xv >= threshold {
            chosen.push(v);
        } else {
            small.push(v);
        }
    }
    let small_sum: f64 = small.iter().map(|&v| x.x[v]).sum();
    if small_sum <= 1.0 {
        chosen.extend(small.first());
    } else {
        for &v in &small {
            if rng.gen::<f64>() < s * x.x[v] {
                chosen.push(v);
            }
        }
    }
    Selection::evaluate(instance, chosen)
}
