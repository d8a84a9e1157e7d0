//! Pipage rounding for the cardinality constraint `sum x = k`.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};
use crate::lp::{FractionalSolution, EPS};
use crate::rounding::rng::Rng;

/// Tolerance on `|sum x - k|`, before and after every step.
const SUM_TOLERANCE: f64 = 1e-9;

fn is_fractional(x: f64) -> bool {
    x > EPS && x < 1.0 - EPS
}

fn snap(x: &mut f64) {
    if *x <= EPS {
        *x = 0.0;
    } else if *x >= 1.0 - EPS {
        *x = 1.0;
    }
}

/// Rounds `x` (with `sum x = k`) to exactly `k` candidates. Each step takes
/// the two lowest-index fractional coordinates and moves mass between them
/// so that one becomes integral, keeping the marginals unbiased. `observe`
/// sees the point after every step.
pub fn pipage_rounding_observed(
    instance: &Instance,
    x: &FractionalSolution,
    rng: &mut Rng,
    mut observe: impl FnMut(&[f64]),
) -> Result<Selection> {
    let k = instance.demand;
    if x.x.len() != instance.n_candidates {
        return Err(Error::InvalidParameters(format!(
            "fractional point has {} coordinates for {} candidates",
            x.x.len(),
            instance.n_candidates
        )));
    }
    if x.x.iter().any(|&v| !(-EPS..=1.0 + EPS).contains(&v)) {
        return Err(Error::InvalidParameters("coordinates must lie in [0, 1]".into()));
    }
    let target = x.sum();
    if (target - k as f64).abs() > SUM_TOLERANCE {
        return Err(Error::DemandMismatch { sum: target, k });
    }

    let mut y = x.x.clone();
    y.iter_mut().for_each(snap);
    let mut pending: Option<usize> = None;
    for v in 0..y.len() {
        if !is_fractional(y[v]) {
            continue;
        }
        let Some(u) = pending else {
            pending = Some(v);
            continue;
        };
        let d1 = y[u].min(1.0 - y[v]);
        let d2 = (1.0 - y[u]).min(y[v]);
        let p = d2 / (d1 + d2);
        if rng.gen::<f64>() < p {
            y[u] -= d1;
            y[v] += d1;
        } else {
            y[u] += d2;
            y[v] -= d2;
        }
        snap(&mut y[u]);
        snap(&mut y[v]);
        observe(&y);
        let sum: f64 = y.iter().sum();
        if (sum - target).abs() > SUM_TOLERANCE {
            return Err(Error::DemandMismatch { sum, k });
        }
        pending = [u, v].into_iter().find(|&i| is_fractional(y[i]));
    }
    if let Some(u) = pending {
        // Only reachable through rounding drift; the sum is integral.
        y[u] = y[u].round();
    }
    let chosen: Vec<usize> = (0..y.len()).filter(|&v| y[v] == 1.0).collect();
    if chosen.len() != k {
        return Err(Error::DemandMismatch { sum: chosen.len() as f64, k });
    }
    Selection::evaluate(instance, chosen)
}

pub fn pipage_rounding(instance: &Instance, x: &FractionalSolution, rng: &mut Rng) -> Result<Selection> {
    pipage_rounding_observed(instance, x, rng, |_| {})
}
