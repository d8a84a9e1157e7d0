//! Test-side oracles, written independently of the library solvers.

#![allow(dead_code)]

use fair_kset::instance::Instance;

/// Minimum over all `k`-subsets (as bitmasks) of the maximum agent load.
/// Plain enumeration, no pruning.
pub fn naive_opt(i: &Instance) -> f64 {
    let m = i.n_candidates;
    assert!(m <= 20, "naive oracle limited to 20 candidates");
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize != i.demand {
            continue;
        }
        let worst = i
            .adj
            .iter()
            .map(|row| row.iter().filter(|&&v| mask >> v & 1 == 1).map(|&v| i.weights[v]).sum::<f64>())
            .fold(0.0, f64::max);
        best = best.min(worst);
    }
    best
}

/// Load of every agent under `chosen`, summed directly.
pub fn loads(i: &Instance, chosen: &[usize]) -> Vec<f64> {
    i.adj.iter().map(|row| row.iter().filter(|v| chosen.contains(v)).map(|&v| i.weights[v]).sum()).collect()
}

/// Largest independent set of a graph on at most 16 vertices.
pub fn max_independent_set(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..(1u32 << n))
        .filter(|&mask| edges.iter().all(|&(a, b)| mask >> a & 1 == 0 || mask >> b & 1 == 0))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Every pair of sets is nested or disjoint, and no set repeats.
pub fn is_laminar(sets: &[Vec<usize>]) -> bool {
    use std::collections::BTreeSet;
    let sets: Vec<BTreeSet<usize>> = sets.iter().map(|s| s.iter().copied().collect()).collect();
    sets.iter().enumerate().all(|(a, x)| {
        sets[a + 1..].iter().all(|y| x != y && (x.is_disjoint(y) || x.is_subset(y) || y.is_subset(x)))
    })
}

/// `naive_opt` for every demand at once: entry `k` is the optimum over
/// `k`-subsets, for `k = 0..=m`.
pub fn naive_opt_all_k(i: &Instance) -> Vec<f64> {
    let m = i.n_candidates;
    assert!(m <= 20, "naive oracle limited to 20 candidates");
    let mut best = vec![f64::INFINITY; m + 1];
    for mask in 0u32..(1u32 << m) {
        let worst = i
            .adj
            .iter()
            .map(|row| row.iter().filter(|&&v| mask >> v & 1 == 1).map(|&v| i.weights[v]).sum::<f64>())
            .fold(0.0, f64::max);
        let k = mask.count_ones() as usize;
        best[k] = best[k].min(worst);
    }
    best
}
