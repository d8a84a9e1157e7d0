//! Exhaustive oracle used to check every other solver.

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};

pub const DEFAULT_ORACLE_CAP: usize = 22;

/// Minimizes the maximum disagreement over all selections of exactly `k`
/// candidates, returning the lexicographically smallest minimizer.
///
/// Selecting more than `k` candidates never lowers the objective, so the
/// answer is also optimal among selections of size at least `k`; `exact_k`
/// only documents which contract the caller relies on.
pub fn brute_force_opt(instance: &Instance, exact_k: bool, cap: usize) -> Result<Selection> {
    let _ = exact_k;
    instance.ensure_valid()?;
    let m = instance.n_candidates;
    if m > cap {
        return Err(Error::OracleCapExceeded { m, cap });
    }
    let mut search = Search {
        owners: instance.candidate_adj(),
        weights: &instance.weights,
        k: instance.demand,
        m,
        load: vec![0.0; instance.n_agents()],
        current: Vec::with_capacity(instance.demand),
        best_value: f64::INFINITY,
        best: Vec::new(),
    };
    search.descend(0, 0.0);
    Selection::evaluate(instance, search.best)
}

struct Search<'a> {
    owners: Vec<Vec<usize>>,
    weights: &'a [f64],
    k: usize,
    m: usize,
    load: Vec<f64>,
    current: Vec<usize>,
    best_value: f64,
    best: Vec<usize>,
}

impl Search<'_> {
    // Lexicographic enumeration; the first subset reaching a value is kept, so
    // pruning on `>=` preserves the smallest-index tie-break.
    fn descend(&mut self, next: usize, current_max: f64) {
        if current_max >= self.best_value {
            return;
        }
        if self.current.len() == self.k {
            self.best_value = current_max;
            self.best = self.current.clone();
            return;
        }
        let remaining = self.k - self.current.len();
        for v in next..=(self.m - remaining) {
            let w = self.weights[v];
            let mut new_max = current_max;
            let saved: Vec<f64> = self.owners[v].iter().map(|&u| self.load[u]).collect();
            for &u in &self.owners[v] {
                self.load[u] += w;
                new_max = new_max.max(self.load[u]);
            }
            self.current.push(v);
            self.descend(v + 1, new_max);
            self.current.pop();
            for (&u, old) in self.owners[v].iter().zip(saved) {
                self.load[u] = old;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_k1_is_one() {
        let i = Instance::new(4, (0..4).map(|v| vec![v]).collect(), None, 1).unwrap();
        let s = brute_force_opt(&i, true, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.chosen, vec![0]);
    }

    #[test]
    fn star_pair_is_two() {
        let i = Instance::new(3, vec![vec![0, 1, 2]], None, 2).unwrap();
        let s = brute_force_opt(&i, false, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(s.value, 2.0);
        assert_eq!(s.chosen, vec![0, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let i = Instance::new(5, vec![vec![0]], None, 1).unwrap();
        assert!(matches!(brute_force_opt(&i, true, 4), Err(Error::OracleCapExceeded { m: 5, cap: 4 })));
    }

    #[test]
    fn prefers_light_candidates() {
        let i = Instance::new(3, vec![vec![0, 1, 2]], Some(vec![5.0, 1.0, 2.0]), 2).unwrap();
        let s = brute_force_opt(&i, true, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(s.chosen, vec![1, 2]);
        assert_eq!(s.value, 3.0);
    }
}
