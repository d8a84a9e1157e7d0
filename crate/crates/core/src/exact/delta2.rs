//! Exact solvers for instances whose maximum degree is at most two.
//!
//! Such a bipartite graph is a disjoint union of paths and cycles that
//! alternate between agents and candidates.

use crate::error::{Error, Result};
use crate::exact::red_blue::{red_blue, RedBlueInstance};
use crate::instance::{Instance, Selection};

/// Sorted, deduplicated set of values the optimum can take: for every agent
/// with neighbours `p, q`, the sums `0, w_p, w_q, w_p + w_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateValueSet {
    pub values: Vec<f64>,
}

impl CandidateValueSet {
    pub fn new(instance: &Instance) -> Self {
        let w = &instance.weights;
        let mut values = vec![0.0];
        for list in &instance.adj {
            match *list.as_slice() {
                [p] => values.push(w[p]),
                [p, q] => values.extend([w[p], w[q], w[p] + w[q]]),
                _ => {}
            }
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        CandidateValueSet { values }
    }
}

fn require_delta2(instance: &Instance) -> Result<()> {
    instance.ensure_valid()?;
    let delta = instance.degree_profile().max_degree;
    if delta > 2 {
        return Err(Error::Precondition(format!("maximum degree is {delta}, expected at most 2")));
    }
    Ok(())
}

/// Candidates of each path or cycle component in walk order, with a cycle flag.
fn components(instance: &Instance) -> Vec<(Vec<usize>, bool)> {
    let n = instance.n_agents();
    let m = instance.n_candidates;
    // Agents are nodes 0..n, candidates n..n+m.
    let mut nbrs = vec![Vec::with_capacity(2); n + m];
    for (u, list) in instance.adj.iter().enumerate() {
        for &v in list {
            nbrs[u].push(n + v);
            nbrs[n + v].push(u);
        }
    }
    let mut visited = vec![false; n + m];
    let mut out = Vec::new();
    // Paths start at an endpoint; the second pass picks up cycles, starting
    // from their lowest-index candidate.
    let starts = (0..n + m)
        .filter(|&x| nbrs[x].len() < 2)
        .chain((n..n + m).filter(|&x| nbrs[x].len() == 2))
        .collect::<Vec<_>>();
    for start in starts {
        if visited[start] {
            continue;
        }
        let cyclic = nbrs[start].len() == 2;
        let mut order = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            visited[cur] = true;
            if cur >= n {
                order.push(cur - n);
            }
            let next = nbrs[cur].iter().copied().find(|&x| x != prev);
            match next {
                Some(x) if x != start && !visited[x] => {
                    prev = cur;
                    cur = x;
                }
                _ => break,
            }
        }
        if !order.is_empty() {
            out.push((order, cyclic));
        }
    }
    out
}

/// Largest set of candidates whose maximum (unit-weight) disagreement is at
/// most one. Along a path every other candidate is taken; along a cycle the
/// last position is skipped when it would close onto the first.
pub fn max_vertex_set(instance: &Instance) -> Result<Vec<usize>> {
    require_delta2(instance)?;
    let mut out = Vec::new();
    for (order, cyclic) in components(instance) {
        let len = order.len();
        let limit = if cyclic { len - 1 } else { len };
        out.extend(order.iter().enumerate().filter(|&(p, _)| p % 2 == 0 && p < limit).map(|(_, &v)| v));
    }
    out.sort_unstable();
    Ok(out)
}

/// Exact unit-weight solver: the optimum is 1 exactly when the maximum vertex
/// set has at least `k` members, and 2 otherwise.
pub fn solve_delta2_unweighted(instance: &Instance) -> Result<Selection> {
    require_delta2(instance)?;
    if !instance.is_unit_weight() {
        return Err(Error::Precondition("unit weights required".into()));
    }
    if instance.candidate_degrees().contains(&0) {
        return Err(Error::Precondition("instance has isolated candidates; preprocess first".into()));
    }
    let k = instance.demand;
    let mvs = max_vertex_set(instance)?;
    let chosen = if mvs.len() >= k { mvs[..k].to_vec() } else { (0..k).collect() };
    Selection::evaluate(instance, chosen)
}

/// Exact weighted solver: tries candidate values in increasing order and
/// returns the first one admitting a Red-Blue coloring with `k` blues.
pub fn solve_delta2_weighted(instance: &Instance) -> Result<Selection> {
    require_delta2(instance)?;
    let degrees = instance.candidate_degrees();
    let w = &instance.weights;
    for &b in &CandidateValueSet::new(instance).values {
        // A candidate heavier than `b` would push any neighbour above `b`.
        let mut white_of = vec![usize::MAX; instance.n_candidates];
        let mut candidate_of = Vec::new();
        for v in 0..instance.n_candidates {
            if degrees[v] == 0 || w[v] <= b {
                white_of[v] = candidate_of.len();
                candidate_of.push(v);
            }
        }
        if candidate_of.len() < instance.demand {
            continue;
        }
        let mut red_adj = Vec::with_capacity(instance.n_agents());
        let mut bounds = Vec::with_capacity(instance.n_agents());
        for list in &instance.adj {
            let allowed: Vec<usize> = list.iter().copied().filter(|&v| white_of[v] != usize::MAX).collect();
            let bound = match *allowed.as_slice() {
                [p, q] if w[p] + w[q] <= b => 2,
                [] => 0,
                _ => 1,
            };
            red_adj.push(allowed.iter().map(|&v| white_of[v]).collect());
            bounds.push(bound);
        }
        let rb = RedBlueInstance { n_white: candidate_of.len(), red_adj, bounds, k: instance.demand };
        if let Some(blue) = red_blue(&rb)? {
            return Selection::evaluate(instance, blue.into_iter().map(|x| candidate_of[x]).collect());
        }
    }
    unreachable!("selecting every candidate is feasible at the largest candidate value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute::{brute_force_opt, DEFAULT_ORACLE_CAP};

    /// Path L0 - R0 - L1 - R1 - ... - R(len-1).
    fn path(len: usize, k: usize) -> Instance {
        let adj = (0..len).map(|i| if i == 0 { vec![0] } else { vec![i - 1, i] }).collect();
        Instance::new(len, adj, None, k).unwrap()
    }

    fn cycle(len: usize, k: usize) -> Instance {
        let adj = (0..len).map(|i| vec![i, (i + 1) % len]).collect();
        Instance::new(len, adj, None, k).unwrap()
    }

    #[test]
    fn mvs_sizes() {
        assert_eq!(max_vertex_set(&path(3, 1)).unwrap().len(), 2);
        assert_eq!(max_vertex_set(&path(1, 1)).unwrap().len(), 1);
        assert_eq!(max_vertex_set(&path(4, 1)).unwrap().len(), 2);
        assert_eq!(max_vertex_set(&cycle(2, 1)).unwrap().len(), 1);
        assert_eq!(max_vertex_set(&cycle(3, 1)).unwrap().len(), 1);
        assert_eq!(max_vertex_set(&cycle(4, 1)).unwrap().len(), 2);
        assert_eq!(max_vertex_set(&cycle(7, 1)).unwrap().len(), 3);
    }

    #[test]
    fn mvs_has_disagreement_at_most_one() {
        for len in 1..9 {
            let i = path(len, 1);
            assert!(i.max_disagreement(&max_vertex_set(&i).unwrap()).unwrap() <= 1.0);
            if len >= 2 {
                let i = cycle(len, 1);
                assert!(i.max_disagreement(&max_vertex_set(&i).unwrap()).unwrap() <= 1.0);
            }
        }
    }

    #[test]
    fn unweighted_examples() {
        assert_eq!(solve_delta2_unweighted(&path(3, 2)).unwrap().value, 1.0);
        assert_eq!(solve_delta2_unweighted(&path(3, 3)).unwrap().value, 2.0);
        assert_eq!(solve_delta2_unweighted(&cycle(2, 1)).unwrap().value, 1.0);
        for k in 1..=3 {
            let i = path(3, k);
            let oracle = brute_force_opt(&i, true, DEFAULT_ORACLE_CAP).unwrap();
            assert_eq!(solve_delta2_unweighted(&i).unwrap().value, oracle.value);
        }
    }

    #[test]
    fn unweighted_rejects_bad_input() {
        let star = Instance::new(3, vec![vec![0, 1, 2]], None, 1).unwrap();
        assert!(solve_delta2_unweighted(&star).is_err());
        let weighted = Instance::new(2, vec![vec![0, 1]], Some(vec![1.0, 2.0]), 1).unwrap();
        assert!(solve_delta2_unweighted(&weighted).is_err());
    }

    #[test]
    fn weighted_examples() {
        let i = Instance::new(2, vec![vec![0, 1]], Some(vec![3.0, 5.0]), 1).unwrap();
        let s = solve_delta2_weighted(&i).unwrap();
        assert_eq!((s.value, s.chosen.clone()), (3.0, vec![0]));
        let i = Instance::new(2, vec![vec![0, 1]], Some(vec![3.0, 5.0]), 2).unwrap();
        assert_eq!(solve_delta2_weighted(&i).unwrap().value, 8.0);
        let i = Instance::new(2, vec![vec![0], vec![1]], Some(vec![2.0, 7.0]), 1).unwrap();
        assert_eq!(solve_delta2_weighted(&i).unwrap().value, 2.0);
    }

    #[test]
    fn weighted_skips_heavy_candidate_at_bound_one() {
        // The heavy candidate has the lower index; a count-only cap would
        // pick it at b = 3.
        let i = Instance::new(2, vec![vec![0, 1]], Some(vec![5.0, 3.0]), 1).unwrap();
        let s = solve_delta2_weighted(&i).unwrap();
        assert_eq!((s.value, s.chosen), (3.0, vec![1]));
    }

    #[test]
    fn candidate_values() {
        let i = Instance::new(3, vec![vec![0, 1], vec![2]], Some(vec![1.0, 2.0, 2.0]), 1).unwrap();
        assert_eq!(CandidateValueSet::new(&i).values, vec![0.0, 1.0, 2.0, 3.0]);
    }
}
