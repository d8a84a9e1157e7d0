//! Bipartite instance model shared by every solver.
//!
//! Agents (the left side) are the ground elements; candidates (the right side)
//! are the sets that may be selected. Selecting a candidate charges its weight
//! to every adjacent agent, and the objective is the largest total charge any
//! agent receives.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A fair k-set selection instance in bipartite form.
///
/// Both sides are densely indexed from zero; solvers rely on index order for
/// tie-breaking, so it is preserved by every transformation in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    /// Number of candidates (right-side vertices).
    pub n_candidates: usize,
    /// `adj[u]` is the sorted list of candidates adjacent to agent `u`.
    pub adj: Vec<Vec<usize>>,
    /// Nonnegative weight per candidate.
    pub weights: Vec<f64>,
    /// Required number of selected candidates.
    pub demand: usize,
}

/// A single violated invariant reported by [`Instance::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    IndexOutOfRange { agent: usize, candidate: usize },
    DuplicateNeighbor { agent: usize, candidate: usize },
    WeightCount { expected: usize, found: usize },
    NegativeWeight { candidate: usize, weight: f64 },
    NonFiniteWeight { candidate: usize },
    ZeroDemand,
    DemandExceedsCandidates { demand: usize, m: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IndexOutOfRange { agent, candidate } => {
                write!(f, "index out of range: agent {agent} lists candidate {candidate}")
            }
            Violation::DuplicateNeighbor { agent, candidate } => {
                write!(f, "duplicate edge: agent {agent} lists candidate {candidate} twice")
            }
            Violation::WeightCount { expected, found } => {
                write!(f, "weight count mismatch: expected {expected}, found {found}")
            }
            Violation::NegativeWeight { candidate, weight } => {
                write!(f, "negative weight: candidate {candidate} has weight {weight}")
            }
            Violation::NonFiniteWeight { candidate } => {
                write!(f, "non-finite weight on candidate {candidate}")
            }
            Violation::ZeroDemand => write!(f, "demand must be at least 1"),
            Violation::DemandExceedsCandidates { demand, m } => {
                write!(f, "demand {demand} exceeds candidate count {m}")
            }
        }
    }
}

impl Instance {
    /// Builds an instance, sorting adjacency lists and checking every invariant.
    /// Missing weights default to 1.
    pub fn new(
        n_candidates: usize,
        mut adj: Vec<Vec<usize>>,
        weights: Option<Vec<f64>>,
        demand: usize,
    ) -> Result<Self> {
        for list in &mut adj {
            list.sort_unstable();
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; n_candidates]);
        let instance = Instance { n_candidates, adj, weights, demand };
        instance.ensure_valid()?;
        Ok(instance)
    }

    pub fn n_agents(&self) -> usize {
        self.adj.len()
    }

    /// Returns every violated invariant; empty when the instance is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = self.n_candidates;
        for (agent, list) in self.adj.iter().enumerate() {
            let mut seen = vec![false; m];
            for &candidate in list {
                if candidate >= m {
                    out.push(Violation::IndexOutOfRange { agent, candidate });
                } else if seen[candidate] {
                    out.push(Violation::DuplicateNeighbor { agent, candidate });
                } else {
                    seen[candidate] = true;
                }
            }
        }
        if self.weights.len() != m {
            out.push(Violation::WeightCount { expected: m, found: self.weights.len() });
        }
        for (candidate, &weight) in self.weights.iter().enumerate() {
            if !weight.is_finite() {
                out.push(Violation::NonFiniteWeight { candidate });
            } else if weight < 0.0 {
                out.push(Violation::NegativeWeight { candidate, weight });
            }
        }
        if self.demand == 0 {
            out.push(Violation::ZeroDemand);
        }
        if self.demand > m {
            out.push(Violation::DemandExceedsCandidates { demand: self.demand, m });
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations.iter().map(ToString::to_string).collect()))
        }
    }

    /// Reverse adjacency: for each candidate, the agents that contain it.
    pub fn candidate_adj(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_candidates];
        for (agent, list) in self.adj.iter().enumerate() {
            for &v in list {
                out[v].push(agent);
            }
        }
        out
    }

    pub fn candidate_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_candidates];
        for list in &self.adj {
            for &v in list {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn is_unit_weight(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// True when every weight is a whole number, so sums are exact in `f64`.
    pub fn has_integer_weights(&self) -> bool {
        self.weights.iter().all(|&w| w.fract() == 0.0 && w.abs() < 2f64.powi(40))
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Per-agent disagreement of `chosen`.
    pub fn disagreements(&self, chosen: &[usize]) -> Result<Vec<f64>> {
        let mask = self.mask(chosen)?;
        Ok(self
            .adj
            .iter()
            .map(|list| list.iter().filter(|&&v| mask[v]).map(|&v| self.weights[v]).sum())
            .collect())
    }

    /// Largest disagreement over all agents; zero if there are no agents or
    /// nothing is chosen.
    pub fn max_disagreement(&self, chosen: &[usize]) -> Result<f64> {
        Ok(self.disagreements(chosen)?.into_iter().fold(0.0, f64::max))
    }

    fn mask(&self, chosen: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n_candidates];
        for &v in chosen {
            if v >= self.n_candidates {
                return Err(Error::IndexOutOfRange { index: v, m: self.n_candidates });
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let max_agent_degree = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        let max_candidate_degree = self.candidate_degrees().into_iter().max().unwrap_or(0);
        DegreeProfile {
            max_degree: max_agent_degree.max(max_candidate_degree),
            max_agent_degree,
            max_candidate_degree,
        }
    }

    /// Removes candidates with no adjacent agent, lowering the demand by one
    /// per removal. The result lifts any residual solution back to this
    /// instance with the same objective value.
    pub fn preprocess(&self) -> Preprocessed {
        let degrees = self.candidate_degrees();
        let mut kept = Vec::new();
        let mut removed = Vec::new();
        let mut new_index = vec![usize::MAX; self.n_candidates];
        for (v, &d) in degrees.iter().enumerate() {
            if d == 0 {
                removed.push(v);
            } else {
                new_index[v] = kept.len();
                kept.push(v);
            }
        }
        let readded = removed.len().min(self.demand);
        let residual = if readded == self.demand {
            None
        } else {
            let adj = self
                .adj
                .iter()
                .map(|list| list.iter().map(|&v| new_index[v]).collect())
                .collect();
            let weights = kept.iter().map(|&v| self.weights[v]).collect();
            Some(Instance {
                n_candidates: kept.len(),
                adj,
                weights,
                demand: self.demand - readded,
            })
        };
        removed.truncate(readded);
        Preprocessed { residual, kept, readded: removed, original_demand: self.demand }
    }
}

/// Output of [`Instance::preprocess`].
#[derive(Clone, Debug)]
pub struct Preprocessed {
    /// Residual instance; `None` when isolated candidates alone meet the demand.
    pub residual: Option<Instance>,
    /// Residual candidate index to original candidate index.
    pub kept: Vec<usize>,
    /// Isolated candidates that are added back to every lifted solution.
    pub readded: Vec<usize>,
    pub original_demand: usize,
}

impl Preprocessed {
    /// Maps a residual selection to the original indexing and adds the
    /// isolated candidates that the demand reduction accounted for.
    pub fn lift(&self, residual_chosen: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = residual_chosen.iter().map(|&v| self.kept[v]).collect();
        out.extend_from_slice(&self.readded);
        out.sort_unstable();
        out
    }

    /// True if nothing was removed.
    pub fn is_identity(&self) -> bool {
        self.readded.is_empty() && self.kept.len() == self.residual.as_ref().map_or(0, |r| r.n_candidates)
    }
}

/// Maximum vertex degrees of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub max_degree: usize,
    pub max_agent_degree: usize,
    pub max_candidate_degree: usize,
}

/// A set of chosen candidates together with its recomputed objective value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Selection {
    pub chosen: Vec<usize>,
    pub value: f64,
}

impl Selection {
    /// Sorts and deduplicates `chosen`, then evaluates it from scratch.
    pub fn evaluate(instance: &Instance, mut chosen: Vec<usize>) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        let value = instance.max_disagreement(&chosen)?;
        Ok(Selection { chosen, value })
    }

    pub fn empty() -> Self {
        Selection { chosen: Vec::new(), value: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn meets_demand(&self, instance: &Instance) -> bool {
        self.chosen.len() >= instance.demand
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(m: usize, adj: Vec<Vec<usize>>, k: usize) -> Instance {
        Instance::new(m, adj, None, k).unwrap()
    }

    #[test]
    fn valid_two_by_two() {
        let i = inst(2, vec![vec![0, 1], vec![1]], 1);
        assert!(i.validate().is_empty());
    }

    #[test]
    fn reports_out_of_range_and_negative_weight() {
        let i = Instance { n_candidates: 2, adj: vec![vec![0, 2]], weights: vec![1.0, 1.0], demand: 1 };
        let v = i.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("index out of range"));

        let i = Instance { n_candidates: 2, adj: vec![vec![0, 1]], weights: vec![-1.0, 1.0], demand: 1 };
        let v = i.validate();
        assert!(v[0].to_string().contains("negative weight"));
        assert!(Instance::new(2, vec![vec![0, 1]], Some(vec![-1.0, 1.0]), 1).is_err());
    }

    #[test]
    fn reports_duplicates_and_demand() {
        let i = Instance { n_candidates: 2, adj: vec![vec![1, 1]], weights: vec![1.0; 2], demand: 3 };
        let v = i.validate();
        assert!(v.contains(&Violation::DuplicateNeighbor { agent: 0, candidate: 1 }));
        assert!(v.contains(&Violation::DemandExceedsCandidates { demand: 3, m: 2 }));
    }

    #[test]
    fn disagreement_examples() {
        let i = inst(2, vec![vec![0, 1]], 1);
        assert_eq!(i.max_disagreement(&[0, 1]).unwrap(), 2.0);
        let i = Instance::new(2, vec![vec![0, 1]], Some(vec![0.5, 2.0]), 1).unwrap();
        assert_eq!(i.max_disagreement(&[1]).unwrap(), 2.0);
        assert_eq!(i.max_disagreement(&[]).unwrap(), 0.0);
        assert!(matches!(i.max_disagreement(&[2]), Err(Error::IndexOutOfRange { index: 2, m: 2 })));
    }

    #[test]
    fn degree_examples() {
        let matching = inst(3, vec![vec![0], vec![1], vec![2]], 1);
        assert_eq!(matching.degree_profile().max_degree, 1);
        let star = inst(5, vec![(0..5).collect()], 1);
        assert_eq!(star.degree_profile().max_degree, 5);
        assert_eq!(star.degree_profile().max_candidate_degree, 1);
    }

    #[test]
    fn preprocess_removes_isolated() {
        // a has degree 1, b is isolated.
        let i = inst(2, vec![vec![0]], 2);
        let p = i.preprocess();
        let r = p.residual.as_ref().unwrap();
        assert_eq!(r.n_candidates, 1);
        assert_eq!(r.demand, 1);
        assert_eq!(p.lift(&[0]), vec![0, 1]);
    }

    #[test]
    fn preprocess_fixed_point_and_idempotent() {
        let i = inst(3, vec![vec![0, 1], vec![2]], 2);
        let p = i.preprocess();
        assert!(p.is_identity());
        assert_eq!(p.residual.as_ref().unwrap(), &i);
        let again = p.residual.as_ref().unwrap().preprocess();
        assert_eq!(again.residual, p.residual);
    }

    #[test]
    fn preprocess_all_isolated() {
        let i = inst(3, vec![vec![]], 3);
        let p = i.preprocess();
        assert!(p.residual.is_none());
        let lifted = p.lift(&[]);
        assert_eq!(lifted, vec![0, 1, 2]);
        assert_eq!(i.max_disagreement(&lifted).unwrap(), 0.0);
    }
}
