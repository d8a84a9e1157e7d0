//! Instance generators: the integrality-gap family, the graph incidence
//! reduction, and random families for testing.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::laminar::LaminarFamily;
use crate::instance::Instance;
use crate::io::InstanceDoc;
use crate::rounding::rng::{seeded, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    Unit,
    /// Uniform reals in `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Uniform integers in `[lo, hi]`.
    Integer { lo: u32, hi: u32 },
}

impl WeightSpec {
    fn check(&self) -> Result<()> {
        match *self {
            WeightSpec::Uniform { lo, hi } if !(0.0 <= lo && lo <= hi && hi.is_finite()) => {
                Err(Error::InvalidParameters(format!("bad weight range [{lo}, {hi}]")))
            }
            WeightSpec::Integer { lo, hi } if lo > hi => {
                Err(Error::InvalidParameters(format!("bad weight range [{lo}, {hi}]")))
            }
            _ => Ok(()),
        }
    }

    pub fn sample(&self, rng: &mut Rng, count: usize) -> Vec<f64> {
        (0..count)
            .map(|_| match *self {
                WeightSpec::Unit => 1.0,
                WeightSpec::Uniform { lo, hi } => rng.gen_range(lo..=hi),
                WeightSpec::Integer { lo, hi } => f64::from(rng.gen_range(lo..=hi)),
            })
            .collect()
    }
}

/// Every `k`-subset of `k^2` candidates becomes an agent, in lexicographic
/// order. Any `k` candidates hit some agent `k` times, while `x = 1/k`
/// loads each agent by exactly one.
pub fn gap(k: usize) -> Result<Instance> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidParameters(format!("gap instances need 2 <= k <= 4, got {k}")));
    }
    let m = k * k;
    let mut adj = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        adj.push(subset.clone());
        // Next combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| subset[i] < m - k + i) else { break };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Instance::new(m, adj, None, k)
}

/// Edge-vertex incidence instance of a simple graph: one agent per edge,
/// adjacent to its endpoints, with demand `p`. Value 1 is achievable exactly
/// when the graph has an independent set of size `p`.
pub fn incidence(n_vertices: usize, edges: &[(usize, usize)], p: usize) -> Result<Instance> {
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in edges {
        if a == b {
            return Err(Error::InvalidParameters(format!("self-loop at vertex {a}")));
        }
        if a >= n_vertices || b >= n_vertices {
            return Err(Error::InvalidParameters(format!("edge ({a}, {b}) out of range")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidParameters(format!("repeated edge ({a}, {b})")));
        }
    }
    Instance::new(n_vertices, edges.iter().map(|&(a, b)| vec![a, b]).collect(), None, p)
}

/// Erdős–Rényi graph `G(n, q)` as an edge list.
pub fn random_graph(n_vertices: usize, q: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n_vertices {
        for b in a + 1..n_vertices {
            if rng.gen::<f64>() < q {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BipartiteParams {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub k: usize,
    pub weights: WeightSpec,
}

/// Random bipartite instance with every degree at most `max_degree` and no
/// isolated candidate. Each candidate first gets one agent with spare
/// capacity; further edges are added at random up to a random target.
pub fn random_bipartite(params: &BipartiteParams, seed: u64) -> Result<Instance> {
    let BipartiteParams { n, m, max_degree: d, k, weights } = *params;
    weights.check()?;
    if d == 0 || k == 0 || k > m {
        return Err(Error::InvalidParameters(format!("need max_degree >= 1 and 1 <= k <= m (k = {k}, m = {m})")));
    }
    if n * d < m {
        return Err(Error::InvalidParameters(format!(
            "{n} agents of degree <= {d} cannot cover {m} candidates"
        )));
    }
    let mut rng = seeded(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cand_deg = vec![0usize; m];

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    for v in order {
        let open: Vec<usize> = (0..n).filter(|&u| adj[u].len() < d).collect();
        let u = *open.choose(&mut rng).expect("capacity n * d >= m");
        adj[u].push(v);
        cand_deg[v] += 1;
    }

    let max_edges = (n * d).min(m * d).min(n * m);
    let target = rng.gen_range(m..=max_edges);
    let mut edges = m;
    let mut attempts = 0;
    while edges < target && attempts < 20 * max_edges {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..m);
        if adj[u].len() < d && cand_deg[v] < d && !adj[u].contains(&v) {
            adj[u].push(v);
            cand_deg[v] += 1;
            edges += 1;
        }
    }
    let w = weights.sample(&mut rng, m);
    Instance::new(m, adj, Some(w), k)
}

/// Random laminar family built by recursive splitting: a random binary
/// hierarchy of `2n - 1` nested blocks over shuffled elements, from which
/// `n_sets` distinct blocks are sampled.
pub fn random_laminar(n_elements: usize, n_sets: usize, k: usize, weights: WeightSpec, seed: u64) -> Result<LaminarFamily> {
    weights.check()?;
    if n_sets == 0 || n_elements == 0 || n_sets > 2 * n_elements - 1 {
        return Err(Error::InvalidParameters(format!(
            "{n_elements} elements admit between 1 and {} nested-or-disjoint blocks, asked for {n_sets}",
            (2 * n_elements).saturating_sub(1)
        )));
    }
    let mut rng = seeded(seed);
    let mut elements: Vec<usize> = (0..n_elements).collect();
    elements.shuffle(&mut rng);
    let mut blocks = Vec::with_capacity(2 * n_elements - 1);
    let mut stack = vec![(0, n_elements)];
    while let Some((lo, hi)) = stack.pop() {
        blocks.push(elements[lo..hi].to_vec());
        if hi - lo >= 2 {
            let cut = rng.gen_range(lo + 1..hi);
            stack.push((lo, cut));
            stack.push((cut, hi));
        }
    }
    let mut sets: Vec<Vec<usize>> = blocks.choose_multiple(&mut rng, n_sets).cloned().collect();
    for s in &mut sets {
        s.sort_unstable();
    }
    let w = weights.sample(&mut rng, n_sets);
    LaminarFamily::new(n_elements, sets, w, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// Disjoint paths and cycles, each given by its number of candidates. A
/// path `L - R - L - R ... R` has as many agents as candidates; a cycle of
/// `l >= 2` candidates alternates with `l` agents.
pub fn path_cycle(components: &[(ComponentKind, usize)], k: usize, weights: WeightSpec, seed: u64) -> Result<Instance> {
    weights.check()?;
    let mut adj = Vec::new();
    let mut base = 0;
    for &(kind, len) in components {
        match kind {
            ComponentKind::Path if len >= 1 => {
                adj.push(vec![base]);
                adj.extend((1..len).map(|i| vec![base + i - 1, base + i]));
            }
            ComponentKind::Cycle if len >= 2 => {
                adj.extend((0..len).map(|i| vec![base + i, base + (i + 1) % len]));
            }
            _ => return Err(Error::InvalidParameters(format!("invalid {kind:?} component of length {len}"))),
        }
        base += len;
    }
    let w = weights.sample(&mut seeded(seed), base);
    Instance::new(base, adj, Some(w), k)
}

/// A generator family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GenSpec {
    Gap { k: usize },
    /// `G(vertices, edge_prob)` reduced with demand `k`.
    Incidence { vertices: usize, edge_prob: f64, k: usize },
    RandomBipartite(BipartiteParams),
    RandomLaminar { elements: usize, sets: usize, k: usize, weights: WeightSpec },
    PathCycle { components: Vec<(ComponentKind, usize)>, k: usize, weights: WeightSpec },
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Gap { .. } => "gap",
            GenSpec::Incidence { .. } => "incidence",
            GenSpec::RandomBipartite(_) => "random-bipartite",
            GenSpec::RandomLaminar { .. } => "random-laminar",
            GenSpec::PathCycle { .. } => "path-cycle",
        }
    }

    pub fn generate(&self, seed: u64) -> Result<InstanceDoc> {
        Ok(match self {
            GenSpec::Gap { k } => InstanceDoc::Bipartite(gap(*k)?),
            GenSpec::Incidence { vertices, edge_prob, k } => {
                if !(0.0..=1.0).contains(edge_prob) {
                    return Err(Error::InvalidParameters(format!("edge probability {edge_prob} outside [0, 1]")));
                }
                let edges = random_graph(*vertices, *edge_prob, &mut seeded(seed));
                InstanceDoc::Bipartite(incidence(*vertices, &edges, *k)?)
            }
            GenSpec::RandomBipartite(p) => InstanceDoc::Bipartite(random_bipartite(p, seed)?),
            GenSpec::RandomLaminar { elements, sets, k, weights } => {
                InstanceDoc::Laminar(random_laminar(*elements, *sets, *k, *weights, seed)?)
            }
            GenSpec::PathCycle { components, k, weights } => {
                InstanceDoc::Bipartite(path_cycle(components, *k, *weights, seed)?)
            }
        })
    }
}
