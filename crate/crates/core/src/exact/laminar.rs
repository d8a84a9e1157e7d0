//! Exact solver for laminar set systems.
//!
//! A laminar family (every two sets nested or disjoint) forms a forest under
//! inclusion. After adding the ground set as a root and singletons as leaves,
//! choosing sets becomes choosing tree nodes, and the disagreement of an
//! element is the weight picked on its root-to-leaf path.

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};

/// A weighted laminar family over elements `0..n_elements`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaminarFamily {
    pub n_elements: usize,
    /// Sorted element lists.
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
    pub demand: usize,
}

impl LaminarFamily {
    pub fn new(n_elements: usize, mut sets: Vec<Vec<usize>>, weights: Vec<f64>, demand: usize) -> Result<Self> {
        let mut problems = Vec::new();
        for (j, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            if let Some(&e) = set.iter().find(|&&e| e >= n_elements) {
                problems.push(format!("set {j} contains element {e} out of range (n = {n_elements})"));
            }
            if set.windows(2).any(|p| p[0] == p[1]) {
                problems.push(format!("set {j} repeats an element"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidInstance(problems));
        }
        let family = LaminarFamily { n_elements, sets, weights, demand };
        // Weight and demand checks are shared with the bipartite form.
        family.to_instance()?;
        if let Some((first, second)) = crossing_pair(&family.sets) {
            return Err(Error::NotLaminar { first, second });
        }
        Ok(family)
    }

    /// Bipartite form: agents are elements, candidates are sets.
    pub fn to_instance(&self) -> Result<Instance> {
        let mut adj = vec![Vec::new(); self.n_elements];
        for (j, set) in self.sets.iter().enumerate() {
            for &e in set {
                adj[e].push(j);
            }
        }
        Instance::new(self.sets.len(), adj, Some(self.weights.clone()), self.demand)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

fn crossing_pair(sets: &[Vec<usize>]) -> Option<(usize, usize)> {
    let mut sorted: Vec<Vec<usize>> = sets.to_vec();
    for s in &mut sorted {
        s.sort_unstable();
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (a, b) = (&sorted[i], &sorted[j]);
            let disjoint = !a.iter().any(|x| b.binary_search(x).is_ok());
            let strict = a.len() != b.len() && (is_subset(a, b) || is_subset(b, a));
            if !disjoint && !strict {
                return Some((i, j));
            }
        }
    }
    None
}

/// True iff every pair of sets is strictly nested or disjoint. Two copies of
/// the same non-empty set count as crossing.
pub fn detect_laminar(sets: &[Vec<usize>]) -> bool {
    crossing_pair(sets).is_none()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaminarNode {
    pub elements: Vec<usize>,
    /// `f64::INFINITY` for dummy nodes.
    pub weight: f64,
    pub dummy: bool,
    /// Index of the original set, `None` for dummies.
    pub source: Option<usize>,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

/// Inclusion tree of a laminar family, completed with a ground-set root and
/// singleton leaves. Parents always precede their children in `nodes`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaminarTree {
    pub nodes: Vec<LaminarNode>,
    pub root: usize,
}

impl LaminarTree {
    pub fn n_dummies(&self) -> usize {
        self.nodes.iter().filter(|n| n.dummy).count()
    }

    pub fn n_selectable(&self) -> usize {
        self.nodes.len() - self.n_dummies()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }
}

/// Builds the completed inclusion tree. Empty sets are rejected since they
/// have no place in the tree.
pub fn build_laminar_tree(n_elements: usize, sets: &[Vec<usize>], weights: &[f64]) -> Result<LaminarTree> {
    if sets.len() != weights.len() {
        return Err(Error::InvalidInstance(vec![format!("{} sets but {} weights", sets.len(), weights.len())]));
    }
    if let Some(j) = sets.iter().position(Vec::is_empty) {
        return Err(Error::Precondition(format!("set {j} is empty")));
    }
    if let Some((first, second)) = crossing_pair(sets) {
        return Err(Error::NotLaminar { first, second });
    }

    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(sets[j].len()));

    let mut nodes = Vec::with_capacity(sets.len() + n_elements + 1);
    let ground = order.first().copied().filter(|&j| sets[j].len() == n_elements);
    let mut root_node = LaminarNode {
        elements: (0..n_elements).collect(),
        weight: f64::INFINITY,
        dummy: true,
        source: None,
        children: Vec::new(),
        parent: None,
    };
    if let Some(j) = ground {
        root_node.weight = weights[j];
        root_node.dummy = false;
        root_node.source = Some(j);
    }
    nodes.push(root_node);

    // owner[e]: smallest set created so far that contains e.
    let mut owner = vec![0usize; n_elements];
    for &j in order.iter().skip(usize::from(ground.is_some())) {
        let mut elements = sets[j].clone();
        elements.sort_unstable();
        let parent = owner[elements[0]];
        let id = nodes.len();
        for &e in &elements {
            owner[e] = id;
        }
        nodes[parent].children.push(id);
        nodes.push(LaminarNode {
            elements,
            weight: weights[j],
            dummy: false,
            source: Some(j),
            children: Vec::new(),
            parent: Some(parent),
        });
    }
    for (e, &o) in owner.iter().enumerate() {
        if nodes[o].elements.len() == 1 {
            continue;
        }
        let id = nodes.len();
        nodes[o].children.push(id);
        nodes.push(LaminarNode {
            elements: vec![e],
            weight: f64::INFINITY,
            dummy: true,
            source: None,
            children: Vec::new(),
            parent: Some(o),
        });
    }
    Ok(LaminarTree { nodes, root: 0 })
}

/// DP state of one node: `best[x]` is the minimal max-disagreement over the
/// subtree's leaves when exactly `x` nodes of the subtree are selected.
struct NodeTable {
    best: Vec<f64>,
    take: Vec<bool>,
    // split[i][x]: budget given to child i (i >= 1) when children 0..=i share x.
    split: Vec<Vec<usize>>,
}

/// Minimizes the maximum leaf disagreement over selections of exactly `k`
/// tree nodes. `chosen` holds the original set indices; `value` is the DP
/// optimum.
pub fn laminar_dp(tree: &LaminarTree, k: usize) -> Result<Selection> {
    let available = tree.n_selectable();
    if k > available {
        return Err(Error::DemandTooLarge { k, available });
    }
    let n = tree.nodes.len();
    let mut tables: Vec<Option<NodeTable>> = (0..n).map(|_| None).collect();
    let mut size = vec![1usize; n];
    for u in (0..n).rev() {
        let node = &tree.nodes[u];
        for &c in &node.children {
            size[u] += size[c];
        }
        let cap = size[u].min(k);

        // Children merged left to right under max-combine.
        let mut merged: Vec<f64> = vec![0.0];
        let mut split = Vec::with_capacity(node.children.len());
        for (i, &c) in node.children.iter().enumerate() {
            let child = &tables[c].as_ref().expect("children are processed first").best;
            if i == 0 {
                merged = child.clone();
                split.push(Vec::new());
                continue;
            }
            let len = (merged.len() + child.len() - 1).min(cap + 1);
            let mut next = vec![f64::INFINITY; len];
            let mut arg = vec![0usize; len];
            for (a, &left) in merged.iter().enumerate() {
                for (b, &right) in child.iter().enumerate() {
                    if a + b >= len {
                        break;
                    }
                    let v = left.max(right);
                    if v < next[a + b] {
                        next[a + b] = v;
                        arg[a + b] = b;
                    }
                }
            }
            merged = next;
            split.push(arg);
        }

        let len = cap + 1;
        let at = |x: usize| merged.get(x).copied().unwrap_or(f64::INFINITY);
        let mut best = vec![f64::INFINITY; len];
        let mut take = vec![false; len];
        for x in 0..len {
            best[x] = at(x);
            if x > 0 {
                let with = node.weight + at(x - 1);
                if with < best[x] {
                    best[x] = with;
                    take[x] = true;
                }
            }
        }
        tables[u] = Some(NodeTable { best, take, split });
    }

    let root_table = tables[tree.root].as_ref().expect("root table");
    let value = root_table.best[k];

    let mut chosen = Vec::with_capacity(k);
    let mut stack = vec![(tree.root, k)];
    while let Some((u, mut x)) = stack.pop() {
        let table = tables[u].as_ref().expect("table");
        if x < table.take.len() && table.take[x] {
            chosen.push(tree.nodes[u].source.expect("selected nodes are original sets"));
            x -= 1;
        }
        let children = &tree.nodes[u].children;
        for i in (0..children.len()).rev() {
            let b = if i == 0 { x } else { table.split[i][x] };
            if b > 0 {
                stack.push((children[i], b));
            }
            x -= b;
        }
    }
    chosen.sort_unstable();
    Ok(Selection { chosen, value })
}

/// Solves a laminar instance exactly, with the value recomputed on the
/// bipartite form. Empty sets cost nothing and are taken first.
pub fn solve_laminar(family: &LaminarFamily) -> Result<Selection> {
    let instance = family.to_instance()?;
    let (empty, nonempty): (Vec<usize>, Vec<usize>) = (0..family.sets.len()).partition(|&j| family.sets[j].is_empty());
    let k = family.demand;
    if k <= empty.len() {
        return Selection::evaluate(&instance, empty[..k].to_vec());
    }
    let sets: Vec<Vec<usize>> = nonempty.iter().map(|&j| family.sets[j].clone()).collect();
    let weights: Vec<f64> = nonempty.iter().map(|&j| family.weights[j]).collect();
    let tree = build_laminar_tree(family.n_elements, &sets, &weights)?;
    let inner = laminar_dp(&tree, k - empty.len())?;
    let mut chosen = empty;
    chosen.extend(inner.chosen.iter().map(|&j| nonempty[j]));
    Selection::evaluate(&instance, chosen)
}
