//! Red-Blue coloring on graphs of maximum degree two.
//!
//! Red vertices carry a cap on how many of their white neighbours may turn
//! blue; the question is whether exactly `k` whites can be colored blue.
//! Each connected component is a path or a cycle, so a per-component DP finds
//! every achievable blue count and a subset-sum over components picks counts
//! adding up to `k`.

use crate::error::{Error, Result};

/// Input for [`red_blue`]: reds are listed with their (at most two) white
/// neighbours and a cap in `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RedBlueInstance {
    pub n_white: usize,
    pub red_adj: Vec<Vec<usize>>,
    pub bounds: Vec<u8>,
    pub k: usize,
}

#[derive(Clone, Copy, Debug)]
struct Link {
    to: usize,
    // Both ends blue is forbidden.
    exclusive: bool,
}

/// A white path or cycle after reducing reds to pairwise constraints.
#[derive(Debug)]
struct Component {
    whites: Vec<usize>,
    // links[i] joins whites[i] and whites[i + 1] (wrapping for cycles).
    links: Vec<bool>,
    cyclic: bool,
}

impl RedBlueInstance {
    fn check(&self) -> Result<()> {
        if self.bounds.len() != self.red_adj.len() {
            return Err(Error::Precondition(format!(
                "{} reds but {} bounds",
                self.red_adj.len(),
                self.bounds.len()
            )));
        }
        let mut white_deg = vec![0usize; self.n_white];
        for (r, list) in self.red_adj.iter().enumerate() {
            if list.len() > 2 {
                return Err(Error::Precondition(format!("red {r} has degree {} > 2", list.len())));
            }
            if self.bounds[r] > 2 {
                return Err(Error::Precondition(format!("red {r} has bound {} > 2", self.bounds[r])));
            }
            if list.len() == 2 && list[0] == list[1] {
                return Err(Error::Precondition(format!("red {r} lists a white twice")));
            }
            for &w in list {
                if w >= self.n_white {
                    return Err(Error::Precondition(format!("red {r} lists white {w} out of range")));
                }
                white_deg[w] += 1;
                if white_deg[w] > 2 {
                    return Err(Error::Precondition(format!("white {w} has degree > 2")));
                }
            }
        }
        Ok(())
    }
}

/// Decides whether exactly `rb.k` whites can be colored blue within every red
/// cap. Returns the sorted blue whites of a witness coloring, or `None`.
pub fn red_blue(rb: &RedBlueInstance) -> Result<Option<Vec<usize>>> {
    rb.check()?;
    if rb.k > rb.n_white {
        return Ok(None);
    }

    let mut forced_white = vec![false; rb.n_white];
    let mut links: Vec<Vec<(Link, usize)>> = vec![Vec::new(); rb.n_white];
    let mut n_links = 0;
    for (r, list) in rb.red_adj.iter().enumerate() {
        let cap = rb.bounds[r] as usize;
        if cap == 0 {
            for &w in list {
                forced_white[w] = true;
            }
        }
        if list.len() == 2 {
            let (a, b) = (list[0], list[1]);
            let exclusive = cap == 1;
            links[a].push((Link { to: b, exclusive }, n_links));
            links[b].push((Link { to: a, exclusive }, n_links));
            n_links += 1;
        }
    }

    let components = split_components(rb.n_white, &links);
    let tables: Vec<ComponentDp> = components.iter().map(|c| ComponentDp::run(c, &forced_white)).collect();

    // reach[j][s]: the first j components can contribute exactly s blues.
    let k = rb.k;
    let mut reach = vec![vec![false; k + 1]; tables.len() + 1];
    reach[0][0] = true;
    for (j, table) in tables.iter().enumerate() {
        for s in 0..=k {
            if !reach[j][s] {
                continue;
            }
            for c in table.counts() {
                if s + c <= k {
                    reach[j + 1][s + c] = true;
                }
            }
        }
    }
    if !reach[tables.len()][k] {
        return Ok(None);
    }

    let mut blue = Vec::with_capacity(k);
    let mut remaining = k;
    for j in (0..tables.len()).rev() {
        let c = tables[j]
            .counts()
            .into_iter()
            .find(|&c| c <= remaining && reach[j][remaining - c])
            .expect("reachable total has a predecessor");
        blue.extend(tables[j].witness(&components[j], c));
        remaining -= c;
    }
    blue.sort_unstable();
    Ok(Some(blue))
}

fn split_components(n_white: usize, links: &[Vec<(Link, usize)>]) -> Vec<Component> {
    let mut visited = vec![false; n_white];
    let mut out = Vec::new();
    // Paths first from their endpoints, then whatever is left is a cycle.
    for pass in 0..2 {
        for start in 0..n_white {
            if visited[start] || (pass == 0 && links[start].len() == 2) {
                continue;
            }
            let mut whites = vec![start];
            let mut flags = Vec::new();
            visited[start] = true;
            let mut cur = start;
            let mut used_edge = usize::MAX;
            let mut cyclic = false;
            loop {
                let next = links[cur].iter().find(|(_, id)| *id != used_edge).copied();
                let Some((link, id)) = next else { break };
                if link.to == start && pass == 1 {
                    flags.push(link.exclusive);
                    cyclic = true;
                    break;
                }
                flags.push(link.exclusive);
                used_edge = id;
                cur = link.to;
                visited[cur] = true;
                whites.push(cur);
            }
            out.push(Component { whites, links: flags, cyclic });
        }
    }
    out
}

/// Reachability table over positions of one component.
struct ComponentDp {
    // state[i][c][last][first] for the prefix ending at position i.
    state: Vec<Vec<[[bool; 2]; 2]>>,
    len: usize,
    cyclic: bool,
    closing_exclusive: bool,
}

impl ComponentDp {
    fn run(comp: &Component, forced_white: &[bool]) -> Self {
        let len = comp.whites.len();
        let mut state = vec![vec![[[false; 2]; 2]; len + 1]; len];
        for b in 0..2 {
            if b == 1 && forced_white[comp.whites[0]] {
                continue;
            }
            state[0][b][b][b] = true;
        }
        for i in 1..len {
            let exclusive = comp.links[i - 1];
            let blocked = forced_white[comp.whites[i]];
            for c in 0..=i {
                for last in 0..2 {
                    for first in 0..2 {
                        if !state[i - 1][c][last][first] {
                            continue;
                        }
                        state[i][c][0][first] = true;
                        if !blocked && !(exclusive && last == 1) {
                            state[i][c + 1][1][first] = true;
                        }
                    }
                }
            }
        }
        let closing_exclusive = comp.cyclic && comp.links.last().copied().unwrap_or(false);
        ComponentDp { state, len, cyclic: comp.cyclic, closing_exclusive }
    }

    fn final_ok(&self, last: usize, first: usize) -> bool {
        !(self.cyclic && self.closing_exclusive && last == 1 && first == 1)
    }

    fn counts(&self) -> Vec<usize> {
        let end = &self.state[self.len - 1];
        (0..=self.len)
            .filter(|&c| {
                (0..2).any(|last| (0..2).any(|first| end[c][last][first] && self.final_ok(last, first)))
            })
            .collect()
    }

    fn witness(&self, comp: &Component, count: usize) -> Vec<usize> {
        let end = &self.state[self.len - 1];
        let (mut last, first) = (0..2)
            .flat_map(|l| (0..2).map(move |f| (l, f)))
            .find(|&(l, f)| end[count][l][f] && self.final_ok(l, f))
            .expect("count is achievable");
        let mut c = count;
        let mut blue = Vec::new();
        for i in (0..self.len).rev() {
            if last == 1 {
                blue.push(comp.whites[i]);
            }
            if i == 0 {
                break;
            }
            let prev_c = c - last;
            let exclusive = comp.links[i - 1];
            let prev_last = (0..2)
                .find(|&pl| {
                    self.state[i - 1][prev_c][pl][first] && !(last == 1 && exclusive && pl == 1)
                })
                .expect("predecessor state exists");
            c = prev_c;
            last = prev_last;
        }
        blue
    }
}

/// Builds the Red-Blue instance for a bipartite graph of maximum degree two:
/// agents become reds and candidates become whites.
pub fn from_bipartite(adj: &[Vec<usize>], n_candidates: usize, bounds: Vec<u8>, k: usize) -> RedBlueInstance {
    RedBlueInstance { n_white: n_candidates, red_adj: adj.to_vec(), bounds, k }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive check over all colorings with exactly `k` blues.
    fn oracle(rb: &RedBlueInstance) -> bool {
        let n = rb.n_white;
        (0u32..(1 << n)).filter(|mask| mask.count_ones() as usize == rb.k).any(|mask| {
            rb.red_adj.iter().zip(&rb.bounds).all(|(list, &cap)| {
                list.iter().filter(|&&w| mask >> w & 1 == 1).count() <= cap as usize
            })
        })
    }

    fn verify_witness(rb: &RedBlueInstance, blue: &[usize]) {
        assert_eq!(blue.len(), rb.k);
        for (list, &cap) in rb.red_adj.iter().zip(&rb.bounds) {
            assert!(list.iter().filter(|w| blue.contains(w)).count() <= cap as usize);
        }
    }

    #[test]
    fn single_path_examples() {
        // w0 - r - w1 with cap 1.
        let mut rb = RedBlueInstance { n_white: 2, red_adj: vec![vec![0, 1]], bounds: vec![1], k: 1 };
        assert_eq!(red_blue(&rb).unwrap(), Some(vec![0]));
        rb.k = 2;
        assert_eq!(red_blue(&rb).unwrap(), None);
    }

    #[test]
    fn two_components_combine() {
        let rb = RedBlueInstance {
            n_white: 4,
            red_adj: vec![vec![0, 1], vec![2, 3]],
            bounds: vec![1, 1],
            k: 2,
        };
        let blue = red_blue(&rb).unwrap().unwrap();
        verify_witness(&rb, &blue);
    }

    #[test]
    fn whites_without_reds_are_free() {
        let rb = RedBlueInstance { n_white: 3, red_adj: vec![], bounds: vec![], k: 3 };
        assert_eq!(red_blue(&rb).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn two_cycle_with_parallel_reds() {
        let rb = RedBlueInstance {
            n_white: 2,
            red_adj: vec![vec![0, 1], vec![1, 0]],
            bounds: vec![2, 1],
            k: 2,
        };
        assert_eq!(red_blue(&rb).unwrap(), None);
    }

    #[test]
    fn rejects_malformed() {
        let rb = RedBlueInstance { n_white: 3, red_adj: vec![vec![0, 1, 2]], bounds: vec![1], k: 1 };
        assert!(red_blue(&rb).is_err());
        let rb = RedBlueInstance { n_white: 2, red_adj: vec![vec![0, 1]], bounds: vec![3], k: 1 };
        assert!(red_blue(&rb).is_err());
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n_white = rng.gen_range(1..=10);
            let mut white_deg = vec![0; n_white];
            let mut red_adj = Vec::new();
            for _ in 0..rng.gen_range(0..=n_white + 2) {
                let want = rng.gen_range(0..=2);
                let mut list: Vec<usize> = Vec::new();
                for _ in 0..want {
                    let w = rng.gen_range(0..n_white);
                    if white_deg[w] < 2 && !list.contains(&w) {
                        white_deg[w] += 1;
                        list.push(w);
                    }
                }
                red_adj.push(list);
            }
            let bounds = red_adj.iter().map(|_| rng.gen_range(0..=2)).collect();
            for k in 0..=n_white {
                let rb = RedBlueInstance { n_white, red_adj: red_adj.clone(), bounds: Vec::clone(&bounds), k };
                let got = red_blue(&rb).unwrap();
                assert_eq!(got.is_some(), oracle(&rb), "{rb:?}");
                if let Some(blue) = got {
                    verify_witness(&rb, &blue);
                }
            }
        }
    }
}
