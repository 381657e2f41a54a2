//! Maximum clique search: plain branch-and-bound, a block-partitioned
//! variant for multipartite graphs, and a randomized greedy heuristic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

fn adjacency_bits(g: &Graph) -> Vec<BitSet> {
    (0..g.n())
        .map(|v| {
            let mut b = BitSet::new(g.n());
            for &w in g.neighbors(v) {
                b.insert(w);
            }
            b
        })
        .collect()
}

/// A maximum clique of `g`; among maximum cliques the lexicographically
/// smallest sorted vertex list is returned.
pub fn max_clique_exact(g: &Graph) -> Vec<Vertex> {
    let adj = adjacency_bits(g);
    let mut all = BitSet::new(g.n());
    for v in 0..g.n() {
        all.insert(v);
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand_plain(&adj, &mut current, all, &mut best);
    best
}

fn expand_plain(adj: &[BitSet], current: &mut Vec<Vertex>, cand: BitSet, best: &mut Vec<Vertex>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    let mut cand = cand;
    // Candidates are visited in increasing order so the first maximum found is
    // lexicographically smallest; a later clique must be strictly larger.
    loop {
        let Some(v) = cand.iter().next() else { return };
        if current.len() + cand.count() <= best.len() {
            return;
        }
        cand.remove(v);
        current.push(v);
        expand_plain(adj, current, cand.and(&adj[v]), best);
        current.pop();
    }
}

/// Exact maximum clique in a graph whose vertices are split into blocks with
/// no edges inside a block. The bound is the number of blocks that still
/// have candidates. When `at_least` is set, only cliques of at least that
/// size are searched for (`None` is returned if none exists).
pub(crate) fn max_clique_partitioned(
    adj: &[BitSet],
    blocks: &[Vec<usize>],
    at_least: Option<usize>,
    node_limit: Option<u64>,
) -> PartitionedOutcome {
    let len = adj.len();
    let mut cand = BitSet::new(len);
    for b in blocks {
        for &v in b {
            cand.insert(v);
        }
    }
    let block_masks: Vec<BitSet> = blocks
        .iter()
        .map(|b| {
            let mut m = BitSet::new(len);
            for &v in b {
                m.insert(v);
            }
            m
        })
        .collect();
    let mut search = PartSearch {
        adj,
        block_masks: &block_masks,
        best: Vec::new(),
        floor: at_least.map_or(0, |k| k.saturating_sub(1)),
        nodes: 0,
        node_limit,
        aborted: false,
    };
    let active: Vec<usize> = (0..blocks.len()).filter(|&b| block_masks[b].intersects(&cand)).collect();
    let mut current = Vec::new();
    search.expand(&mut current, &cand, &active);
    PartitionedOutcome { clique: search.best, nodes: search.nodes, complete: !search.aborted }
}

#[derive(Debug, Clone)]
pub(crate) struct PartitionedOutcome {
    pub clique: Vec<usize>,
    pub nodes: u64,
    pub complete: bool,
}

struct PartSearch<'a> {
    adj: &'a [BitSet],
    block_masks: &'a [BitSet],
    best: Vec<usize>,
    floor: usize,
    nodes: u64,
    node_limit: Option<u64>,
    aborted: bool,
}

impl PartSearch<'_> {
    fn target(&self) -> usize {
        self.best.len().max(self.floor)
    }

    fn expand(&mut self, current: &mut Vec<usize>, cand: &BitSet, active: &[usize]) {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            self.aborted = true;
            return;
        }
        if current.len() > self.target() {
            self.best = current.clone();
        }
        if current.len() + active.len() <= self.target() {
            return;
        }
        // Branch on the block with the fewest candidates.
        let (pos, &block) = active
            .iter()
            .enumerate()
            .min_by_key(|&(_, &b)| self.block_masks[b].and(cand).count())
            .expect("active blocks present");
        let choices: Vec<usize> = self.block_masks[block].and(cand).iter().collect();
        let rest: Vec<usize> = active.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &b)| b).collect();
        for v in choices {
            let next = cand.and(&self.adj[v]);
            let next_active: Vec<usize> =
                rest.iter().copied().filter(|&b| self.block_masks[b].intersects(&next)).collect();
            if current.len() + 1 + next_active.len() <= self.target() {
                continue;
            }
            current.push(v);
            self.expand(current, &next, &next_active);
            current.pop();
            if self.aborted {
                return;
            }
        }
        // Leave this block out of the clique.
        if current.len() + rest.len() > self.target() {
            self.expand(current, cand, &rest);
        }
    }
}

/// Randomized greedy maximal clique extending the clique `start`, with
/// `restarts` restarts; deterministic per seed.
pub(crate) fn greedy_clique(adj: &[BitSet], vertices: &[usize], start: &[usize], seed: u64, restarts: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    let mut order = vertices.to_vec();
    for round in 0..restarts.max(1) {
        if round == 0 {
            // First pass: highest degree first.
            order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count()));
        } else {
            order.shuffle(&mut rng);
        }
        let mut clique: Vec<usize> = start.to_vec();
        for &v in &order {
            if !clique.contains(&v) && clique.iter().all(|&u| adj[u].contains(v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn brute_max_clique(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&m| {
                let vs: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_families() {
        assert_eq!(max_clique_exact(&generate::complete(5)).len(), 5);
        assert_eq!(max_clique_exact(&generate::cycle(5)), vec![0, 1]);
        assert_eq!(max_clique_exact(&generate::petersen()).len(), 2);
        assert_eq!(brute_max_clique(&generate::petersen()), 2);
    }

    #[test]
    fn agrees_with_brute_force_and_is_maximal() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let g = generate::random_connected(10, 0.5, &mut rng);
            let c = max_clique_exact(&g);
            assert!(g.is_clique(&c));
            assert_eq!(c.len(), brute_max_clique(&g));
        }
    }

    #[test]
    fn tie_break_is_lexicographic() {
        // Two triangles {0,1,2} and {3,4,5} joined by edge 2-3.
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(max_clique_exact(&g), vec![0, 1, 2]);
    }

    #[test]
    fn partitioned_matches_plain_on_multipartite_graphs() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let parts = rng.gen_range(2..5);
            let per = rng.gen_range(1..4);
            let len = parts * per;
            let blocks: Vec<Vec<usize>> = (0..parts).map(|b| (b * per..(b + 1) * per).collect()).collect();
            let mut edges = Vec::new();
            for u in 0..len {
                for v in u + 1..len {
                    if u / per != v / per && rng.gen_bool(0.6) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(len, edges).unwrap();
            let adj = adjacency_bits(&g);
            let out = max_clique_partitioned(&adj, &blocks, None, None);
            assert!(out.complete);
            assert!(g.is_clique(&out.clique));
            assert_eq!(out.clique.len(), max_clique_exact(&g).len());
            let greedy = greedy_clique(&adj, &(0..len).collect::<Vec<_>>(), &[], 1, 5);
            assert!(g.is_clique(&greedy));
            assert!(greedy.len() <= out.clique.len());
        }
    }
}
