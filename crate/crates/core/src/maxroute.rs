//! Maximum routability: the largest number of pebbles that some schedule of
//! at most `k` steps places on their destinations.
//!
//! Each pebble gets every length-`k` walk from its start to its destination
//! in the graph with a loop at every vertex. Two walks of different pebbles
//! are compatible when they never share a vertex at the same time and any
//! step entering the other's vertex is a genuine swap. A set of pairwise
//! compatible walks, one per pebble at most, is a clique in the multipartite
//! compatibility graph and reads off directly as a schedule.

use serde::Serialize;

use crate::clique::{greedy_clique, max_clique_partitioned, BitSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::SearchBudget;
use crate::perm::Permutation;
use crate::schedule::{MatchingStep, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Walk {
    pub owner: usize,
    /// `k + 1` positions; consecutive entries are equal or adjacent.
    pub vertices: Vec<Vertex>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every walk of exactly `k` steps from `start` to `target`, where a step
/// either stays or follows an edge. Walks are listed in lexicographic order.
pub fn enumerate_walks(g: &Graph, start: Vertex, target: Vertex, k: usize) -> Vec<Walk> {
    let dist = g.distances_from(target);
    let mut out = Vec::new();
    if dist[start] > k {
        return out;
    }
    let mut cur = vec![start];
    extend_walk(g, &dist, k, start, &mut cur, &mut out);
    out
}

fn extend_walk(g: &Graph, dist: &[usize], k: usize, owner: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Walk>) {
    let u = *cur.last().expect("walk has a start");
    let left = k + 1 - cur.len();
    if left == 0 {
        out.push(Walk { owner, vertices: cur.clone() });
        return;
    }
    let mut next: Vec<Vertex> = std::iter::once(u).chain(g.neighbors(u).iter().copied()).collect();
    next.sort_unstable();
    for w in next {
        if dist[w] < left {
            cur.push(w);
            extend_walk(g, dist, k, owner, cur, out);
            cur.pop();
        }
    }
}

/// Walks of equal length never occupy the same vertex at the same time, and
/// one enters the other's vertex exactly when the other enters its own.
pub fn walks_compatible(a: &Walk, b: &Walk) -> bool {
    let (x, y) = (&a.vertices, &b.vertices);
    if x.len() != y.len() {
        return false;
    }
    (0..x.len()).all(|t| x[t] != y[t]) && (1..x.len()).all(|t| (x[t] == y[t - 1]) == (x[t - 1] == y[t]))
}

/// Walks grouped by pebble, with compatibility edges between groups.
#[derive(Debug, Clone)]
pub struct CliqueGraph {
    walks: Vec<Walk>,
    blocks: Vec<Vec<usize>>,
    adj: Vec<BitSet>,
}

impl CliqueGraph {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    /// Walk indices of each pebble.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    /// Indices of the stay-in-place walks of fixed pebbles; always a clique.
    fn fixed_walks(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| b.iter().copied().find(|&w| self.walks[w].vertices.windows(2).all(|p| p[0] == p[1])))
            .filter(|&w| {
                let v = &self.walks[w].vertices;
                v.first() == v.last()
            })
            .collect()
    }
}

/// Builds the compatibility graph. `budget.max_states` caps the number of walks.
pub fn build_clique_graph(g: &Graph, pi: &Permutation, k: usize, budget: SearchBudget) -> Result<CliqueGraph> {
    if pi.len() != g.n() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let mut walks = Vec::new();
    let mut blocks = Vec::with_capacity(g.n());
    for i in 0..g.n() {
        let ws = enumerate_walks(g, i, pi.apply(i), k);
        blocks.push((walks.len()..walks.len() + ws.len()).collect());
        walks.extend(ws);
        if walks.len() > budget.max_states {
            return Err(Error::BudgetExhausted { lower_bound: 0, states: walks.len() });
        }
    }
    let mut adj = vec![BitSet::new(walks.len()); walks.len()];
    for u in 0..walks.len() {
        for v in u + 1..walks.len() {
            if walks[u].owner != walks[v].owner && walks_compatible(&walks[u], &walks[v]) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }
    Ok(CliqueGraph { walks, blocks, adj })
}

/// A maximal clique found greedily from the fixed pebbles' stay walks.
/// Deterministic per seed.
pub fn max_clique_greedy(cg: &CliqueGraph, seed: u64) -> Vec<usize> {
    let all: Vec<usize> = (0..cg.len()).collect();
    greedy_clique(&cg.adj, &all, &cg.fixed_walks(), seed, 16)
}

/// A maximum clique; `budget.max_states` caps the search nodes.
pub fn max_clique_walks(cg: &CliqueGraph, budget: SearchBudget) -> Result<Vec<usize>> {
    let out = max_clique_partitioned(&cg.adj, &cg.blocks, None, Some(budget.max_states as u64));
    if !out.complete {
        return Err(Error::BudgetExhausted { lower_bound: out.clique.len(), states: out.nodes as usize });
    }
    Ok(out.clique)
}

/// A schedule of at most `k` steps routing every pebble, or `None` when
/// none exists. Runs the clique search as a constraint search that needs
/// one walk from every pebble, so it scales to gadget-sized graphs far
/// beyond the state-space oracle.
pub fn route_within(g: &Graph, pi: &Permutation, k: usize, budget: SearchBudget) -> Result<Option<Schedule>> {
    let cg = build_clique_graph(g, pi, k, budget)?;
    let out = max_clique_partitioned(&cg.adj, &cg.blocks, Some(g.n()), Some(budget.max_states as u64));
    if !out.complete {
        return Err(Error::BudgetExhausted { lower_bound: 0, states: out.nodes as usize });
    }
    if out.clique.len() < g.n() {
        return Ok(None);
    }
    let chosen: Vec<&Walk> = out.clique.iter().map(|&w| &cg.walks[w]).collect();
    walks_to_schedule(g, &chosen).map(Some)
}

/// Reads the schedule off pairwise compatible walks of equal length `k`.
/// A walk stepping onto a vertex swaps with whatever pebble is there.
pub fn walks_to_schedule(g: &Graph, walks: &[&Walk]) -> Result<Schedule> {
    let k = walks.first().map_or(0, |w| w.len());
    let mut steps = Vec::with_capacity(k);
    for t in 0..k {
        let mut pairs: Vec<(Vertex, Vertex)> = walks
            .iter()
            .map(|w| (w.vertices[t], w.vertices[t + 1]))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let step = MatchingStep::new(pairs);
        step.validate(g).map_err(|msg| Error::InvalidStep { step: t, msg })?;
        steps.push(step);
    }
    Ok(Schedule::new(steps).without_empty_steps())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Greedy { seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxRouting {
    pub m: usize,
    pub schedule: Schedule,
    pub clique_graph_size: usize,
    pub walks: Vec<Walk>,
}

/// `mr(g, pi, k)` in exact mode, a lower bound in greedy mode, with a
/// schedule placing that many pebbles.
pub fn max_routability(g: &Graph, pi: &Permutation, k: usize, mode: Mode, budget: SearchBudget) -> Result<MaxRouting> {
    let cg = build_clique_graph(g, pi, k, budget)?;
    let clique = match mode {
        Mode::Exact => max_clique_walks(&cg, budget)?,
        Mode::Greedy { seed } => max_clique_greedy(&cg, seed),
    };
    debug_assert!(cg.is_clique(&clique));
    let chosen: Vec<&Walk> = clique.iter().map(|&w| &cg.walks[w]).collect();
    let schedule = walks_to_schedule(g, &chosen)?;
    Ok(MaxRouting { m: clique.len(), schedule, clique_graph_size: cg.len(), walks: chosen.into_iter().cloned().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle::max_agreements_exact;
    use rand::{Rng, SeedableRng};

    fn walk(owner: usize, vs: &[Vertex]) -> Walk {
        Walk { owner, vertices: vs.to_vec() }
    }

    #[test]
    fn walk_enumeration_examples() {
        let k2 = generate::complete(2);
        assert_eq!(enumerate_walks(&k2, 0, 0, 1), vec![walk(0, &[0, 0])]);
        let p3 = generate::path(3);
        assert_eq!(enumerate_walks(&p3, 0, 2, 2), vec![walk(0, &[0, 1, 2])]);
        assert!(enumerate_walks(&p3, 0, 2, 1).is_empty());
        let star = generate::star(5);
        for k in 0..4 {
            let count = enumerate_walks(&star, 0, 0, k).len();
            assert!(count <= 5usize.pow(k as u32));
        }
    }

    #[test]
    fn compatibility_examples() {
        assert!(walks_compatible(&walk(0, &[0, 1]), &walk(1, &[1, 0])));
        assert!(!walks_compatible(&walk(0, &[0, 1]), &walk(2, &[2, 1])));
        assert!(!walks_compatible(&walk(0, &[0, 1]), &walk(1, &[1, 1])));
    }

    #[test]
    fn clique_graph_examples() {
        let k2 = generate::complete(2);
        let cg = build_clique_graph(&k2, &Permutation::transposition(2, 0, 1), 1, SearchBudget::default()).unwrap();
        assert_eq!((cg.len(), cg.edge_count()), (2, 1));
        let p3 = generate::path(3);
        let cg = build_clique_graph(&p3, &Permutation::transposition(3, 0, 2), 2, SearchBudget::default()).unwrap();
        for &u in &cg.blocks()[0] {
            for &v in &cg.blocks()[2] {
                assert!(!cg.adjacent(u, v));
            }
        }
    }

    #[test]
    fn max_routability_examples() {
        let b = SearchBudget::default();
        let k3 = generate::complete(3);
        let rot = Permutation::new(vec![1, 2, 0]).unwrap();
        let r = max_routability(&k3, &rot, 1, Mode::Exact, b).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.m, max_agreements_exact(&k3, &rot, 1, b).unwrap());
        let g = generate::cycle(5);
        assert_eq!(max_routability(&g, &Permutation::identity(5), 2, Mode::Exact, b).unwrap().m, 5);
        let full = max_routability(&k3, &rot, 2, Mode::Exact, b).unwrap();
        assert_eq!(full.m, 3);
        assert!(crate::schedule::verify_schedule(&k3, &rot, &full.schedule).valid);
    }

    #[test]
    fn route_within_matches_routing_time() {
        let b = SearchBudget::default();
        let p4 = generate::path(4);
        let swap = Permutation::transposition(4, 0, 3);
        assert!(route_within(&p4, &swap, 2, b).unwrap().is_none());
        let s = route_within(&p4, &swap, 3, b).unwrap().unwrap();
        assert!(crate::schedule::verify_schedule(&p4, &swap, &s).valid);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let n = rng.gen_range(2..=7);
            let g = generate::random_connected(n, rng.gen_range(0.2..0.7), &mut rng);
            let pi = generate::random_permutation(n, &mut rng);
            let rt = crate::oracle::routing_time_exact(&g, &pi, b).unwrap().value;
            for k in 1..=4 {
                let found = route_within(&g, &pi, k, b).unwrap();
                assert_eq!(found.is_some(), rt <= k);
                if let Some(s) = found {
                    assert!(crate::schedule::verify_schedule(&g, &pi, &s).valid);
                }
            }
        }
    }

    #[test]
    fn greedy_keeps_fixed_points() {
        let g = generate::path(4);
        let pi = Permutation::transposition(4, 0, 1);
        let r = max_routability(&g, &pi, 1, Mode::Greedy { seed: 7 }, SearchBudget::default()).unwrap();
        assert_eq!(r.m, 4);
        let r = max_routability(&generate::cycle(4), &Permutation::identity(4), 3, Mode::Greedy { seed: 1 }, SearchBudget::default()).unwrap();
        assert_eq!(r.m, 4);
    }
}
