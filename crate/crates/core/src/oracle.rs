//! Exhaustive search over matching sequences.
//!
//! Configurations are packed four bits per vertex into a `u64`, so the
//! oracle handles graphs with at most 16 vertices. Every matching is its own
//! inverse, which makes the configuration graph undirected: distances from
//! the identity configuration are routing times.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::{PebbleConfig, Permutation};
use crate::schedule::{MatchingStep, Schedule};

pub const MAX_ORACLE_VERTICES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_states: usize,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_depth: 64, max_states: 10_000_000, time_limit: Duration::from_secs(60) }
    }
}

impl SearchBudget {
    pub fn with_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn with_time(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }
}

/// Which matchings the search may apply at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchingSet {
    /// Every nonempty matching.
    #[default]
    All,
    /// Only inclusion-maximal matchings.
    MaximalOnly,
}

/// All matchings of `g` (the empty one excluded), in a fixed order derived
/// from the sorted edge list.
pub fn all_matchings(g: &Graph) -> Vec<MatchingStep> {
    fn rec(edges: &[(Vertex, Vertex)], i: usize, used: &mut [bool], cur: &mut Vec<(Vertex, Vertex)>, out: &mut Vec<MatchingStep>) {
        if i == edges.len() {
            if !cur.is_empty() {
                out.push(MatchingStep::new(cur.iter().copied()));
            }
            return;
        }
        let (u, v) = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push((u, v));
            rec(edges, i + 1, used, cur, out);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
        rec(edges, i + 1, used, cur, out);
    }
    let mut out = Vec::new();
    rec(g.edges(), 0, &mut vec![false; g.n()], &mut Vec::new(), &mut out);
    out
}

pub fn maximal_matchings(g: &Graph) -> Vec<MatchingStep> {
    all_matchings(g)
        .into_iter()
        .filter(|m| {
            let mut used = vec![false; g.n()];
            for &(u, v) in m.pairs() {
                used[u] = true;
                used[v] = true;
            }
            g.edges().iter().all(|&(u, v)| used[u] || used[v])
        })
        .collect()
}

type Packed = u64;

fn pack(at: &[usize]) -> Packed {
    at.iter().enumerate().fold(0, |acc, (v, &p)| acc | (p as u64) << (4 * v))
}

fn unpack(c: Packed, n: usize) -> Vec<usize> {
    (0..n).map(|v| (c >> (4 * v) & 15) as usize).collect()
}

#[inline]
fn swap_packed(c: Packed, u: usize, v: usize) -> Packed {
    let (su, sv) = (4 * u, 4 * v);
    let x = ((c >> su) ^ (c >> sv)) & 15;
    c ^ (x << su) ^ (x << sv)
}

struct Moves {
    steps: Vec<MatchingStep>,
    pairs: Vec<Vec<(u8, u8)>>,
}

impl Moves {
    fn new(g: &Graph, set: MatchingSet) -> Self {
        let steps = match set {
            MatchingSet::All => all_matchings(g),
            MatchingSet::MaximalOnly => maximal_matchings(g),
        };
        let pairs = steps.iter().map(|s| s.pairs().iter().map(|&(u, v)| (u as u8, v as u8)).collect()).collect();
        Moves { steps, pairs }
    }

    #[inline]
    fn apply(&self, idx: usize, mut c: Packed) -> Packed {
        for &(u, v) in &self.pairs[idx] {
            c = swap_packed(c, u as usize, v as usize);
        }
        c
    }
}

fn check_size(g: &Graph) -> Result<()> {
    if g.n() > MAX_ORACLE_VERTICES {
        return Err(Error::input(format!("exact search supports at most {MAX_ORACLE_VERTICES} vertices, got {}", g.n())));
    }
    Ok(())
}

struct Clock {
    start: Instant,
    limit: Duration,
    ticks: u32,
}

impl Clock {
    fn new(limit: Duration) -> Self {
        Clock { start: Instant::now(), limit, ticks: 0 }
    }

    fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        self.ticks.is_multiple_of(1024) && self.start.elapsed() > self.limit
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoutingTime {
    pub value: usize,
    pub witness: Schedule,
    pub states_visited: usize,
    #[serde(serialize_with = "ser_secs")]
    pub elapsed: Duration,
}

fn ser_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Exact `rt(g, pi)` with a witness schedule, by bidirectional breadth-first
/// search between the identity and the target configuration.
pub fn routing_time_exact(g: &Graph, pi: &Permutation, budget: SearchBudget) -> Result<RoutingTime> {
    routing_time_with(g, pi, budget, MatchingSet::All)
}

pub fn routing_time_with(g: &Graph, pi: &Permutation, budget: SearchBudget, set: MatchingSet) -> Result<RoutingTime> {
    check_size(g)?;
    if pi.len() != g.n() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let started = Instant::now();
    let n = g.n();
    let start = pack(PebbleConfig::identity(n).at());
    let goal = pack(PebbleConfig::target_of(pi).at());
    if start == goal {
        return Ok(RoutingTime { value: 0, witness: Schedule::empty(), states_visited: 1, elapsed: started.elapsed() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let moves = Moves::new(g, set);
    let mut clock = Clock::new(budget.time_limit);
    // parent maps: state -> (previous state, matching index)
    let mut fwd: HashMap<Packed, (Packed, u32)> = HashMap::from([(start, (start, u32::MAX))]);
    let mut bwd: HashMap<Packed, (Packed, u32)> = HashMap::from([(goal, (goal, u32::MAX))]);
    let mut fwd_layer = vec![start];
    let mut bwd_layer = vec![goal];
    let (mut fwd_depth, mut bwd_depth) = (0usize, 0usize);
    loop {
        let explored = fwd_depth + bwd_depth;
        let states = fwd.len() + bwd.len();
        if explored >= budget.max_depth || states > budget.max_states || fwd_layer.is_empty() || bwd_layer.is_empty() {
            return Err(Error::BudgetExhausted { lower_bound: explored + 1, states });
        }
        let forward = fwd_layer.len() <= bwd_layer.len();
        let (layer, this, other) =
            if forward { (&mut fwd_layer, &mut fwd, &bwd) } else { (&mut bwd_layer, &mut bwd, &fwd) };
        let mut next = Vec::new();
        let mut meet = None;
        'outer: for &c in layer.iter() {
            if clock.expired() {
                return Err(Error::BudgetExhausted { lower_bound: explored + 1, states: this.len() + other.len() });
            }
            for idx in 0..moves.steps.len() {
                let d = moves.apply(idx, c);
                if this.contains_key(&d) {
                    continue;
                }
                this.insert(d, (c, idx as u32));
                if other.contains_key(&d) {
                    meet = Some(d);
                    break 'outer;
                }
                next.push(d);
            }
        }
        if forward {
            fwd_depth += 1;
        } else {
            bwd_depth += 1;
        }
        *layer = next;
        if let Some(m) = meet {
            let mut steps = Vec::new();
            let mut c = m;
            while c != start {
                let (p, idx) = fwd[&c];
                steps.push(moves.steps[idx as usize].clone());
                c = p;
            }
            steps.reverse();
            let mut c = m;
            while c != goal {
                let (p, idx) = bwd[&c];
                steps.push(moves.steps[idx as usize].clone());
                c = p;
            }
            return Ok(RoutingTime {
                value: steps.len(),
                witness: Schedule::new(steps),
                states_visited: fwd.len() + bwd.len(),
                elapsed: started.elapsed(),
            });
        }
    }
}

/// Distances from the identity configuration to every reachable configuration.
#[derive(Debug, Clone)]
pub struct RoutingTable {
    n: usize,
    dist: HashMap<Packed, u8>,
    layers: Vec<usize>,
}

impl RoutingTable {
    /// Routing time of `pi`, or `None` if its target was not reached.
    pub fn routing_time(&self, pi: &Permutation) -> Option<usize> {
        self.dist.get(&pack(PebbleConfig::target_of(pi).at())).map(|&d| d as usize)
    }

    /// Depth of the exploration (the routing number when complete).
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn states(&self) -> usize {
        self.dist.len()
    }

    /// Number of configurations first reached at each depth.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.layers
    }

    /// Every reached configuration with its distance.
    pub fn configs(&self) -> impl Iterator<Item = (PebbleConfig, usize)> + '_ {
        self.dist
            .iter()
            .map(|(&c, &d)| (PebbleConfig::from_vec(unpack(c, self.n)).expect("stored configs are bijections"), d as usize))
    }

    /// Largest number of pebbles placed on their `pi`-destination by any
    /// reached configuration at distance at most `k`.
    pub fn max_agreements(&self, pi: &Permutation, k: usize) -> usize {
        let want: Vec<u64> = (0..self.n).map(|v| pi.inverse().apply(v) as u64).collect();
        self.dist
            .iter()
            .filter(|&(_, &d)| d as usize <= k)
            .map(|(&c, _)| (0..self.n).filter(|&v| (c >> (4 * v) & 15) == want[v]).count())
            .max()
            .unwrap_or(0)
    }
}

/// Breadth-first exploration from the identity up to `budget.max_depth`.
pub fn explore(g: &Graph, budget: SearchBudget, set: MatchingSet) -> Result<RoutingTable> {
    check_size(g)?;
    let n = g.n();
    let moves = Moves::new(g, set);
    let mut clock = Clock::new(budget.time_limit);
    let start = pack(PebbleConfig::identity(n).at());
    let mut dist: HashMap<Packed, u8> = HashMap::from([(start, 0)]);
    let mut layer = vec![start];
    let mut layers = vec![1];
    while !layer.is_empty() && layers.len() <= budget.max_depth {
        let depth = layers.len() as u8;
        let mut next = Vec::new();
        for &c in &layer {
            if clock.expired() || dist.len() > budget.max_states {
                return Err(Error::BudgetExhausted { lower_bound: layers.len() - 1, states: dist.len() });
            }
            for idx in 0..moves.steps.len() {
                let d = moves.apply(idx, c);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(d) {
                    e.insert(depth);
                    next.push(d);
                }
            }
        }
        if !next.is_empty() {
            layers.push(next.len());
        }
        layer = next;
    }
    Ok(RoutingTable { n, dist, layers })
}

/// `rt(g)`: the maximum routing time over all permutations.
pub fn routing_number_exact(g: &Graph, budget: SearchBudget) -> Result<usize> {
    check_size(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let table = explore(g, budget.with_depth(usize::MAX), MatchingSet::All)?;
    let total: usize = (1..=g.n()).product();
    if table.states() != total {
        return Err(Error::BudgetExhausted { lower_bound: table.depth(), states: table.states() });
    }
    Ok(table.depth())
}

/// Maximum number of pebbles that some schedule of at most `k` steps places
/// on their destinations.
pub fn max_agreements_exact(g: &Graph, pi: &Permutation, k: usize, budget: SearchBudget) -> Result<usize> {
    if pi.len() != g.n() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let table = explore(g, budget.with_depth(k), MatchingSet::All)?;
    Ok(table.max_agreements(pi, k))
}

/// Every sequence of exactly `k` matchings (empty matchings allowed) that
/// routes `pi`. Intended for small gadgets; `budget.max_states` caps the
/// number of search nodes.
pub fn enumerate_routings(g: &Graph, pi: &Permutation, k: usize, budget: SearchBudget) -> Result<Vec<Vec<MatchingStep>>> {
    if pi.len() != g.n() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let dist = g.all_distances();
    let mut moves = all_matchings(g);
    moves.insert(0, MatchingStep::default());
    let mut search = Enumerator { g, pi, dist: &dist, moves: &moves, budget, nodes: 0, clock: Clock::new(budget.time_limit), out: Vec::new() };
    let mut config = PebbleConfig::identity(g.n());
    let mut prefix = Vec::new();
    search.rec(&mut config, &mut prefix, k)?;
    Ok(search.out)
}

struct Enumerator<'a> {
    g: &'a Graph,
    pi: &'a Permutation,
    dist: &'a [Vec<usize>],
    moves: &'a [MatchingStep],
    budget: SearchBudget,
    nodes: usize,
    clock: Clock,
    out: Vec<Vec<MatchingStep>>,
}

impl Enumerator<'_> {
    fn feasible(&self, config: &PebbleConfig, remaining: usize) -> bool {
        (0..self.g.n()).all(|v| self.dist[v][self.pi.apply(config.pebble_at(v))] <= remaining)
    }

    fn rec(&mut self, config: &mut PebbleConfig, prefix: &mut Vec<MatchingStep>, remaining: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_states || self.clock.expired() {
            return Err(Error::BudgetExhausted { lower_bound: 0, states: self.nodes });
        }
        if remaining == 0 {
            if config.realizes(self.pi) {
                self.out.push(prefix.clone());
            }
            return Ok(());
        }
        if remaining == 1 {
            // The last matching is forced: every misplaced pebble swaps with
            // the pebble sitting on its destination.
            let mut pairs = Vec::new();
            for v in 0..self.g.n() {
                let t = self.pi.apply(config.pebble_at(v));
                if t != v {
                    if !self.g.has_edge(v, t) || self.pi.apply(config.pebble_at(t)) != v {
                        return Ok(());
                    }
                    if v < t {
                        pairs.push((v, t));
                    }
                }
            }
            prefix.push(MatchingStep::new(pairs));
            self.out.push(prefix.clone());
            prefix.pop();
            return Ok(());
        }
        for m in self.moves {
            crate::schedule::apply_unchecked(config, m);
            if self.feasible(config, remaining - 1) {
                prefix.push(m.clone());
                let r = self.rec(config, prefix, remaining - 1);
                prefix.pop();
                if r.is_err() {
                    crate::schedule::apply_unchecked(config, m);
                    return r;
                }
            }
            crate::schedule::apply_unchecked(config, m);
        }
        Ok(())
    }
}
