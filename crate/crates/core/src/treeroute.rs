//! Routing on trees: full permutations by centroid recursion, subsets of
//! pebbles with a greedy parallel scheme, and the pipelined root-replacement
//! fill used by the h-connected router.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::Permutation;
use crate::schedule::{MatchingStep, Schedule};

const NONE: usize = usize::MAX;

/// A tree with a distinguished root, parent pointers and levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    tree: Graph,
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    level: Vec<usize>,
    children: Vec<Vec<Vertex>>,
}

impl RootedTree {
    /// Roots the tree `g` at `root`; fails unless `g` is a tree.
    pub fn new(g: &Graph, root: Vertex) -> Result<Self> {
        if g.n() == 0 || root >= g.n() {
            return Err(Error::input("root out of range"));
        }
        if g.m() + 1 != g.n() || !g.is_connected() {
            return Err(Error::InvalidGraph("not a tree".into()));
        }
        Ok(Self::from_tree(g.clone(), root))
    }

    /// Breadth-first spanning tree of a connected graph.
    pub fn spanning(g: &Graph, root: Vertex) -> Result<Self> {
        if root >= g.n() {
            return Err(Error::input("root out of range"));
        }
        let all: Vec<Vertex> = (0..g.n()).collect();
        let parents = g.bfs_parents(root, &all).ok_or(Error::Disconnected)?;
        let edges = parents.into_iter().filter(|&(c, p)| c != p);
        let tree = Graph::new(g.n(), edges)?;
        Ok(Self::from_tree(tree, root))
    }

    fn from_tree(tree: Graph, root: Vertex) -> Self {
        let n = tree.n();
        let mut parent = vec![None; n];
        let mut level = vec![0; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    level[w] = level[u] + 1;
                    children[u].push(w);
                    queue.push_back(w);
                }
            }
        }
        RootedTree { tree, root, parent, level, children }
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn graph(&self) -> &Graph {
        &self.tree
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn level(&self, v: Vertex) -> usize {
        self.level[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn height(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }

    /// Vertices from `root` down to `v`.
    pub fn path_from_root(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    /// Tree path from `u` to `v`, both included.
    pub fn path(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![];
        let mut right = vec![];
        while self.level[a] > self.level[b] {
            left.push(a);
            a = self.parent[a].expect("deeper vertex has a parent");
        }
        while self.level[b] > self.level[a] {
            right.push(b);
            b = self.parent[b].expect("deeper vertex has a parent");
        }
        while a != b {
            left.push(a);
            right.push(b);
            a = self.parent[a].expect("non-root");
            b = self.parent[b].expect("non-root");
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        left
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> usize {
        self.path(u, v).len() - 1
    }
}

/// Routes `pi` on the tree using only tree edges. The schedule has at most
/// about `2n` steps on typical inputs and stays below `3n`.
pub fn route_tree(t: &RootedTree, pi: &Permutation) -> Schedule {
    assert_eq!(pi.len(), t.n(), "permutation size differs from tree size");
    let adj: Vec<Vec<Vertex>> = (0..t.n()).map(|v| t.tree.neighbors(v).to_vec()).collect();
    let want: Vec<Vertex> = pi.image().to_vec();
    centroid_schedule(&adj, want, false).min_by_len(centroid_schedule(&adj, pi.image().to_vec(), true))
}

fn centroid_schedule(adj: &[Vec<Vertex>], want: Vec<usize>, busiest: bool) -> Schedule {
    centroid_with(adj, want, busiest, None)
}

fn centroid_with(adj: &[Vec<Vertex>], mut want: Vec<usize>, busiest: bool, seed: Option<u64>) -> Schedule {
    let n = adj.len();
    let mut scratch = Scratch::new(n);
    scratch.busiest = busiest;
    scratch.jitter = seed.map(|seed| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen()).collect()
    });
    let all: Vec<Vertex> = (0..n).collect();
    let steps = solve(adj, &all, &mut want, &mut scratch);
    Schedule::new(steps.into_iter().map(MatchingStep::new).collect()).compact()
}

trait Shorter {
    fn min_by_len(self, other: Self) -> Self;
}

impl Shorter for Schedule {
    fn min_by_len(self, other: Schedule) -> Schedule {
        if other.len() < self.len() {
            other
        } else {
            self
        }
    }
}

struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    comp: Vec<usize>,
    reg: Vec<usize>,
    par: Vec<usize>,
    size: Vec<usize>,
    busy: Vec<u32>,
    busy_epoch: u32,
    pending: Vec<usize>,
    /// Serve the subtree with the most pebbles still to export first.
    busiest: bool,
    /// Random tie-break ranks, when set.
    jitter: Option<Vec<usize>>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            stamp: vec![0; n],
            epoch: 0,
            comp: vec![NONE; n],
            reg: vec![NONE; n],
            par: vec![NONE; n],
            size: vec![0; n],
            busy: vec![0; n],
            busy_epoch: 0,
            pending: vec![0; n],
            busiest: false,
            jitter: None,
        }
    }
}

type Steps = Vec<Vec<(Vertex, Vertex)>>;

fn solve(adj: &[Vec<Vertex>], vs: &[Vertex], want: &mut [Vertex], s: &mut Scratch) -> Steps {
    if vs.len() <= 1 || vs.iter().all(|&v| want[v] == v || want[v] == NONE) {
        return Vec::new();
    }
    s.epoch += 1;
    let epoch = s.epoch;
    for &v in vs {
        s.stamp[v] = epoch;
    }
    let inside = |s: &Scratch, v: Vertex| s.stamp[v] == epoch;

    // Centroid: subtree sizes from a DFS rooted at vs[0].
    let mut order = Vec::with_capacity(vs.len());
    let mut stack = vec![vs[0]];
    s.par[vs[0]] = NONE;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in &adj[u] {
            if inside(s, w) && w != s.par[u] {
                s.par[w] = u;
                stack.push(w);
            }
        }
    }
    for &u in order.iter().rev() {
        s.size[u] = 1 + adj[u].iter().filter(|&&w| inside(s, w) && s.par[w] == u).map(|&w| s.size[w]).sum::<usize>();
    }
    let k = vs.len();
    let center = *order
        .iter()
        .find(|&&u| {
            let below = adj[u].iter().filter(|&&w| inside(s, w) && s.par[w] == u).map(|&w| s.size[w]).max().unwrap_or(0);
            below.max(k - s.size[u]) <= k / 2
        })
        .expect("every tree has a centroid");

    // Components hanging off the center, each in breadth-first order.
    let mut comps: Vec<Vec<Vertex>> = Vec::new();
    s.comp[center] = NONE;
    s.par[center] = NONE;
    for &r in &adj[center] {
        if !inside(s, r) {
            continue;
        }
        let id = comps.len();
        let mut list = vec![r];
        s.comp[r] = id;
        s.par[r] = center;
        let mut i = 0;
        while i < list.len() {
            let u = list[i];
            i += 1;
            for &w in &adj[u] {
                if inside(s, w) && w != s.par[u] && w != center {
                    s.par[w] = u;
                    s.comp[w] = id;
                    list.push(w);
                }
            }
        }
        comps.push(list);
    }

    // Target region of every pebble. Untasked pebbles (`NONE`) are spread so
    // that every region ends with exactly as many pebbles as vertices; the
    // surplus ones closest to the center are the ones sent away.
    let regions = comps.len() + 1;
    let region_of = |s: &Scratch, v: Vertex| if s.comp[v] == NONE { comps.len() } else { s.comp[v] };
    let mut spare = vec![0isize; regions];
    spare[comps.len()] = 1;
    for (i, c) in comps.iter().enumerate() {
        spare[i] = c.len() as isize;
    }
    for &v in vs {
        if want[v] != NONE {
            spare[region_of(s, want[v])] -= 1;
        }
    }
    let mut wild_in = vec![0isize; regions];
    for &v in vs {
        if want[v] == NONE {
            wild_in[region_of(s, v)] += 1;
        }
    }
    let mut deficits: Vec<usize> = Vec::new();
    for r in 0..regions {
        for _ in 0..(spare[r] - wild_in[r]).max(0) {
            deficits.push(r);
        }
    }
    let mut deficits = deficits.into_iter();
    let mut excess: Vec<isize> = (0..regions).map(|r| (wild_in[r] - spare[r]).max(0)).collect();
    let to_comp = |r: usize| if r == comps.len() { NONE } else { r };
    for &v in std::iter::once(&center).chain(comps.iter().flatten()) {
        s.reg[v] = if want[v] != NONE {
            s.comp[want[v]]
        } else {
            let r = region_of(s, v);
            if excess[r] > 0 {
                excess[r] -= 1;
                to_comp(deficits.next().expect("surplus matches deficit"))
            } else {
                s.comp[v]
            }
        };
    }

    let mut steps = Steps::new();
    let outbound = |s: &Scratch, v: Vertex| s.reg[v] != s.comp[v];
    loop {
        if !vs.iter().any(|&v| outbound(s, v)) {
            break;
        }
        // Untasked pebbles in a component are interchangeable: the ones to
        // be exported are always the shallowest.
        for (i, comp) in comps.iter().enumerate() {
            let wild: Vec<Vertex> = comp.iter().copied().filter(|&v| want[v] == NONE).collect();
            let mut labels: Vec<usize> = wild.iter().map(|&v| s.reg[v]).collect();
            labels.sort_by_key(|&r| r == i);
            for (&v, r) in wild.iter().zip(labels) {
                s.reg[v] = r;
            }
        }
        if s.busiest {
            for comp in &comps {
                for &v in comp.iter().rev() {
                    let below: usize =
                        adj[v].iter().filter(|&&u| inside(s, u) && s.par[u] == v).map(|&u| s.pending[u]).sum();
                    s.pending[v] = below + usize::from(outbound(s, v));
                }
            }
        }
        let weight = |s: &Scratch, v: Vertex| {
            let base = if s.busiest { s.pending[v] } else { 0 };
            (base, s.jitter.as_ref().map_or(0, |j| j[v]))
        };
        s.busy_epoch += 1;
        let be = s.busy_epoch;
        let mut pairs = Vec::new();
        let target = s.reg[center];
        let partner = if target == NONE {
            comps
                .iter()
                .map(|c| c[0])
                .filter(|&r| outbound(s, r))
                .min_by_key(|&r| std::cmp::Reverse(weight(s, r)))
        } else {
            Some(comps[target][0]).filter(|&r| outbound(s, r))
        };
        if let Some(r) = partner {
            pairs.push((center, r));
            s.busy[center] = be;
            s.busy[r] = be;
        }
        for comp in &comps {
            for &w in comp {
                if s.busy[w] == be || outbound(s, w) {
                    continue;
                }
                let child = adj[w]
                    .iter()
                    .copied()
                    .filter(|&u| inside(s, u) && s.par[u] == w && s.busy[u] != be && outbound(s, u))
                    .min_by_key(|&u| std::cmp::Reverse(weight(s, u)));
                if let Some(u) = child {
                    pairs.push((w, u));
                    s.busy[w] = be;
                    s.busy[u] = be;
                }
            }
        }
        assert!(!pairs.is_empty(), "tree routing made no progress");
        for &(u, w) in &pairs {
            want.swap(u, w);
            s.reg.swap(u, w);
        }
        steps.push(pairs);
    }

    let parts: Vec<Steps> = comps.iter().map(|c| solve(adj, c, want, s)).collect();
    let longest = parts.iter().map(Vec::len).max().unwrap_or(0);
    for i in 0..longest {
        steps.push(parts.iter().filter_map(|p| p.get(i)).flatten().copied().collect());
    }
    steps
}

/// Pebbles to move on a tree: `(source, destination)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetTask {
    pairs: Vec<(Vertex, Vertex)>,
}

impl SubsetTask {
    /// Fails on repeated sources or repeated destinations.
    pub fn new(pairs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut src = std::collections::HashSet::new();
        let mut dst = std::collections::HashSet::new();
        for &(s, d) in &pairs {
            if !src.insert(s) {
                return Err(Error::input(format!("source {s} used twice")));
            }
            if !dst.insert(d) {
                return Err(Error::input(format!("destination {d} used twice")));
            }
        }
        Ok(SubsetTask { pairs })
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    /// Number of pebbles that actually have to move.
    pub fn p(&self) -> usize {
        self.pairs.iter().filter(|(s, d)| s != d).count()
    }

    /// Longest tree distance between a source and its destination.
    pub fn l(&self, t: &RootedTree) -> usize {
        self.pairs.iter().map(|&(s, d)| t.distance(s, d)).max().unwrap_or(0)
    }

    /// True if running `s` from the identity puts every tasked pebble on its destination.
    pub fn satisfied_by(&self, s: &Schedule, n: usize) -> bool {
        let pos = s.final_config(n).positions();
        self.pairs.iter().all(|&(src, d)| pos[src] == d)
    }
}

/// Moves every tasked pebble to its destination; other pebbles may end
/// anywhere.
///
/// Candidates are the centroid recursion with untasked pebbles as free
/// fillers and a greedy scheme that advances pebbles along their paths, each
/// run on the task and on the reversed task (a reversed schedule for the
/// reversed task solves the task). Seeded restarts continue until a schedule
/// of at most `p + 2l` steps is found or the restarts run out; the shortest
/// candidate is returned.
pub fn route_subset_tree(t: &RootedTree, task: &SubsetTask) -> Result<Schedule> {
    let n = t.n();
    for &(s, d) in task.pairs() {
        if s >= n || d >= n {
            return Err(Error::input(format!("pair {s}->{d} out of range")));
        }
    }
    // A schedule for the reversed task, run backwards, also solves the task.
    let reversed = SubsetTask { pairs: task.pairs().iter().map(|&(s, d)| (d, s)).collect() };
    let bound = task.p() + 2 * task.l(t);
    let cap = 2 * bound + n;
    let mut best = route_wildcards(t, task);
    let back = route_wildcards(t, &reversed).reversed();
    if back.len() < best.len() {
        best = back;
    }
    let adj: Vec<Vec<Vertex>> = (0..n).map(|v| t.tree.neighbors(v).to_vec()).collect();
    let wild = |task: &SubsetTask| {
        let mut want = vec![NONE; n];
        for &(src, d) in task.pairs() {
            want[src] = d;
        }
        want
    };
    for seed in 0..SUBSET_RESTARTS {
        if best.len() <= bound {
            break;
        }
        let fwd = centroid_with(&adj, wild(task), seed % 2 == 1, Some(seed));
        let back = centroid_with(&adj, wild(&reversed), seed % 2 == 1, Some(seed)).reversed();
        best = best.min_by_len(fwd).min_by_len(back);
    }
    let fixed = [Priority::Farthest, Priority::Nearest, Priority::Index];
    for p in fixed.into_iter().chain((0..SUBSET_RESTARTS).map(Priority::Random)) {
        if best.len() <= bound {
            break;
        }
        for backwards in [false, true] {
            let found = if backwards {
                greedy_subset(t, &reversed, cap, p).map(|s| s.reversed())
            } else {
                greedy_subset(t, task, cap, p)
            };
            if let Some(s) = found.map(|s| s.compact()) {
                if s.len() < best.len() {
                    best = s;
                }
            }
        }
    }
    Ok(best)
}

/// Centroid recursion where untasked pebbles may end anywhere.
fn route_wildcards(t: &RootedTree, task: &SubsetTask) -> Schedule {
    let n = t.n();
    let adj: Vec<Vec<Vertex>> = (0..n).map(|v| t.tree.neighbors(v).to_vec()).collect();
    let mut want = vec![NONE; n];
    for &(src, d) in task.pairs() {
        want[src] = d;
    }
    centroid_schedule(&adj, want.clone(), false).min_by_len(centroid_schedule(&adj, want, true))
}

const SUBSET_RESTARTS: u64 = 32;

#[derive(Clone, Copy)]
enum Priority {
    Farthest,
    Nearest,
    Index,
    /// Farthest first with ties broken by a seeded random rank.
    Random(u64),
}

fn greedy_subset(t: &RootedTree, task: &SubsetTask, cap: usize, priority: Priority) -> Option<Schedule> {
    let n = t.n();
    let pairs = task.pairs();
    let mut pos: Vec<Vertex> = pairs.iter().map(|&(s, _)| s).collect();
    let mut occ = vec![NONE; n];
    for (i, &(s, _)) in pairs.iter().enumerate() {
        occ[s] = i;
    }
    let next_hop = |from: Vertex, to: Vertex| t.path(from, to)[1];
    let rank: Vec<u64> = match priority {
        Priority::Random(seed) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..pairs.len()).map(|_| rng.gen()).collect()
        }
        _ => (0..pairs.len() as u64).collect(),
    };
    let mut steps = Vec::new();
    while (0..pairs.len()).any(|i| pos[i] != pairs[i].1) {
        if steps.len() >= cap {
            return None;
        }
        let mut order: Vec<usize> = (0..pairs.len()).filter(|&i| pos[i] != pairs[i].1).collect();
        match priority {
            Priority::Farthest => order.sort_by_key(|&i| (std::cmp::Reverse(t.distance(pos[i], pairs[i].1)), i)),
            Priority::Nearest => order.sort_by_key(|&i| (t.distance(pos[i], pairs[i].1), i)),
            Priority::Index => {}
            Priority::Random(_) => order.sort_by_key(|&i| (std::cmp::Reverse(t.distance(pos[i], pairs[i].1)), rank[i])),
        }
        let mut busy = vec![false; n];
        let mut step = Vec::new();
        for i in order {
            let u = pos[i];
            let w = next_hop(u, pairs[i].1);
            if busy[u] || busy[w] {
                continue;
            }
            let j = occ[w];
            let ok = j == NONE || pos[j] == pairs[j].1 || next_hop(w, pairs[j].1) == u;
            if ok {
                busy[u] = true;
                busy[w] = true;
                step.push((u, w));
            }
        }
        if step.is_empty() {
            return None;
        }
        for &(u, w) in &step {
            occ.swap(u, w);
            for x in [u, w] {
                if occ[x] != NONE {
                    pos[occ[x]] = x;
                }
            }
        }
        steps.push(MatchingStep::new(step));
    }
    Some(Schedule::new(steps))
}

/// One event of the pipelined fill.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FillEvent {
    /// The pebble on `vertex` (the root) leaves and `pebble` takes its place.
    Replace { vertex: Vertex, pebble: usize },
    Match(MatchingStep),
}

/// Output of [`pipeline_fill`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillTrace {
    pub events: Vec<FillEvent>,
    /// Destination of the `j`-th incoming pebble.
    pub destinations: Vec<Vertex>,
    /// For the `j`-th replacement, the starting vertex of the pebble that left.
    pub emitted: Vec<Vertex>,
}

impl FillTrace {
    pub fn replace_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, FillEvent::Replace { .. })).count()
    }

    /// Matching steps only, in order.
    pub fn matchings(&self) -> impl Iterator<Item = &MatchingStep> {
        self.events.iter().filter_map(|e| match e {
            FillEvent::Match(m) => Some(m),
            FillEvent::Replace { .. } => None,
        })
    }

    /// One line per event: `R v:p` for replacements, `u-v` tokens for matchings.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.events.len());
        for e in &self.events {
            match e {
                FillEvent::Replace { vertex, pebble } => {
                    let _ = writeln!(out, "R {vertex}:{pebble}");
                }
                FillEvent::Match(m) => {
                    let toks: Vec<String> = m.pairs().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                    let _ = writeln!(out, "{}", toks.join(" "));
                }
            }
        }
        out
    }
}

/// Vertices ordered by decreasing level, ties by vertex id.
pub fn fill_destinations(t: &RootedTree) -> Vec<Vertex> {
    let mut vs: Vec<Vertex> = (0..t.n()).collect();
    vs.sort_by_key(|&v| (std::cmp::Reverse(t.level(v)), v));
    vs
}

/// Replaces every pebble of `t` by the `incoming` pebbles, inserted one at a
/// time at the root. The `j`-th incoming pebble is bound for the `j`-th vertex
/// of [`fill_destinations`]. Each replacement is followed by one matching
/// between even and odd levels and one between odd and even levels, which
/// move every pebble in transit two levels down its path; no matchings follow
/// the last replacement. The trace has `3k - 2` events for `k` pebbles.
pub fn pipeline_fill(t: &RootedTree, incoming: &[usize]) -> FillTrace {
    let k = t.n();
    assert_eq!(incoming.len(), k, "need exactly one incoming pebble per tree vertex");
    let dests = fill_destinations(t);
    let paths: Vec<Vec<Vertex>> = dests.iter().map(|&d| t.path_from_root(d)).collect();
    // Occupants: Ok(old pebble's start vertex) or Err(incoming index).
    let mut occ: Vec<std::result::Result<Vertex, usize>> = (0..k).map(Ok).collect();
    let mut depth = vec![0usize; k];
    let mut events = Vec::with_capacity(3 * k);
    let mut emitted = Vec::with_capacity(k);
    let root = t.root();
    for j in 0..k {
        let Ok(old) = occ[root] else { panic!("root holds an incoming pebble at replacement {j}") };
        emitted.push(old);
        occ[root] = Err(j);
        events.push(FillEvent::Replace { vertex: root, pebble: incoming[j] });
        if j + 1 == k {
            break;
        }
        for parity in [0, 1] {
            let mut pairs = Vec::new();
            for i in 0..=j {
                let d = depth[i];
                if d + 1 < paths[i].len() && d % 2 == parity {
                    let (u, w) = (paths[i][d], paths[i][d + 1]);
                    debug_assert!(occ[w].is_ok(), "incoming pebbles never block each other");
                    occ.swap(u, w);
                    depth[i] += 1;
                    pairs.push((u, w));
                }
            }
            events.push(FillEvent::Match(MatchingStep::new(pairs)));
        }
    }
    debug_assert!((0..k).all(|i| depth[i] + 1 == paths[i].len()));
    FillTrace { events, destinations: dests, emitted }
}
