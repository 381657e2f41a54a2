//! Routing on graphs split into connected blocks joined by a small port
//! subgraph.
//!
//! Every block owns one port vertex. Pebbles leave their block one at a time
//! through its port; each round routes one pebble per port to the port of its
//! destination block and then lets the blocks pull the next outgoing pebble
//! up to the port with two matchings. The order in which a block emits its
//! pebbles is a row of a [`PortArray`], whose columns are permutations of the
//! ports and so can be routed on the port subgraph.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::connectivity::{for_each_connected_set, vertex_connectivity};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::matching::bipartite_matching;
use crate::oracle::{routing_number_exact, routing_time_exact, SearchBudget};
use crate::perm::Permutation;
use crate::schedule::{MatchingStep, Schedule};
use crate::treeroute::{pipeline_fill, route_tree, FillEvent, RootedTree};

/// Port subgraphs up to this order are routed with the exact oracle.
pub const EXACT_PORT_ROUTING: usize = 6;

/// Vertex blocks, each inducing a connected subgraph and holding one port.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectedPartition {
    ports: Vec<Vertex>,
    blocks: Vec<Vec<Vertex>>,
}

impl ConnectedPartition {
    /// Checks the blocks against `g`. Each block is reordered so that its
    /// port comes first.
    pub fn new(g: &Graph, ports: Vec<Vertex>, blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        if ports.len() != blocks.len() || ports.is_empty() {
            return Err(Error::input("need one port per block"));
        }
        let mut owner = vec![usize::MAX; g.n()];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                if v >= g.n() {
                    return Err(Error::input(format!("vertex {v} out of range")));
                }
                if owner[v] != usize::MAX {
                    return Err(Error::input(format!("vertex {v} in two blocks")));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::input(format!("vertex {v} in no block")));
        }
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, (&p, b)) in ports.iter().zip(blocks).enumerate() {
            if p >= g.n() || owner[p] != i {
                return Err(Error::input(format!("port {p} is not in block {i}")));
            }
            if !g.is_connected_subset(&b) {
                return Err(Error::input(format!("block {i} is not connected")));
            }
            let mut b: Vec<Vertex> = b.into_iter().filter(|&v| v != p).collect();
            b.sort_unstable();
            b.insert(0, p);
            sorted.push(b);
        }
        Ok(ConnectedPartition { ports, blocks: sorted })
    }

    /// Reads blocks written as "port v1 v2 ..." lines.
    pub fn from_lines(g: &Graph, lines: Vec<Vec<Vertex>>) -> Result<Self> {
        let ports = lines.iter().map(|l| l.first().copied().ok_or_else(|| Error::input("empty block line"))).collect::<Result<_>>()?;
        Self::new(g, ports, lines)
    }

    pub fn h(&self) -> usize {
        self.ports.len()
    }

    pub fn ports(&self) -> &[Vertex] {
        &self.ports
    }

    /// Block `i`, port first.
    pub fn block(&self, i: usize) -> &[Vertex] {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Block index of every vertex.
    pub fn owners(&self) -> Vec<usize> {
        let n = self.blocks.iter().map(Vec::len).sum();
        let mut owner = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                owner[v] = i;
            }
        }
        owner
    }
}

/// Block sizes differing by at most one, larger blocks first.
pub fn balanced_sizes(n: usize, h: usize) -> Vec<usize> {
    (0..h).map(|i| n / h + usize::from(i < n % h)).collect()
}

/// Searches for blocks of the given sizes around the given terminals.
/// Requires `g` to be `h`-connected, which guarantees existence.
pub fn find_partition(g: &Graph, sizes: &[usize], terminals: &[Vertex], budget: SearchBudget) -> Result<ConnectedPartition> {
    let h = sizes.len();
    if h == 0 || terminals.len() != h {
        return Err(Error::input("need one size per terminal"));
    }
    if sizes.iter().sum::<usize>() != g.n() || sizes.contains(&0) {
        return Err(Error::input("sizes must be positive and sum to n"));
    }
    let mut seen = vec![false; g.n()];
    for &t in terminals {
        if t >= g.n() || std::mem::replace(&mut seen[t], true) {
            return Err(Error::input(format!("terminal {t} repeated or out of range")));
        }
    }
    let kappa = vertex_connectivity(g);
    if kappa < h {
        return Err(Error::InvalidGraph(format!("connectivity {kappa} is below {h}")));
    }
    let mut search = PartitionSearch {
        g,
        sizes,
        terminals,
        used: vec![false; g.n()],
        chosen: Vec::with_capacity(h),
        visited: 0,
        budget,
        started: Instant::now(),
        out_of_budget: false,
    };
    if search.place(0) {
        let blocks = std::mem::take(&mut search.chosen);
        return ConnectedPartition::new(g, terminals.to_vec(), blocks);
    }
    if search.out_of_budget {
        return Err(Error::BudgetExhausted { lower_bound: 0, states: search.visited });
    }
    unreachable!("an h-connected graph always has the requested partition")
}

struct PartitionSearch<'a> {
    g: &'a Graph,
    sizes: &'a [usize],
    terminals: &'a [Vertex],
    used: Vec<bool>,
    chosen: Vec<Vec<Vertex>>,
    visited: usize,
    budget: SearchBudget,
    started: Instant,
    out_of_budget: bool,
}

impl PartitionSearch<'_> {
    fn place(&mut self, i: usize) -> bool {
        if i == self.sizes.len() {
            return true;
        }
        let mut banned = self.used.clone();
        for &t in &self.terminals[i + 1..] {
            banned[t] = true;
        }
        let (size, seed) = (self.sizes[i], self.terminals[i]);
        let mut found = false;
        let g = self.g;
        for_each_connected_set(g, seed, size, &banned, &mut |set| {
            if set.len() != size {
                return true;
            }
            self.visited += 1;
            if self.visited > self.budget.max_states
                || (self.visited.is_multiple_of(256) && self.started.elapsed() > self.budget.time_limit)
            {
                self.out_of_budget = true;
                return false;
            }
            for &v in set {
                self.used[v] = true;
            }
            if self.rest_is_feasible(i + 1) {
                self.chosen.push(set.to_vec());
                if self.place(i + 1) {
                    found = true;
                    return false;
                }
                self.chosen.pop();
            }
            for &v in set {
                self.used[v] = false;
            }
            !self.out_of_budget
        });
        found
    }

    /// Every component of the unused vertices must hold terminals whose sizes
    /// add up to the component size.
    fn rest_is_feasible(&self, from: usize) -> bool {
        let n = self.g.n();
        let mut comp = vec![usize::MAX; n];
        let mut comp_size = Vec::new();
        for s in 0..n {
            if self.used[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = comp_size.len();
            comp[s] = id;
            let mut stack = vec![s];
            let mut count = 0;
            while let Some(u) = stack.pop() {
                count += 1;
                for &w in self.g.neighbors(u) {
                    if !self.used[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            comp_size.push(count);
        }
        let mut demand = vec![0; comp_size.len()];
        for j in from..self.sizes.len() {
            demand[comp[self.terminals[j]]] += self.sizes[j];
        }
        demand == comp_size
    }
}

/// Lists of port indices in `0..a`, each of length `b`, in which every
/// index occurs exactly `b` times overall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PortLists {
    lists: Vec<Vec<usize>>,
}

impl PortLists {
    pub fn new(lists: Vec<Vec<usize>>) -> Result<Self> {
        let a = lists.len();
        if a == 0 {
            return Err(Error::input("no lists"));
        }
        let b = lists[0].len();
        let mut count = vec![0; a];
        for l in &lists {
            if l.len() != b {
                return Err(Error::input("lists differ in length"));
            }
            for &x in l {
                if x >= a {
                    return Err(Error::input(format!("entry {x} out of range for {a} lists")));
                }
                count[x] += 1;
            }
        }
        if let Some(x) = count.iter().position(|&c| c != b) {
            return Err(Error::input(format!("entry {x} occurs {} times, expected {b}", count[x])));
        }
        Ok(PortLists { lists })
    }

    pub fn a(&self) -> usize {
        self.lists.len()
    }

    pub fn b(&self) -> usize {
        self.lists[0].len()
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }
}

/// Rows are rearranged lists; every column is a permutation of `0..a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PortArray {
    rows: Vec<Vec<usize>>,
}

impl PortArray {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn a(&self) -> usize {
        self.rows.len()
    }

    pub fn b(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column(&self, t: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[t]).collect()
    }

    /// True if every row is a rearrangement of its list and every column a
    /// permutation.
    pub fn is_valid_for(&self, lists: &PortLists) -> bool {
        if self.rows.len() != lists.a() {
            return false;
        }
        let rows_ok = self.rows.iter().zip(lists.lists()).all(|(r, l)| {
            let (mut r, mut l) = (r.clone(), l.clone());
            r.sort_unstable();
            l.sort_unstable();
            r == l
        });
        rows_ok && (0..self.b()).all(|t| Permutation::new(self.column(t)).is_ok())
    }
}

/// Fills the array column by column, each column a system of distinct
/// representatives of the remaining lists found by bipartite matching.
pub fn build_port_array(lists: &PortLists) -> PortArray {
    let (a, b) = (lists.a(), lists.b());
    let mut remaining: Vec<Vec<usize>> = lists.lists().iter().map(|l| {
        let mut c = vec![0; a];
        for &x in l {
            c[x] += 1;
        }
        c
    }).collect();
    let mut rows = vec![Vec::with_capacity(b); a];
    for _ in 0..b {
        let adj: Vec<Vec<usize>> = remaining.iter().map(|c| (0..a).filter(|&x| c[x] > 0).collect()).collect();
        let mate = bipartite_matching(&adj, a);
        for (i, m) in mate.into_iter().enumerate() {
            let x = m.expect("regular lists always have a perfect representative system");
            remaining[i][x] -= 1;
            rows[i].push(x);
        }
    }
    PortArray { rows }
}

/// Destination-block lists for `pi`, each padded with the block's own index
/// up to the largest block size.
pub fn destination_lists(part: &ConnectedPartition, pi: &Permutation) -> Result<PortLists> {
    let owner = part.owners();
    if pi.len() != owner.len() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let b = part.sizes().into_iter().max().unwrap_or(0);
    let lists = part
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, blk)| {
            let mut l: Vec<usize> = blk.iter().map(|&v| owner[pi.apply(v)]).collect();
            l.resize(b, i);
            l
        })
        .collect();
    PortLists::new(lists)
}

/// A connected induced subgraph chosen as port set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortSubgraph {
    pub vertices: Vec<Vertex>,
    pub routing_number: usize,
    pub ratio: f64,
    /// False when some candidate was skipped for lack of budget.
    pub complete: bool,
}

/// Connected induced subgraph minimizing `rt / order` among orders `2..=h`
/// (exactly `h` when `exact_size`). Ties prefer larger sets, then the
/// lexicographically smallest vertex list.
pub fn best_port_subgraph(g: &Graph, h: usize, exact_size: bool, budget: SearchBudget) -> Result<PortSubgraph> {
    if h < 2 || h > g.n() {
        return Err(Error::input(format!("port count {h} must lie in 2..=n")));
    }
    let started = Instant::now();
    let mut best: Option<PortSubgraph> = None;
    let mut complete = true;
    let mut states = 0usize;
    let mut cache: HashMap<Vec<(Vertex, Vertex)>, Option<usize>> = HashMap::new();
    let mut banned = vec![false; g.n()];
    for v in 0..g.n() {
        for_each_connected_set(g, v, h, &banned, &mut |set| {
            if set.len() < 2 || (exact_size && set.len() != h) {
                return true;
            }
            if started.elapsed() > budget.time_limit {
                complete = false;
                return false;
            }
            let mut vs = set.to_vec();
            vs.sort_unstable();
            let sub = g.induced(&vs);
            let rt = *cache.entry(sub.edges().to_vec()).or_insert_with(|| {
                let left = budget.max_states.saturating_sub(states);
                match routing_number_exact(&sub, budget.with_states(left)) {
                    Ok(r) => Some(r),
                    Err(Error::BudgetExhausted { states: s, .. }) => {
                        states += s;
                        None
                    }
                    Err(_) => None,
                }
            });
            let Some(rt) = rt else {
                complete = false;
                return true;
            };
            states += (1..=vs.len()).product::<usize>();
            let ratio = rt as f64 / vs.len() as f64;
            let better = best.as_ref().is_none_or(|b| {
                (ratio, std::cmp::Reverse(vs.len()), &vs) < (b.ratio, std::cmp::Reverse(b.vertices.len()), &b.vertices)
            });
            if better {
                best = Some(PortSubgraph { vertices: vs, routing_number: rt, ratio, complete: true });
            }
            true
        });
        banned[v] = true;
    }
    match best {
        Some(mut b) => {
            b.complete = complete;
            Ok(b)
        }
        None => Err(Error::BudgetExhausted { lower_bound: 0, states }),
    }
}

/// A routed instance with its round structure.
#[derive(Debug, Clone, Serialize)]
pub struct HconnRouting {
    pub schedule: Schedule,
    pub array: PortArray,
    /// Steps spent on the port subgraph in each round.
    pub port_steps: Vec<usize>,
    /// Lengths of the arrangement, exchange and delivery phases.
    pub phase_lengths: [usize; 3],
}

impl HconnRouting {
    /// Longest routing used on the port subgraph.
    pub fn port_routing_used(&self) -> usize {
        self.port_steps.iter().copied().max().unwrap_or(0)
    }
}

struct Block {
    verts: Vec<Vertex>,
    tree: RootedTree,
    local: HashMap<Vertex, usize>,
}

impl Block {
    fn new(g: &Graph, verts: &[Vertex]) -> Result<Self> {
        let tree = RootedTree::spanning(&g.induced(verts), 0)?;
        let local = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ok(Block { verts: verts.to_vec(), tree, local })
    }

    fn lift(&self, s: &Schedule) -> Schedule {
        let steps = s.steps().iter().map(|m| MatchingStep::new(m.pairs().iter().map(|&(u, v)| (self.verts[u], self.verts[v]))));
        Schedule::new(steps.collect())
    }
}

fn port_router(gh: &Graph) -> Result<impl FnMut(&Permutation) -> Result<Schedule> + '_> {
    let tree = if gh.n() > EXACT_PORT_ROUTING { Some(RootedTree::spanning(gh, 0)?) } else { None };
    let mut memo: HashMap<Vec<usize>, Schedule> = HashMap::new();
    Ok(move |sigma: &Permutation| {
        if let Some(s) = memo.get(sigma.image()) {
            return Ok(s.clone());
        }
        let s = match &tree {
            Some(t) => route_tree(t, sigma),
            None => routing_time_exact(gh, sigma, SearchBudget::default())?.witness,
        };
        memo.insert(sigma.image().to_vec(), s.clone());
        Ok(s)
    })
}

/// Routes `pi` in three phases: arrange each block so its pebbles reach the
/// port in row order, run one port-subgraph routing per column with the
/// two-matching refill in between, then deliver inside each block. With
/// `pipelined`, swaps are moved to the earliest step their vertices allow.
pub fn route_hconnected(g: &Graph, pi: &Permutation, part: &ConnectedPartition, pipelined: bool) -> Result<HconnRouting> {
    if pi.len() != g.n() {
        return Err(Error::input("permutation size differs from graph size"));
    }
    let check = ConnectedPartition::new(g, part.ports().to_vec(), part.blocks().to_vec())?;
    let h = check.h();
    let gh = g.induced(check.ports());
    if !gh.is_connected() {
        return Err(Error::input("ports do not induce a connected subgraph"));
    }
    let lists = destination_lists(&check, pi)?;
    let array = build_port_array(&lists);
    debug_assert!(array.is_valid_for(&lists));
    let owner = check.owners();
    let blocks = check.blocks().iter().map(|b| Block::new(g, b)).collect::<Result<Vec<_>>>()?;
    let traces: Vec<_> = blocks.iter().map(|b| pipeline_fill(&b.tree, &vec![0; b.verts.len()])).collect();

    let real_slots: Vec<Vec<bool>> = (0..h).map(|i| real_slot_mask(&array.rows()[i], i, blocks[i].verts.len())).collect();

    // Phase 1: the pebble for the j-th real slot of row i goes where the
    // fill expects its j-th emitted pebble.
    let mut arrange = Vec::with_capacity(h);
    for (i, blk) in blocks.iter().enumerate() {
        let k = blk.verts.len();
        let mut free = vec![true; k];
        let mut image: Vec<usize> = (0..k).collect();
        let slots = array.rows()[i].iter().zip(&real_slots[i]).filter(|(_, &real)| real).map(|(&d, _)| d);
        for (j, dest) in slots.enumerate() {
            let target = traces[i].emitted[j];
            let pick = (0..k)
                .filter(|&s| free[s] && owner[pi.apply(blk.verts[s])] == dest)
                .min_by_key(|&s| (blk.tree.distance(s, target), s))
                .expect("row entries match the block's destinations");
            free[pick] = false;
            image[pick] = target;
        }
        let local_pi = Permutation::new(image)?;
        arrange.push(blk.lift(&route_tree(&blk.tree, &local_pi)));
    }
    let phase1 = Schedule::parallel(arrange).without_empty_steps();

    // Phase 2.
    let chunks: Vec<Vec<Vec<MatchingStep>>> = traces
        .iter()
        .map(|tr| {
            let mut out: Vec<Vec<MatchingStep>> = Vec::new();
            for e in &tr.events {
                match e {
                    FillEvent::Replace { .. } => out.push(Vec::new()),
                    FillEvent::Match(m) => out.last_mut().expect("fill starts with a replacement").push(m.clone()),
                }
            }
            out
        })
        .collect();
    let mut route_ports = port_router(&gh)?;
    let mut phase2 = Schedule::empty();
    let mut port_steps = Vec::with_capacity(array.b());
    let mut served = vec![0usize; h];
    for t in 0..array.b() {
        let sigma = Permutation::new(array.column(t))?;
        let local = route_ports(&sigma)?;
        port_steps.push(local.len());
        for m in local.steps() {
            phase2.push(MatchingStep::new(m.pairs().iter().map(|&(u, v)| (check.ports()[u], check.ports()[v]))));
        }
        let mut refill = Vec::new();
        for i in 0..h {
            if real_slots[i][t] {
                let steps = &chunks[i][served[i]];
                served[i] += 1;
                refill.push(blocks[i].lift(&Schedule::new(steps.clone())));
            }
        }
        phase2.extend(Schedule::parallel(refill));
    }
    let phase2 = phase2.without_empty_steps();

    // Phase 3: every pebble is now in its destination block.
    let mut sofar = phase1.clone();
    sofar.extend(phase2.clone());
    let config = sofar.final_config(g.n());
    let mut deliver = Vec::with_capacity(h);
    for (i, blk) in blocks.iter().enumerate() {
        let image = blk
            .verts
            .iter()
            .map(|&v| {
                let dest = pi.apply(config.pebble_at(v));
                blk.local.get(&dest).copied().ok_or_else(|| Error::input(format!("pebble left block {i} unrouted")))
            })
            .collect::<Result<Vec<_>>>()?;
        deliver.push(blk.lift(&route_tree(&blk.tree, &Permutation::new(image)?)));
    }
    let phase3 = Schedule::parallel(deliver).without_empty_steps();

    let phase_lengths = [phase1.len(), phase2.len(), phase3.len()];
    let mut schedule = phase1;
    schedule.extend(phase2);
    schedule.extend(phase3);
    if pipelined {
        schedule = schedule.compact();
    }
    Ok(HconnRouting { schedule, array, port_steps, phase_lengths })
}

/// Marks the slots of a row that carry real pebbles: every slot except the
/// surplus of the block's own index used as padding. A block that keeps all
/// its pebbles exchanges nothing and is handled by delivery alone.
fn real_slot_mask(row: &[usize], own: usize, size: usize) -> Vec<bool> {
    if row.iter().all(|&x| x == own) {
        return vec![false; row.len()];
    }
    let padding = row.len() - size;
    let own_total = row.iter().filter(|&&x| x == own).count();
    let mut own_real = own_total - padding;
    row.iter()
        .map(|&x| {
            if x != own {
                return true;
            }
            if own_real > 0 {
                own_real -= 1;
                true
            } else {
                false
            }
        })
        .collect()
}
