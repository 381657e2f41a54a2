//! Routing through a large clique.
//!
//! The clique is contracted to one tree node. Pebbles in the clique that must
//! leave sit on extra leaves hung off that node, so the planning problem is
//! an ordinary tree permutation on `n - kappa` plus a few vertices. A planned
//! swap between the contracted node and an outside vertex first moves the
//! active pebble to a clique vertex adjacent to it (one clique swap), then
//! crosses. Swaps between the contracted node and its leaves only relabel
//! clique vertices and cost nothing. A final two-step routing on the clique
//! sorts the pebbles that stayed inside.

use serde::Serialize;

use crate::clique::max_clique_exact;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::Permutation;
use crate::schedule::{MatchingStep, Schedule};
use crate::treeroute::{route_tree, RootedTree};
use crate::twostep::route_in_two;

const NONE: usize = usize::MAX;

/// The planning tree over the contracted graph.
#[derive(Debug, Clone, Serialize)]
pub struct ContractedInstance {
    pub clique: Vec<Vertex>,
    /// Real vertex of each planning node; node 0 is the contracted clique and
    /// maps to `NONE`, clique leaves map to their initial clique vertex.
    pub nodes: Vec<Vertex>,
    /// Number of planning nodes standing for outside vertices (nodes `1..=outside`).
    pub outside: usize,
    /// Clique vertex adjacent to each outside vertex, or `NONE`.
    #[serde(skip)]
    gate: Vec<Vertex>,
    #[serde(skip)]
    tree: RootedTree,
}

/// A routed instance with its planning statistics.
#[derive(Debug, Clone, Serialize)]
pub struct CliqueRouting {
    pub schedule: Schedule,
    pub clique: Vec<Vertex>,
    /// Pebbles that started in the clique with a destination outside it.
    pub evacuated: usize,
    /// Length of the tree plan.
    pub planned_steps: usize,
    /// Planned steps touching the contracted node.
    pub contracted_steps: usize,
}

impl ContractedInstance {
    pub fn new(g: &Graph, clique: &[Vertex], pi: &Permutation) -> Result<Self> {
        let n = g.n();
        let mut in_clique = vec![false; n];
        for &c in clique {
            if c >= n || std::mem::replace(&mut in_clique[c], true) {
                return Err(Error::input(format!("clique vertex {c} repeated or out of range")));
            }
        }
        if clique.is_empty() || !g.is_clique(clique) {
            return Err(Error::input("given vertices do not form a clique"));
        }
        let mut nodes = vec![NONE];
        let mut node_of = vec![NONE; n];
        for v in (0..n).filter(|&v| !in_clique[v]) {
            node_of[v] = nodes.len();
            nodes.push(v);
        }
        let outside = nodes.len() - 1;
        let mut gate = vec![NONE; nodes.len()];
        let mut edges = Vec::new();
        for &(u, w) in g.edges() {
            match (in_clique[u], in_clique[w]) {
                (false, false) => edges.push((node_of[u], node_of[w])),
                (true, false) | (false, true) => {
                    let (c, x) = if in_clique[u] { (u, w) } else { (w, u) };
                    let x = node_of[x];
                    if gate[x] == NONE {
                        gate[x] = c;
                        edges.push((0, x));
                    }
                }
                (true, true) => {}
            }
        }
        let contracted = Graph::new(nodes.len(), edges)?;
        let spanning = RootedTree::spanning(&contracted, 0).map_err(|_| Error::Disconnected)?;
        // Clique pebbles bound outside hang off the contracted node.
        let leaving: Vec<Vertex> = clique.iter().copied().filter(|&c| !in_clique[pi.apply(c)]).collect();
        let extra = if leaving.len() == clique.len() { leaving.len() - 1 } else { leaving.len() };
        let mut tree_edges: Vec<(usize, usize)> = spanning.graph().edges().to_vec();
        for j in 0..extra {
            tree_edges.push((0, nodes.len() + j));
        }
        let start = leaving.len() - extra;
        nodes.extend(&leaving[start..]);
        let tree = RootedTree::new(&Graph::new(nodes.len(), tree_edges)?, 0)?;
        Ok(ContractedInstance { clique: clique.to_vec(), nodes, outside, gate, tree })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }
}

/// Routes `pi` using the clique `clique` (a maximum clique when `None`).
pub fn route_via_clique_contraction(g: &Graph, pi: &Permutation, clique: Option<&[Vertex]>) -> Result<CliqueRouting> {
    let n = g.n();
    if pi.len() != n {
        return Err(Error::input("permutation size differs from graph size"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let clique: Vec<Vertex> = match clique {
        Some(c) => c.to_vec(),
        None => max_clique_exact(g),
    };
    let mut in_clique = vec![false; n];
    for &c in &clique {
        if c < n {
            in_clique[c] = true;
        }
    }
    if clique.len() == n && g.is_clique(&clique) {
        let schedule = route_in_two(g, pi).expect("complete graphs route everything in two steps");
        return Ok(CliqueRouting { schedule, clique, evacuated: 0, planned_steps: 0, contracted_steps: 0 });
    }
    let inst = ContractedInstance::new(g, &clique, pi)?;
    let evacuated = clique.iter().filter(|&&c| !in_clique[pi.apply(c)]).count();
    let k = inst.nodes.len();

    // Real clique vertex currently standing for each planning node, and back.
    let mut real = inst.nodes.clone();
    let mut node_at = vec![NONE; n];
    real[0] = if evacuated == clique.len() {
        *clique.iter().find(|&&c| !inst.nodes[inst.outside + 1..].contains(&c)).expect("one leaving pebble sits on the hub")
    } else {
        *clique.iter().find(|&&c| in_clique[pi.apply(c)]).expect("some pebble stays")
    };
    for (i, &v) in real.iter().enumerate() {
        if v != NONE {
            node_at[v] = i;
        }
    }

    // Planned destinations: outside pebbles go to their node; pebbles bound
    // for the clique fill the hub and leaf slots in any order.
    let mut slots: Vec<usize> = std::iter::once(0).chain(inst.outside + 1..k).collect();
    let mut want = vec![NONE; k];
    let mut clique_bound = Vec::new();
    for i in 0..k {
        let d = pi.apply(real[i]);
        if in_clique[d] {
            clique_bound.push(i);
        } else {
            want[i] = node_at[d];
        }
    }
    // Keep pebbles already on a slot where they are.
    for &i in &clique_bound {
        if let Some(pos) = slots.iter().position(|&s| s == i) {
            want[i] = slots.swap_remove(pos);
        }
    }
    for &i in &clique_bound {
        if want[i] == NONE {
            want[i] = slots.pop().expect("slot count equals clique-bound pebble count");
        }
    }
    let plan = route_tree(&inst.tree, &Permutation::new(want)?);

    let mut schedule = Schedule::empty();
    let mut contracted_steps = 0;
    for step in plan.steps() {
        let mut pre = Vec::new();
        let mut main = Vec::new();
        for &(a, b) in step.pairs() {
            let (hub, other) = match (a, b) {
                (0, o) | (o, 0) => (true, o),
                _ => (false, NONE),
            };
            if !hub {
                main.push((real[a], real[b]));
                continue;
            }
            contracted_steps += 1;
            if other > inst.outside {
                // Hub and leaf trade clique vertices instead of pebbles.
                real.swap(0, other);
                node_at[real[0]] = 0;
                node_at[real[other]] = other;
                continue;
            }
            let gate = inst.gate[other];
            let from = real[0];
            if from != gate {
                pre.push((from, gate));
                let displaced = node_at[gate];
                node_at[from] = displaced;
                if displaced != NONE {
                    real[displaced] = from;
                }
                real[0] = gate;
                node_at[gate] = 0;
            }
            main.push((gate, real[other]));
        }
        schedule.push(MatchingStep::new(pre));
        schedule.push(MatchingStep::new(main));
    }
    let mut schedule = schedule.without_empty_steps();

    let config = schedule.final_config(n);
    let local = g.induced(&clique);
    let mut index = vec![NONE; n];
    for (i, &c) in clique.iter().enumerate() {
        index[c] = i;
    }
    let image = clique
        .iter()
        .map(|&c| {
            let d = pi.apply(config.pebble_at(c));
            (index[d] != NONE).then_some(index[d]).ok_or_else(|| Error::input("pebble stranded in the clique"))
        })
        .collect::<Result<Vec<_>>>()?;
    let finish = route_in_two(&local, &Permutation::new(image)?).expect("cliques route everything in two steps");
    for m in finish.steps() {
        schedule.push(MatchingStep::new(m.pairs().iter().map(|&(u, v)| (clique[u], clique[v]))));
    }
    Ok(CliqueRouting { schedule: schedule.compact(), clique, evacuated, planned_steps: plan.len(), contracted_steps })
}
