//! Deciding whether a permutation can be routed in at most two steps.
//!
//! A cycle `(c_0, …, c_{a-1})` (pebble at `c_j` bound for `c_{j+1}`) routed
//! inside its own vertex set in two steps must use a pair of reflections:
//! step one pairs `c_j` with `c_{s-j}` and step two pairs `c_j` with
//! `c_{s+1-j}` for some offset `s`. Two cycles of equal length routed across
//! each other use step one `{c_j, d_{t-j}}` and step two `{c_j, d_{t+1-j}}`.
//! Each available edge votes for the offsets whose pattern contains it, so
//! every offset is checked in time linear in the number of edges involved.

use serde::Serialize;

use crate::graph::{Graph, Vertex};
use crate::matching::general_matching;
use crate::perm::{cycle_decompose, Permutation};
use crate::schedule::{MatchingStep, Schedule};

fn residue(x: isize, a: usize) -> usize {
    x.rem_euclid(a as isize) as usize
}

fn two_steps(first: Vec<(Vertex, Vertex)>, second: Vec<(Vertex, Vertex)>) -> Schedule {
    Schedule::new(vec![MatchingStep::new(first), MatchingStep::new(second)]).without_empty_steps()
}

/// A schedule of at most two steps that rotates `cycle` one position using
/// only edges inside its vertex set, or `None` if no such schedule exists.
pub fn self_routable(g: &Graph, cycle: &[Vertex]) -> Option<Schedule> {
    let a = cycle.len();
    if a <= 1 {
        return Some(Schedule::empty());
    }
    let mut index = std::collections::HashMap::with_capacity(a);
    for (j, &v) in cycle.iter().enumerate() {
        index.insert(v, j);
    }
    let mut votes_first = vec![0usize; a];
    let mut votes_second = vec![0usize; a];
    for (j, &v) in cycle.iter().enumerate() {
        for w in g.neighbors(v) {
            if let Some(&l) = index.get(w) {
                if j < l {
                    votes_first[(j + l) % a] += 1;
                    votes_second[(j + l + a - 1) % a] += 1;
                }
            }
        }
    }
    // Pairs in the reflection x -> s - x.
    let pairs_needed = |s: usize| (a - (0..a).filter(|&j| (2 * j) % a == s).count()) / 2;
    let s = (0..a).find(|&s| votes_first[s] == pairs_needed(s) && votes_second[s] == pairs_needed((s + 1) % a))?;
    let reflect = |s: usize| -> Vec<(Vertex, Vertex)> {
        (0..a)
            .filter_map(|j| {
                let l = residue(s as isize - j as isize, a);
                (j < l).then(|| (cycle[j], cycle[l]))
            })
            .collect()
    };
    Some(two_steps(reflect(s), reflect((s + 1) % a)))
}

/// A two-step schedule rotating both cycles using only edges between them,
/// or `None`. Cycles of different lengths are never mutually routable.
pub fn mutually_routable(g: &Graph, first: &[Vertex], second: &[Vertex]) -> Option<Schedule> {
    let a = first.len();
    if a != second.len() || a == 0 {
        return None;
    }
    let index: std::collections::HashMap<Vertex, usize> = second.iter().enumerate().map(|(l, &v)| (v, l)).collect();
    let mut votes_first = vec![0usize; a];
    let mut votes_second = vec![0usize; a];
    for (j, &v) in first.iter().enumerate() {
        for w in g.neighbors(v) {
            if let Some(&l) = index.get(w) {
                votes_first[(j + l) % a] += 1;
                votes_second[(j + l + a - 1) % a] += 1;
            }
        }
    }
    let t = (0..a).find(|&t| votes_first[t] == a && votes_second[t] == a)?;
    let cross = |t: usize| -> Vec<(Vertex, Vertex)> {
        (0..a).map(|j| (first[j], second[residue(t as isize - j as isize, a)])).collect()
    };
    Some(two_steps(cross(t), cross((t + 1) % a)))
}

/// Cycles of a permutation with their two-step routing options.
#[derive(Debug, Clone, Serialize)]
pub struct CycleGraph {
    pub cycles: Vec<Vec<Vertex>>,
    /// Schedule for each cycle routable on its own (fixed points included).
    pub loops: Vec<Option<Schedule>>,
    /// Mutually routable pairs `(i, j)`, `i < j`, with their schedules.
    pub edges: Vec<(usize, usize, Schedule)>,
}

impl CycleGraph {
    pub fn has_loop(&self, i: usize) -> bool {
        self.loops[i].is_some()
    }

    /// A choice of loop or partner for every cycle, if one exists. Each
    /// entry is `None` for a loop or `Some(j)` for the partner cycle.
    pub fn perfect_matching(&self) -> Option<Vec<Option<usize>>> {
        let k = self.cycles.len();
        // Each looped cycle gets a pendant partner; pendants form a clique so
        // unused ones can pair up, plus one spare node to fix the parity.
        let looped: Vec<usize> = (0..k).filter(|&i| self.has_loop(i)).collect();
        let pendant = |p: usize| k + p;
        let mut total = k + looped.len();
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(i, j, _)| (i, j)).collect();
        for (p, &i) in looped.iter().enumerate() {
            edges.push((i, pendant(p)));
            for q in p + 1..looped.len() {
                edges.push((pendant(p), pendant(q)));
            }
        }
        if total % 2 == 1 {
            for p in 0..looped.len() {
                edges.push((pendant(p), total));
            }
            total += 1;
        }
        let mate = general_matching(total, &edges);
        if mate.iter().any(Option::is_none) {
            return None;
        }
        Some((0..k).map(|i| mate[i].filter(|&j| j < k)).collect())
    }
}

pub fn build_cycle_graph(g: &Graph, pi: &Permutation) -> CycleGraph {
    let cycles = cycle_decompose(pi).cycles;
    let loops = cycles.iter().map(|c| self_routable(g, c)).collect();
    let mut edges = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if cycles[i].len() > 1 && cycles[i].len() == cycles[j].len() {
                if let Some(s) = mutually_routable(g, &cycles[i], &cycles[j]) {
                    edges.push((i, j, s));
                }
            }
        }
    }
    CycleGraph { cycles, loops, edges }
}

fn one_step(g: &Graph, pi: &Permutation) -> Option<MatchingStep> {
    let n = pi.len();
    let mut pairs = Vec::new();
    for v in 0..n {
        let w = pi.apply(v);
        if w != v {
            if pi.apply(w) != v || !g.has_edge(v, w) {
                return None;
            }
            if v < w {
                pairs.push((v, w));
            }
        }
    }
    Some(MatchingStep::new(pairs))
}

/// A schedule of length at most two routing `pi`, or `None` if `rt(g, pi) > 2`.
pub fn route_in_two(g: &Graph, pi: &Permutation) -> Option<Schedule> {
    if pi.is_identity() {
        return Some(Schedule::empty());
    }
    if let Some(step) = one_step(g, pi) {
        return Some(Schedule::new(vec![step]));
    }
    let cg = build_cycle_graph(g, pi);
    let choice = cg.perfect_matching()?;
    let mut parts = Vec::new();
    for (i, c) in choice.iter().enumerate() {
        match *c {
            None => parts.push(cg.loops[i].clone().expect("unmatched cycles carry loops")),
            Some(j) if i < j => {
                let (_, _, s) = cg.edges.iter().find(|e| (e.0, e.1) == (i, j)).expect("matched pair is an edge");
                parts.push(s.clone());
            }
            Some(_) => {}
        }
    }
    Some(Schedule::parallel(parts).without_empty_steps())
}

/// `Some(k)` with `k = rt(g, pi) <= 2`, or `None` when more steps are needed.
pub fn routable_in(g: &Graph, pi: &Permutation) -> Option<(usize, Schedule)> {
    route_in_two(g, pi).map(|s| (s.len(), s))
}
