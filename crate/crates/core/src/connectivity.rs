//! Vertex connectivity and enumeration of connected vertex subsets.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

/// Minimum number of vertices whose removal disconnects `g`; `n - 1` for
/// complete graphs and 0 for disconnected ones.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n <= 1 {
        return 0;
    }
    if !g.is_connected() {
        return 0;
    }
    if g.is_complete() {
        return n - 1;
    }
    // Some vertex among the first kappa+1 lies outside a minimum cut, so it
    // suffices to take sources from a growing prefix.
    let mut best = n - 1;
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                best = best.min(local_vertex_connectivity(g, i, j, best));
            }
        }
        i += 1;
    }
    best
}

/// Maximum number of internally vertex-disjoint `s`-`t` paths, capped at `cap`.
/// `s` and `t` must be non-adjacent.
pub fn local_vertex_connectivity(g: &Graph, s: Vertex, t: Vertex, cap: usize) -> usize {
    // Split every vertex v into v_in = 2v and v_out = 2v + 1 joined by a unit arc.
    let n = g.n();
    let nodes = 2 * n;
    let mut head = vec![usize::MAX; nodes];
    let mut to = Vec::new();
    let mut cap_arc = Vec::new();
    let mut next = Vec::new();
    let mut add = |u: usize, v: usize, c: usize, head: &mut Vec<usize>| {
        to.push(v);
        cap_arc.push(c);
        next.push(head[u]);
        head[u] = to.len() - 1;
        to.push(u);
        cap_arc.push(0);
        next.push(head[v]);
        head[v] = to.len() - 1;
    };
    let big = n + 1;
    for v in 0..n {
        let c = if v == s || v == t { big } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut head);
    }
    for &(u, v) in g.edges() {
        add(2 * u + 1, 2 * v, big, &mut head);
        add(2 * v + 1, 2 * u, big, &mut head);
    }
    let (src, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < cap {
        let mut prev_arc = vec![usize::MAX; nodes];
        let mut seen = vec![false; nodes];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            let mut a = head[u];
            while a != usize::MAX {
                let w = to[a];
                if cap_arc[a] > 0 && !seen[w] {
                    seen[w] = true;
                    prev_arc[w] = a;
                    queue.push_back(w);
                }
                a = next[a];
            }
        }
        if !seen[sink] {
            break;
        }
        let mut v = sink;
        while v != src {
            let a = prev_arc[v];
            cap_arc[a] -= 1;
            cap_arc[a ^ 1] += 1;
            v = to[a ^ 1];
        }
        flow += 1;
    }
    flow
}

/// Calls `visit` once for every connected vertex set `S` with `seed ∈ S`,
/// `|S| <= max_size`, avoiding vertices for which `banned` is true. Sets are
/// passed unsorted. Returning `false` from `visit` stops the enumeration.
pub fn for_each_connected_set(
    g: &Graph,
    seed: Vertex,
    max_size: usize,
    banned: &[bool],
    visit: &mut dyn FnMut(&[Vertex]) -> bool,
) -> bool {
    if banned[seed] || max_size == 0 {
        return true;
    }
    let mut state = vec![0u8; g.n()]; // 0 free, 1 in set, 2 in frontier, 3 excluded
    for (v, &b) in banned.iter().enumerate() {
        if b {
            state[v] = 3;
        }
    }
    state[seed] = 1;
    let mut set = vec![seed];
    let mut frontier: Vec<Vertex> = Vec::new();
    for &w in g.neighbors(seed) {
        if state[w] == 0 {
            state[w] = 2;
            frontier.push(w);
        }
    }
    extend(g, max_size, &mut set, &mut frontier, &mut state, visit)
}

fn extend(
    g: &Graph,
    max_size: usize,
    set: &mut Vec<Vertex>,
    frontier: &mut Vec<Vertex>,
    state: &mut [u8],
    visit: &mut dyn FnMut(&[Vertex]) -> bool,
) -> bool {
    if frontier.is_empty() || set.len() == max_size {
        return visit(set);
    }
    let w = frontier.pop().expect("nonempty frontier");
    // Include w.
    state[w] = 1;
    set.push(w);
    let mark = frontier.len();
    for &x in g.neighbors(w) {
        if state[x] == 0 {
            state[x] = 2;
            frontier.push(x);
        }
    }
    let go_on = extend(g, max_size, set, frontier, state, visit);
    for &x in &frontier[mark..] {
        state[x] = 0;
    }
    frontier.truncate(mark);
    set.pop();
    if !go_on {
        state[w] = 2;
        frontier.push(w);
        return false;
    }
    // Exclude w.
    state[w] = 3;
    let go_on = extend(g, max_size, set, frontier, state, visit);
    state[w] = 2;
    frontier.push(w);
    go_on
}

/// Every connected vertex set of size `1..=max_size`, each exactly once, sorted.
pub fn connected_sets(g: &Graph, max_size: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut banned = vec![false; g.n()];
    for v in 0..g.n() {
        for_each_connected_set(g, v, max_size, &banned, &mut |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            out.push(s);
            true
        });
        banned[v] = true;
    }
    out
}
