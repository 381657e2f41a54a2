//! Maximum matchings: bipartite augmenting paths and a general-graph wrapper.

use petgraph::graph::{NodeIndex, UnGraph};

/// Maximum bipartite matching by augmenting paths. `adj[l]` lists the right
/// vertices allowed for left vertex `l`. Returns `mate[l]`.
pub fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if !seen[r] {
                seen[r] = true;
                if owner[r].is_none_or(|o| augment(o, adj, seen, owner)) {
                    owner[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(l, adj, &mut seen, &mut owner);
    }
    let mut mate = vec![None; adj.len()];
    for (r, o) in owner.into_iter().enumerate() {
        if let Some(l) = o {
            mate[l] = Some(r);
        }
    }
    mate
}

/// Maximum matching in a general graph on `n` nodes. Returns `mate[v]`.
pub fn general_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut g = UnGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for &(u, v) in edges {
        g.add_edge(nodes[u], nodes[v], ());
    }
    let m = petgraph::algo::maximum_matching(&g);
    (0..n).map(|v| m.mate(nodes[v]).map(|w| w.index())).collect()
}
