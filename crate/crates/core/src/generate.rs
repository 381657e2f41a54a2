//! Graph and permutation generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::perm::Permutation;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
}

/// Star `K_{1,n-1}` centered at vertex 0.
pub fn star(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (0, v))).expect("star is simple")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("complete graph is simple")
}

/// `K_{s,t}` with sides `0..s` and `s..s+t`.
pub fn complete_bipartite(s: usize, t: usize) -> Graph {
    Graph::new(s + t, (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v)))).expect("K_{s,t} is simple")
}

/// The `d`-dimensional cube on `2^d` vertices.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let edges = (0..n).flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v);
    Graph::new(n, edges).expect("hypercube is simple")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
}

/// Uniform random labelled tree via a Prüfer sequence.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    if n <= 2 {
        return path(n);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = *leaves.iter().next().expect("a leaf always exists");
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).expect("Prüfer decoding yields a tree")
}

/// Random tree where each vertex attaches to a uniformly chosen earlier vertex.
pub fn random_recursive_tree(n: usize, rng: &mut impl Rng) -> Graph {
    Graph::new(n, (1..n).map(|v| (rng.gen_range(0..v), v))).expect("recursive tree is simple")
}

/// A random spanning tree plus every other pair independently with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let tree = random_tree(n, rng);
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("distinct pairs")
}

/// `K_h` on the ports `0..h`, each port the root of a random tree; block
/// sizes differ by at most one. Returns the graph and the blocks, port first.
pub fn clique_with_trees(h: usize, n: usize, rng: &mut impl Rng) -> (Graph, Vec<Vec<usize>>) {
    let ports = complete(h);
    blocks_on_ports(&ports, n, rng)
}

fn blocks_on_ports(ports: &Graph, n: usize, rng: &mut impl Rng) -> (Graph, Vec<Vec<usize>>) {
    let h = ports.n();
    assert!(h >= 1 && n >= h, "need at least one vertex per port");
    let mut edges: Vec<(usize, usize)> = ports.edges().to_vec();
    let mut blocks = Vec::with_capacity(h);
    let mut next = h;
    for i in 0..h {
        let size = n / h + usize::from(i < n % h);
        let map: Vec<usize> = std::iter::once(i).chain(next..next + size - 1).collect();
        next += size - 1;
        let tree = random_tree(size, rng);
        edges.extend(tree.edges().iter().map(|&(u, v)| (map[u], map[v])));
        blocks.push(map);
    }
    (Graph::new(n, edges).expect("blocks are disjoint"), blocks)
}

/// Random tree blocks on a random connected port graph, with random extra
/// edges added until the graph is `h`-connected.
pub fn partitioned_h_connected(h: usize, n: usize, rng: &mut impl Rng) -> (Graph, Vec<Vec<usize>>) {
    let ports = if h == 1 { path(1) } else { random_connected(h, 0.3, rng) };
    let (g, blocks) = blocks_on_ports(&ports, n, rng);
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut g = g;
    while crate::connectivity::vertex_connectivity(&g) < h {
        for _ in 0..n {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && !g.has_edge(u, v) && !edges.contains(&(v, u)) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
        g = Graph::new(n, edges.iter().copied()).expect("new pairs are distinct");
    }
    (g, blocks)
}

/// `K_kappa` on `0..kappa` with a path of `q` further vertices hanging off
/// vertex `kappa - 1`.
pub fn clique_with_path(kappa: usize, q: usize) -> Graph {
    assert!(kappa >= 1, "clique needs a vertex");
    let clique = (0..kappa).flat_map(|u| (u + 1..kappa).map(move |v| (u, v)));
    let tail = (kappa..kappa + q).map(|v| (v - 1, v));
    Graph::new(kappa + q, clique.chain(tail)).expect("clique with path is simple")
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::new(image).expect("shuffled identity is a permutation")
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation::new(cur.clone()).expect("permutation"));
        // Next lexicographic permutation.
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// All connected graphs on `n <= 6` labelled vertices, or one representative
/// per isomorphism class when `up_to_isomorphism` is set.
pub fn connected_graphs(n: usize, up_to_isomorphism: bool) -> Vec<Graph> {
    assert!(n <= 6, "exhaustive enumeration is limited to n <= 6");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = if up_to_isomorphism { all_permutations(n) } else { Vec::new() };
    let pair_index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let relabel: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| pair_index(p.apply(u), p.apply(v))).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if mask.count_ones() + 1 < n as u32 {
            continue;
        }
        let edges = pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let g = Graph::new(n, edges).expect("distinct pairs");
        if !g.is_connected() {
            continue;
        }
        if up_to_isomorphism {
            let canon = relabel
                .iter()
                .map(|map| map.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).fold(0u64, |acc, (_, &j)| acc | 1 << j))
                .min()
                .expect("at least one relabelling");
            if !seen.insert(canon) {
                continue;
            }
        }
        out.push(g);
    }
    out
}
