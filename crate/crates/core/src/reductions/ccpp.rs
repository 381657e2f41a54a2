//! Connected colored partitions.
//!
//! A partition is valid when every block induces a connected subgraph and
//! every color class lies inside one block. The reduction from 3-SAT makes
//! "largest block at most 4" equivalent to satisfiability:
//!
//! * Clause: ends `a`, `b` of one color joined by three paths of length 3;
//!   the two inner vertices of each path are literal vertices of a variable.
//! * Variable with `m` occurrences: `2m` hexagons closed into a ring. Hexagon
//!   `i` has ends `a_i`, `b_i` of one color, top path `a_i - x_i - u_i - b_i`
//!   and bottom path `a_i - u_{i+1} - nx_i - b_i`, with `u_{2m} = u_0`.
//!   Occurrence `k` fuses the literal vertices of hexagons `2k` and `2k + 1`
//!   into one clause path.
//!
//! With blocks of size 4 each colored pair takes one of its paths whole, the
//! ring forces all hexagons of a variable onto the same side, and a clause
//! path is free exactly when its literal is true.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use serde::Serialize;

use super::cnf::CnfFormula;
use super::sat::{End, Hexagon, Role};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::SearchBudget;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcppClause {
    pub a: Vertex,
    pub b: Vertex,
    pub literals: [i32; 3],
    /// Inner vertices of each path, from `a` towards `b`.
    pub paths: [[Vertex; 2]; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct CcppInstance {
    pub formula: CnfFormula,
    #[serde(skip)]
    pub graph: Graph,
    pub colors: Vec<usize>,
    pub roles: Vec<Role>,
    /// Hexagon ring of each variable; empty for unused variables.
    pub variables: Vec<Vec<Hexagon>>,
    pub clauses: Vec<CcppClause>,
}

/// Builds the colored graph of `f`.
pub fn build_ccpp_instance(f: &CnfFormula) -> CcppInstance {
    let mut roles = Vec::new();
    let mut edges = Vec::new();
    let mut pairs = Vec::new();
    let mut vertex = |role| {
        roles.push(role);
        roles.len() - 1
    };
    let occurrences = f.occurrences();
    let mut variables = Vec::with_capacity(f.num_vars());
    for (x, occ) in occurrences.iter().enumerate() {
        let variable = x + 1;
        let ring = 2 * occ.len();
        let joints: Vec<Vertex> = (0..ring).map(|index| vertex(Role::Joint { variable, index })).collect();
        let mut hexagons = Vec::with_capacity(ring);
        for hexagon in 0..ring {
            let a = vertex(Role::HexagonEnd { variable, hexagon, end: End::A });
            let b = vertex(Role::HexagonEnd { variable, hexagon, end: End::B });
            let pos = vertex(Role::HexagonLiteral { variable, hexagon, literal: variable as i32 });
            let neg = vertex(Role::HexagonLiteral { variable, hexagon, literal: -(variable as i32) });
            let (top_joint, bottom_joint) = (joints[hexagon], joints[(hexagon + 1) % ring]);
            let cycle = [a, pos, top_joint, b, neg, bottom_joint, a];
            edges.extend(cycle.windows(2).map(|w| (w[0], w[1])));
            pairs.push((a, b));
            hexagons.push(Hexagon { a, b, pos, neg, top_joint, bottom_joint });
        }
        variables.push(hexagons);
    }
    let mut next_occurrence = vec![0; f.num_vars()];
    let mut clauses = Vec::with_capacity(f.clauses().len());
    for (c, lits) in f.clauses().iter().enumerate() {
        let a = vertex(Role::ClauseEnd { clause: c, end: End::A });
        let b = vertex(Role::ClauseEnd { clause: c, end: End::B });
        let paths = lits.map(|l| {
            let x = l.unsigned_abs() as usize - 1;
            let k = next_occurrence[x];
            next_occurrence[x] += 1;
            let pick = |h: &Hexagon| if l > 0 { h.pos } else { h.neg };
            let inner = [pick(&variables[x][2 * k]), pick(&variables[x][2 * k + 1])];
            edges.extend([(a, inner[0]), (inner[0], inner[1]), (inner[1], b)]);
            inner
        });
        pairs.push((a, b));
        clauses.push(CcppClause { a, b, literals: *lits, paths });
    }
    let n = roles.len();
    let graph = Graph::new(n, edges).expect("gadget edges are simple");
    let mut colors = vec![usize::MAX; n];
    let mut next = 0;
    for &(a, b) in &pairs {
        colors[a] = next;
        colors[b] = next;
        next += 1;
    }
    for c in colors.iter_mut().filter(|c| **c == usize::MAX) {
        *c = next;
        next += 1;
    }
    CcppInstance { formula: f.clone(), graph, colors, roles, variables, clauses }
}

/// The blocks of size at most 4 given by a satisfying assignment, or `None`
/// if some clause has no true literal.
pub fn assignment_to_partition(inst: &CcppInstance, assign: &[bool]) -> Option<Vec<Vec<Vertex>>> {
    if !inst.formula.satisfied_by(assign) {
        return None;
    }
    let mut blocks = Vec::new();
    for (x, ring) in inst.variables.iter().enumerate() {
        for h in ring {
            blocks.push(if assign[x] { vec![h.a, h.bottom_joint, h.neg, h.b] } else { vec![h.a, h.pos, h.top_joint, h.b] });
        }
    }
    for c in &inst.clauses {
        let p = (0..3).find(|&p| CnfFormula::literal_true(c.literals[p], assign))?;
        blocks.push(vec![c.a, c.paths[p][0], c.paths[p][1], c.b]);
    }
    let mut used = vec![false; inst.graph.n()];
    for b in &blocks {
        for &v in b {
            used[v] = true;
        }
    }
    blocks.extend((0..inst.graph.n()).filter(|&v| !used[v]).map(|v| vec![v]));
    Some(normalize(blocks))
}

fn normalize(mut blocks: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_unstable();
    blocks
}

/// True iff `blocks` partition the vertices, keep each color class together,
/// induce connected subgraphs and have at most `t` vertices each.
pub fn verify_ccpp_partition(g: &Graph, colors: &[usize], blocks: &[Vec<Vertex>], t: usize) -> bool {
    let n = g.n();
    if colors.len() != n {
        return false;
    }
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() || b.len() > t || !g.is_connected_subset(b) {
            return false;
        }
        for &v in b {
            if v >= n || block_of[v] != usize::MAX {
                return false;
            }
            block_of[v] = i;
        }
    }
    if block_of.contains(&usize::MAX) {
        return false;
    }
    let mut color_block = std::collections::HashMap::new();
    (0..n).all(|v| *color_block.entry(colors[v]).or_insert(block_of[v]) == block_of[v])
}

struct Solver<'a> {
    g: &'a Graph,
    t: usize,
    classes: Vec<Vec<Vertex>>,
    class_of: Vec<usize>,
    /// Classes that do not induce a connected subgraph on their own.
    needy: Vec<usize>,
    taken: Vec<bool>,
    chosen: Vec<Vec<usize>>,
    budget: SearchBudget,
    nodes: usize,
    start: Instant,
}

impl Solver<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_states || (self.nodes.is_multiple_of(1024) && self.start.elapsed() > self.budget.time_limit) {
            return Err(Error::BudgetExhausted { lower_bound: 0, states: self.nodes });
        }
        Ok(())
    }

    fn vertices(&self, set: &BTreeSet<usize>) -> Vec<Vertex> {
        set.iter().flat_map(|&c| self.classes[c].iter().copied()).collect()
    }

    /// Every connected union of free classes containing `seed`, with at most
    /// `t` vertices, smallest first.
    fn blocks_with(&mut self, seed: usize) -> Result<Vec<Vec<usize>>> {
        let mut seen = HashSet::new();
        let mut stack = vec![BTreeSet::from([seed])];
        let mut out = Vec::new();
        while let Some(set) = stack.pop() {
            self.tick()?;
            if !seen.insert(set.clone()) {
                continue;
            }
            let vs = self.vertices(&set);
            if self.g.is_connected_subset(&vs) {
                out.push(set.iter().copied().collect::<Vec<_>>());
            }
            let size = vs.len();
            let mut grow = BTreeSet::new();
            for &v in &vs {
                for &w in self.g.neighbors(v) {
                    let c = self.class_of[w];
                    if !self.taken[c] && !set.contains(&c) && size + self.classes[c].len() <= self.t {
                        grow.insert(c);
                    }
                }
            }
            for c in grow {
                let mut next = set.clone();
                next.insert(c);
                if !seen.contains(&next) {
                    stack.push(next);
                }
            }
        }
        out.sort_by_key(|b| (b.iter().map(|&c| self.classes[c].len()).sum::<usize>(), b.clone()));
        Ok(out)
    }

    fn search(&mut self) -> Result<bool> {
        self.tick()?;
        let Some(&seed) = self.needy.iter().find(|&&c| !self.taken[c]) else {
            return Ok(true);
        };
        for block in self.blocks_with(seed)? {
            for &c in &block {
                self.taken[c] = true;
            }
            self.chosen.push(block);
            if self.search()? {
                return Ok(true);
            }
            for &c in &self.chosen.pop().expect("just pushed") {
                self.taken[c] = false;
            }
        }
        Ok(false)
    }
}

/// A valid partition with blocks of at most `t` vertices, or `None` if none
/// exists. Only classes that are disconnected on their own are branched on;
/// every other class left over becomes its own block.
pub fn ccpp_solve_exact(g: &Graph, colors: &[usize], t: usize, budget: SearchBudget) -> Result<Option<Vec<Vec<Vertex>>>> {
    if colors.len() != g.n() {
        return Err(Error::input(format!("{} colors for {} vertices", colors.len(), g.n())));
    }
    let mut ids: Vec<usize> = colors.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let class_of: Vec<usize> = colors.iter().map(|c| ids.binary_search(c).expect("color listed")).collect();
    let mut classes = vec![Vec::new(); ids.len()];
    for (v, &c) in class_of.iter().enumerate() {
        classes[c].push(v);
    }
    if classes.iter().any(|c| c.len() > t) {
        return Ok(None);
    }
    let needy = (0..classes.len()).filter(|&c| !g.is_connected_subset(&classes[c])).collect();
    let taken = vec![false; classes.len()];
    let mut s = Solver { g, t, classes, class_of, needy, taken, chosen: Vec::new(), budget, nodes: 0, start: Instant::now() };
    if !s.search()? {
        return Ok(None);
    }
    let mut blocks: Vec<Vec<Vertex>> =
        s.chosen.iter().map(|b| b.iter().flat_map(|&c| s.classes[c].iter().copied()).collect()).collect();
    blocks.extend((0..s.classes.len()).filter(|&c| !s.taken[c]).map(|c| s.classes[c].clone()));
    Ok(Some(normalize(blocks)))
}

/// The smallest feasible largest-block size with a partition attaining it,
/// or `None` if no valid partition exists at all.
pub fn ccpp_optimum(g: &Graph, colors: &[usize], budget: SearchBudget) -> Result<Option<(usize, Vec<Vec<Vertex>>)>> {
    for t in 1..=g.n() {
        if let Some(p) = ccpp_solve_exact(g, colors, t, budget)? {
            return Ok(Some((t, p)));
        }
    }
    Ok(None)
}
