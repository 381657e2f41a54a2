//! 3-SAT to "routable in three steps".
//!
//! Every gadget is a set of 2-cycles whose endpoints sit at distance 2 or 3,
//! so each pair must move on every one of the three steps along a shortest
//! path, and the inner vertices of that path are busy for all three steps.
//!
//! * Clause: ends `a`, `b` joined by three paths of length 2; the middle
//!   vertex of each path stands for one literal of the clause.
//! * Variable with `m` occurrences: `m` hexagons. Hexagon `i` has ends
//!   `a_i`, `b_i`, top path `a_i - x_i - u_i - b_i` and bottom path
//!   `a_i - u_{i+1} - nx_i - b_i`; neighbouring hexagons share the joint
//!   `u_{i+1}`. A diamond chain joins `u_1` and `u_{m+1}`.
//! * Diamond chain: 4-cycles in a row sharing corners, each swapping its top
//!   and bottom vertex through one of its two corners. If one end corner is
//!   busy, every diamond takes its far corner, so the other end is busy too.
//! * Occurrence `i` of a variable links its hexagon's literal vertex
//!   (`x_i`, or `nx_i` for a negated occurrence) to the clause's literal
//!   vertex by a diamond chain.
//!
//! Variable false routes every hexagon on top; variable true routes them all
//! on the bottom. A clause routes through a literal vertex whose chain was
//! free to take the hexagon side, which happens exactly when the literal is
//! true.

use serde::Serialize;

use super::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::{PebbleConfig, Permutation};
use crate::schedule::{apply_matching, verify_schedule, MatchingStep, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    A,
    B,
}

/// What a vertex of a generated instance stands for. Indices are 0-based;
/// variables keep their 1-based formula numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    ClauseEnd { clause: usize, end: End },
    ClauseLiteral { clause: usize, position: usize, literal: i32 },
    HexagonEnd { variable: usize, hexagon: usize, end: End },
    /// `x_i` for a positive literal, `nx_i` for a negative one.
    HexagonLiteral { variable: usize, hexagon: usize, literal: i32 },
    Joint { variable: usize, index: usize },
    DiamondTop { chain: usize, diamond: usize },
    DiamondBottom { chain: usize, diamond: usize },
    Corner { chain: usize, index: usize },
    /// A pair swapped through one vertex to keep that vertex busy (probes only).
    Marker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    /// `len + 1` corners; the first and last belong to the joined gadgets.
    pub corners: Vec<Vertex>,
    /// Top and bottom vertex of each diamond.
    pub diamonds: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    pub a: Vertex,
    pub b: Vertex,
    pub pos: Vertex,
    pub neg: Vertex,
    /// `u_i`, on the top path.
    pub top_joint: Vertex,
    /// `u_{i+1}`, on the bottom path.
    pub bottom_joint: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableGadget {
    pub hexagons: Vec<Hexagon>,
    pub joints: Vec<Vertex>,
    /// Index of the chain joining the first and last joint.
    pub chain: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseGadget {
    pub a: Vertex,
    pub b: Vertex,
    pub literals: [i32; 3],
    pub middles: [Vertex; 3],
    /// Chain linking each literal vertex to its hexagon.
    pub links: [usize; 3],
}

/// The routing instance built from a formula.
#[derive(Debug, Clone, Serialize)]
pub struct SatInstance {
    pub formula: CnfFormula,
    pub chain_len: usize,
    #[serde(skip)]
    pub graph: Graph,
    #[serde(skip)]
    pub perm: Permutation,
    pub roles: Vec<Role>,
    /// Indexed by variable number minus one; `None` for unused variables.
    pub variables: Vec<Option<VariableGadget>>,
    pub clauses: Vec<ClauseGadget>,
    pub chains: Vec<Chain>,
}

#[derive(Default)]
struct Builder {
    roles: Vec<Role>,
    edges: Vec<(Vertex, Vertex)>,
    swaps: Vec<(Vertex, Vertex)>,
    chains: Vec<Chain>,
}

impl Builder {
    fn vertex(&mut self, role: Role) -> Vertex {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn path(&mut self, vs: &[Vertex]) {
        self.edges.extend(vs.windows(2).map(|w| (w[0], w[1])));
    }

    fn chain(&mut self, from: Vertex, to: Vertex, len: usize) -> usize {
        let id = self.chains.len();
        let mut corners = vec![from];
        for index in 1..len {
            corners.push(self.vertex(Role::Corner { chain: id, index }));
        }
        corners.push(to);
        let mut diamonds = Vec::with_capacity(len);
        for (diamond, w) in corners.windows(2).enumerate() {
            let top = self.vertex(Role::DiamondTop { chain: id, diamond });
            let bottom = self.vertex(Role::DiamondBottom { chain: id, diamond });
            self.path(&[w[0], top, w[1], bottom, w[0]]);
            self.swaps.push((top, bottom));
            diamonds.push((top, bottom));
        }
        self.chains.push(Chain { corners, diamonds });
        id
    }

    fn hexagon(&mut self, variable: usize, hexagon: usize, top_joint: Vertex, bottom_joint: Vertex) -> Hexagon {
        let v = variable as i32;
        let a = self.vertex(Role::HexagonEnd { variable, hexagon, end: End::A });
        let b = self.vertex(Role::HexagonEnd { variable, hexagon, end: End::B });
        let pos = self.vertex(Role::HexagonLiteral { variable, hexagon, literal: v });
        let neg = self.vertex(Role::HexagonLiteral { variable, hexagon, literal: -v });
        self.path(&[a, pos, top_joint, b, neg, bottom_joint, a]);
        self.swaps.push((a, b));
        Hexagon { a, b, pos, neg, top_joint, bottom_joint }
    }

    fn variable(&mut self, variable: usize, occurrences: usize, chain_len: usize) -> VariableGadget {
        let joints: Vec<Vertex> =
            (0..=occurrences).map(|index| self.vertex(Role::Joint { variable, index })).collect();
        let hexagons = (0..occurrences).map(|i| self.hexagon(variable, i, joints[i], joints[i + 1])).collect();
        let chain = self.chain(joints[0], joints[occurrences], chain_len);
        VariableGadget { hexagons, joints, chain }
    }

    /// Keeps `v` busy for three steps with a pair swapped through it.
    fn mark_busy(&mut self, v: Vertex) {
        let p = self.vertex(Role::Marker);
        let q = self.vertex(Role::Marker);
        self.path(&[p, v, q]);
        self.swaps.push((p, q));
    }

    fn finish(self) -> (Graph, Permutation, Vec<Role>, Vec<Chain>) {
        let n = self.roles.len();
        let g = Graph::new(n, self.edges).expect("gadget edges are simple");
        let cycles: Vec<Vec<Vertex>> = self.swaps.iter().map(|&(a, b)| vec![a, b]).collect();
        let pi = Permutation::from_cycles(n, &cycles).expect("gadget pairs are disjoint");
        (g, pi, self.roles, self.chains)
    }
}

/// Builds the routing instance of `f` with `chain_len` diamonds per chain.
pub fn build_sat_instance(f: &CnfFormula, chain_len: usize) -> Result<SatInstance> {
    if chain_len == 0 {
        return Err(Error::input("chain length must be at least 1"));
    }
    let mut bld = Builder::default();
    let mut clauses = Vec::with_capacity(f.clauses().len());
    for (c, lits) in f.clauses().iter().enumerate() {
        let a = bld.vertex(Role::ClauseEnd { clause: c, end: End::A });
        let b = bld.vertex(Role::ClauseEnd { clause: c, end: End::B });
        let middles: [Vertex; 3] = std::array::from_fn(|p| bld.vertex(Role::ClauseLiteral { clause: c, position: p, literal: lits[p] }));
        for &m in &middles {
            bld.path(&[a, m, b]);
        }
        bld.swaps.push((a, b));
        clauses.push(ClauseGadget { a, b, literals: *lits, middles, links: [0; 3] });
    }
    let occurrences = f.occurrences();
    let variables: Vec<Option<VariableGadget>> = occurrences
        .iter()
        .enumerate()
        .map(|(x, occ)| (!occ.is_empty()).then(|| bld.variable(x + 1, occ.len(), chain_len)))
        .collect();
    for (x, occ) in occurrences.iter().enumerate() {
        for (i, &(c, p)) in occ.iter().enumerate() {
            let hex = variables[x].as_ref().expect("used variable has a gadget").hexagons[i];
            let from = if clauses[c].literals[p] > 0 { hex.pos } else { hex.neg };
            clauses[c].links[p] = bld.chain(from, clauses[c].middles[p], chain_len);
        }
    }
    let (graph, perm, roles, chains) = bld.finish();
    Ok(SatInstance { formula: f.clone(), chain_len, graph, perm, roles, variables, clauses, chains })
}

#[derive(Default)]
struct Steps([Vec<(Vertex, Vertex)>; 3]);

impl Steps {
    /// Swaps the ends of `a - m - b` in three steps through `m`.
    fn through_one(&mut self, a: Vertex, m: Vertex, b: Vertex) {
        self.0[0].push((a, m));
        self.0[1].push((m, b));
        self.0[2].push((a, m));
    }

    /// Swaps the ends of `a - p - q - b` in three steps.
    fn through_two(&mut self, a: Vertex, p: Vertex, q: Vertex, b: Vertex) {
        for s in [0, 2] {
            self.0[s].push((a, p));
            self.0[s].push((q, b));
        }
        self.0[1].push((p, q));
    }

    /// Routes every diamond through its far corner (`far`) or its near one.
    fn chain(&mut self, chain: &Chain, far: bool) {
        for (j, &(top, bottom)) in chain.diamonds.iter().enumerate() {
            let corner = chain.corners[if far { j + 1 } else { j }];
            self.through_one(top, corner, bottom);
        }
    }

    fn hexagon(&mut self, h: &Hexagon, bottom: bool) {
        if bottom {
            self.through_two(h.a, h.bottom_joint, h.neg, h.b);
        } else {
            self.through_two(h.a, h.pos, h.top_joint, h.b);
        }
    }

    fn into_schedule(self) -> Schedule {
        Schedule::new(self.0.into_iter().map(MatchingStep::new).collect())
    }
}

/// The three-step schedule for a satisfying assignment (`assign[x - 1]` is
/// variable `x`), or `None` if some clause has no true literal.
pub fn assignment_to_schedule(inst: &SatInstance, assign: &[bool]) -> Option<Schedule> {
    if assign.len() != inst.formula.num_vars() || !inst.formula.satisfied_by(assign) {
        return None;
    }
    let mut steps = Steps::default();
    for (x, gadget) in inst.variables.iter().enumerate() {
        let Some(gadget) = gadget else { continue };
        let value = assign[x];
        for h in &gadget.hexagons {
            steps.hexagon(h, value);
        }
        // Top routing occupies the first joint, bottom routing the last.
        steps.chain(&inst.chains[gadget.chain], !value);
    }
    for clause in &inst.clauses {
        for p in 0..3 {
            // A false literal's hexagon vertex is busy, so its chain takes
            // the clause vertex.
            let truth = CnfFormula::literal_true(clause.literals[p], assign);
            steps.chain(&inst.chains[clause.links[p]], !truth);
        }
        let p = (0..3).find(|&p| CnfFormula::literal_true(clause.literals[p], assign))?;
        steps.through_one(clause.a, clause.middles[p], clause.b);
    }
    Some(steps.into_schedule())
}

/// Where the end `a` of `h` went on the first step: `Some(true)` for the
/// bottom path, `Some(false)` for the top path.
pub fn hexagon_side(h: &Hexagon, after_first: &PebbleConfig) -> Option<bool> {
    let at = after_first.positions()[h.a];
    if at == h.bottom_joint {
        Some(true)
    } else if at == h.pos {
        Some(false)
    } else {
        None
    }
}

/// Reads the assignment from a valid three-step schedule. Unused variables
/// read as false.
pub fn extract_assignment(inst: &SatInstance, s: &Schedule) -> Result<Vec<bool>> {
    let report = verify_schedule(&inst.graph, &inst.perm, s);
    if !report.valid {
        return Err(Error::input(format!("schedule does not route the instance: {}", report.reason.unwrap_or_else(|| "pebbles misplaced".into()))));
    }
    if s.len() != 3 {
        return Err(Error::input(format!("schedule has {} steps, expected 3", s.len())));
    }
    let first = apply_matching(&inst.graph, &PebbleConfig::identity(inst.graph.n()), &s.steps()[0])?;
    let mut assign = vec![false; inst.formula.num_vars()];
    for (x, gadget) in inst.variables.iter().enumerate() {
        let Some(gadget) = gadget else { continue };
        let sides = gadget
            .hexagons
            .iter()
            .map(|h| hexagon_side(h, &first).ok_or_else(|| Error::input(format!("hexagon end {} left its paths", h.a))))
            .collect::<Result<Vec<bool>>>()?;
        if sides.iter().any(|&s| s != sides[0]) {
            return Err(Error::input(format!("variable {} routes its hexagons on both sides", x + 1)));
        }
        assign[x] = sides[0];
    }
    if !inst.formula.satisfied_by(&assign) {
        return Err(Error::input("extracted assignment does not satisfy the formula"));
    }
    Ok(assign)
}

/// A single gadget with its pairs, for checking gadget facts in isolation.
#[derive(Debug, Clone)]
pub struct GadgetProbe {
    pub graph: Graph,
    pub perm: Permutation,
    pub roles: Vec<Role>,
    pub chains: Vec<Chain>,
    pub variable: Option<VariableGadget>,
}

impl GadgetProbe {
    fn from_builder(bld: Builder, variable: Option<VariableGadget>) -> Self {
        let (graph, perm, roles, chains) = bld.finish();
        GadgetProbe { graph, perm, roles, chains, variable }
    }
}

/// One diamond chain of `len` diamonds; `busy[0]` and `busy[1]` hang a
/// marker pair on the first and last corner.
pub fn chain_probe(len: usize, busy: [bool; 2]) -> GadgetProbe {
    let mut bld = Builder::default();
    let from = bld.vertex(Role::Corner { chain: 0, index: 0 });
    let to = bld.vertex(Role::Corner { chain: 0, index: len });
    bld.chain(from, to, len);
    for (end, v) in [(busy[0], from), (busy[1], to)] {
        if end {
            bld.mark_busy(v);
        }
    }
    GadgetProbe::from_builder(bld, None)
}

/// A variable gadget with `occurrences` hexagons and its closing chain.
pub fn variable_probe(occurrences: usize, chain_len: usize) -> GadgetProbe {
    let mut bld = Builder::default();
    let gadget = bld.variable(1, occurrences, chain_len);
    GadgetProbe::from_builder(bld, Some(gadget))
}

/// A lone hexagon swapping its ends.
pub fn hexagon_probe() -> GadgetProbe {
    let mut bld = Builder::default();
    let u = bld.vertex(Role::Joint { variable: 1, index: 0 });
    let w = bld.vertex(Role::Joint { variable: 1, index: 1 });
    bld.hexagon(1, 0, u, w);
    GadgetProbe::from_builder(bld, None)
}

/// A lone clause swapping its ends.
pub fn clause_probe() -> GadgetProbe {
    let mut bld = Builder::default();
    let a = bld.vertex(Role::ClauseEnd { clause: 0, end: End::A });
    let b = bld.vertex(Role::ClauseEnd { clause: 0, end: End::B });
    for (position, literal) in [1, 2, 3].into_iter().enumerate() {
        let m = bld.vertex(Role::ClauseLiteral { clause: 0, position, literal });
        bld.path(&[a, m, b]);
    }
    bld.swaps.push((a, b));
    GadgetProbe::from_builder(bld, None)
}
