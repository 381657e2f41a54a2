//! Destination permutations, pebble placements and cycle structure.
//!
//! Orientation is fixed crate-wide: pebble `i` starts on vertex `i` and must
//! finish on vertex `pi(i)`.

use crate::error::{Error, Result};
use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<Vertex>,
}

impl Permutation {
    pub fn new(image: Vec<Vertex>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for (i, &v) in image.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidPermutation(format!("entry {i} maps to {v}, out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("{v} appears twice")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Product of the given disjoint cycles; each cycle `(c0 c1 ...)` sends `c0` to `c1`.
    pub fn from_cycles(n: usize, cycles: &[Vec<Vertex>]) -> Result<Self> {
        let mut image: Vec<Vertex> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (j, &v) in c.iter().enumerate() {
                if v >= n || std::mem::replace(&mut touched[v], true) {
                    return Err(Error::InvalidPermutation(format!("cycle entry {v} invalid or repeated")));
                }
                image[v] = c[(j + 1) % c.len()];
            }
        }
        Permutation::new(image)
    }

    /// The transposition of `a` and `b` on `n` points.
    pub fn transposition(n: usize, a: Vertex, b: Vertex) -> Self {
        let mut image: Vec<Vertex> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[Vertex] {
        &self.image
    }

    pub fn apply(&self, i: Vertex) -> Vertex {
        self.image[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation { image: other.image.iter().map(|&v| self.image[v]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|&(i, &v)| i == v).count()
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycle_decompose(self)
    }
}

/// `at[v]` is the pebble currently on vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PebbleConfig {
    at: Vec<usize>,
}

impl PebbleConfig {
    pub fn identity(n: usize) -> Self {
        PebbleConfig { at: (0..n).collect() }
    }

    pub fn from_vec(at: Vec<usize>) -> Result<Self> {
        Permutation::new(at.clone())?;
        Ok(PebbleConfig { at })
    }

    /// The configuration in which every pebble `i` sits on `pi(i)`.
    pub fn target_of(pi: &Permutation) -> Self {
        PebbleConfig { at: pi.inverse().image }
    }

    pub fn at(&self) -> &[usize] {
        &self.at
    }

    pub fn pebble_at(&self, v: Vertex) -> usize {
        self.at[v]
    }

    pub fn len(&self) -> usize {
        self.at.len()
    }

    pub fn is_empty(&self) -> bool {
        self.at.is_empty()
    }

    pub(crate) fn swap(&mut self, u: Vertex, v: Vertex) {
        self.at.swap(u, v);
    }

    /// Vertex currently holding each pebble.
    pub fn positions(&self) -> Vec<Vertex> {
        let mut pos = vec![0; self.at.len()];
        for (v, &p) in self.at.iter().enumerate() {
            pos[p] = v;
        }
        pos
    }

    /// Number of pebbles `i` that sit on `pi(i)`.
    pub fn agreements(&self, pi: &Permutation) -> usize {
        self.at.iter().enumerate().filter(|&(v, &p)| pi.apply(p) == v).count()
    }

    pub fn realizes(&self, pi: &Permutation) -> bool {
        self.agreements(pi) == self.at.len()
    }
}

/// Cycles of a permutation, fixed points included, each listed from its
/// smallest element in the order `c, pi(c), pi(pi(c)), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<Vertex>>,
    /// Index of the cycle containing each vertex.
    pub cycle_of: Vec<usize>,
    /// Position of each vertex inside its cycle.
    pub index_in_cycle: Vec<usize>,
}

impl CycleDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertex_set(&self, i: usize) -> &[Vertex] {
        &self.cycles[i]
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_cycles(self.cycle_of.len(), &self.cycles).expect("cycles partition the vertex set")
    }
}

pub fn cycle_decompose(pi: &Permutation) -> CycleDecomposition {
    let n = pi.len();
    let mut cycle_of = vec![usize::MAX; n];
    let mut index_in_cycle = vec![0; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            cycle_of[v] = id;
            index_in_cycle[v] = cycle.len();
            cycle.push(v);
            v = pi.apply(v);
            if v == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    CycleDecomposition { cycles, cycle_of, index_in_cycle }
}
