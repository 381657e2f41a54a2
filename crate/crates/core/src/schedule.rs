//! Matching steps, schedules and their verification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::{PebbleConfig, Permutation};

/// One parallel round: a set of vertex-disjoint swaps, stored as sorted pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MatchingStep {
    pairs: Vec<(Vertex, Vertex)>,
}

impl MatchingStep {
    pub fn new(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        pairs.sort_unstable();
        MatchingStep { pairs }
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.pairs.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Checks disjointness and that every pair is an edge of `g`.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let mut used = vec![false; g.n()];
        for &(u, v) in &self.pairs {
            if u >= g.n() || v >= g.n() {
                return Err(format!("pair {u}-{v} out of range"));
            }
            if !g.has_edge(u, v) {
                return Err(format!("{u}-{v} is not an edge"));
            }
            if std::mem::replace(&mut used[u], true) || std::mem::replace(&mut used[v], true) {
                return Err(format!("pair {u}-{v} overlaps another pair"));
            }
        }
        Ok(())
    }
}

/// Swaps the pebbles at the endpoints of every pair of `step`.
pub fn apply_matching(g: &Graph, config: &PebbleConfig, step: &MatchingStep) -> Result<PebbleConfig> {
    step.validate(g).map_err(|msg| Error::InvalidStep { step: 0, msg })?;
    let mut next = config.clone();
    apply_unchecked(&mut next, step);
    Ok(next)
}

pub(crate) fn apply_unchecked(config: &mut PebbleConfig, step: &MatchingStep) {
    for &(u, v) in step.pairs() {
        config.swap(u, v);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Schedule {
    steps: Vec<MatchingStep>,
}

impl Schedule {
    pub fn new(steps: Vec<MatchingStep>) -> Self {
        Schedule { steps }
    }

    pub fn empty() -> Self {
        Schedule::default()
    }

    pub fn steps(&self) -> &[MatchingStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: MatchingStep) {
        self.steps.push(step);
    }

    /// Appends `other` after `self`.
    pub fn extend(&mut self, other: Schedule) {
        self.steps.extend(other.steps);
    }

    pub fn reversed(&self) -> Schedule {
        Schedule { steps: self.steps.iter().rev().cloned().collect() }
    }

    pub fn swap_count(&self) -> usize {
        self.steps.iter().map(MatchingStep::len).sum()
    }

    /// Drops steps without swaps.
    pub fn without_empty_steps(mut self) -> Schedule {
        self.steps.retain(|s| !s.is_empty());
        self
    }

    /// Runs the schedule from the identity configuration without validation.
    pub fn final_config(&self, n: usize) -> PebbleConfig {
        let mut c = PebbleConfig::identity(n);
        for s in &self.steps {
            apply_unchecked(&mut c, s);
        }
        c
    }

    /// Step-wise union of schedules acting on disjoint vertex sets.
    pub fn parallel(parts: impl IntoIterator<Item = Schedule>) -> Schedule {
        let mut steps: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
        for part in parts {
            for (i, s) in part.steps.into_iter().enumerate() {
                if steps.len() <= i {
                    steps.resize_with(i + 1, Vec::new);
                }
                steps[i].extend(s.pairs);
            }
        }
        Schedule { steps: steps.into_iter().map(MatchingStep::new).collect() }
    }

    /// Moves every swap to the earliest step after the last earlier swap
    /// sharing an endpoint with it. Swaps on disjoint vertices commute, so
    /// the composed permutation is unchanged and the length never grows.
    pub fn compact(&self) -> Schedule {
        let mut last: std::collections::HashMap<Vertex, usize> = std::collections::HashMap::new();
        let mut steps: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
        for s in &self.steps {
            for &(u, v) in &s.pairs {
                let after = |x: Option<&usize>| x.map_or(0, |&i| i + 1);
                let slot = after(last.get(&u)).max(after(last.get(&v)));
                if steps.len() <= slot {
                    steps.resize_with(slot + 1, Vec::new);
                }
                steps[slot].push((u, v));
                last.insert(u, slot);
                last.insert(v, slot);
            }
        }
        Schedule { steps: steps.into_iter().map(MatchingStep::new).collect() }
    }
}

/// Outcome of [`verify_schedule`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub steps: usize,
    /// First step (0-based) that is empty, overlapping or uses a non-edge.
    pub first_bad_step: Option<usize>,
    pub reason: Option<String>,
    /// Pebbles not on their destination after the last step.
    pub misplaced: Vec<usize>,
}

/// Checks that `s` is a sequence of nonempty matchings of `g` that routes `pi`.
pub fn verify_schedule(g: &Graph, pi: &Permutation, s: &Schedule) -> VerificationReport {
    let fail = |step: Option<usize>, reason: String| VerificationReport {
        valid: false,
        steps: s.len(),
        first_bad_step: step,
        reason: Some(reason),
        misplaced: Vec::new(),
    };
    if pi.len() != g.n() {
        return fail(None, format!("permutation size {} differs from graph size {}", pi.len(), g.n()));
    }
    let mut config = PebbleConfig::identity(g.n());
    for (i, step) in s.steps().iter().enumerate() {
        if step.is_empty() {
            return fail(Some(i), "empty step".into());
        }
        if let Err(msg) = step.validate(g) {
            return fail(Some(i), msg);
        }
        apply_unchecked(&mut config, step);
    }
    let misplaced: Vec<usize> =
        (0..g.n()).filter(|&v| pi.apply(config.pebble_at(v)) != v).map(|v| config.pebble_at(v)).collect();
    let valid = misplaced.is_empty();
    VerificationReport {
        valid,
        steps: s.len(),
        first_bad_step: None,
        reason: (!valid).then(|| format!("{} pebbles misplaced", misplaced.len())),
        misplaced,
    }
}
