//! Symbolic controller synthesis against finite-automaton specifications.
//!
//! A specification is a non-blocking NFA whose states are regions of the
//! mode partition. For each symbolic state the outgoing input sets form a
//! graph with edges between intersecting sets; a connected component is
//! selected when the union of its destination cells fits inside the
//! spec's successor region. The strategy assigns the union of the
//! selected components' input sets; the resulting closed loop enforces
//! the specification, and its distance to the maximal enforcing
//! controller is bounded by the abstraction's granularity.

use std::collections::BTreeMap;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abstraction::{gran, SymbolicState, SymbolicSystem, SymbolicTransition};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, PolytopeSet};
use crate::linalg::Point;
use crate::pwa::{PWASystem, Trajectory};
use crate::sample::sample_in_set;
use crate::scalar::Scalar;

/// Non-deterministic finite automaton over a sub-collection of the mode
/// partition. `mode_indices[q]` is the region of spec state `q`; edges
/// connect spec-state positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecAutomaton {
    mode_indices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl SpecAutomaton {
    pub fn new(
        mode_indices: Vec<usize>,
        edges: Vec<(usize, usize)>,
        mode_count: usize,
    ) -> Result<SpecAutomaton> {
        for &m in &mode_indices {
            if m >= mode_count {
                return Err(Error::SpecStateNotAMode(m));
            }
        }
        for w in mode_indices.iter().enumerate() {
            if mode_indices[..w.0].contains(w.1) {
                return Err(Error::Model(format!("duplicate spec state for mode {}", w.1)));
            }
        }
        for &(s, d) in &edges {
            if s >= mode_indices.len() || d >= mode_indices.len() {
                return Err(Error::Model(format!("spec edge ({s}, {d}) out of range")));
            }
        }
        for q in 0..mode_indices.len() {
            if !edges.iter().any(|&(s, _)| s == q) {
                return Err(Error::SpecBlockingState(q));
            }
        }
        Ok(SpecAutomaton { mode_indices, edges })
    }

    pub fn mode_indices(&self) -> &[usize] {
        &self.mode_indices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Spec-state position whose region is the given mode, if any.
    pub fn position_of_mode(&self, mode: usize) -> Option<usize> {
        self.mode_indices.iter().position(|&m| m == mode)
    }

    pub fn successors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |&&(s, _)| s == q)
            .map(|&(_, d)| d)
    }
}

/// Overlap graph of one state's outgoing input sets: nodes follow the
/// outgoing-transition order, an edge joins two sets with non-empty
/// intersection. `dsts` records each node's destination state.
#[derive(Clone, Debug)]
pub struct InputGraph {
    pub nodes: Vec<Polytope>,
    pub edges: Vec<(usize, usize)>,
    pub dsts: Vec<usize>,
}

pub fn build_input_graph(a: &SymbolicSystem, state_id: usize) -> InputGraph {
    let mut nodes = Vec::new();
    let mut dsts = Vec::new();
    for &t in a.outgoing(state_id) {
        let tr = &a.transitions()[t];
        nodes.push(tr.input_set.clone());
        dsts.push(tr.dst);
    }
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i].intersects(&nodes[j]) {
                edges.push((i, j));
            }
        }
    }
    InputGraph { nodes, edges, dsts }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Maximal connected node sets, ordered by smallest member, members
/// ascending.
pub fn connected_components(graph: &InputGraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(graph.nodes.len());
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for n in 0..graph.nodes.len() {
        by_root.entry(uf.find(n)).or_default().push(n);
    }
    by_root.into_values().collect()
}

/// Union of the spec-successor regions of the spec state containing the
/// cell; empty when the cell's mode is outside the specification.
pub fn post_q(
    sys: &PWASystem,
    a: &SymbolicSystem,
    spec: &SpecAutomaton,
    state_id: usize,
) -> PolytopeSet {
    let mode = a.states()[state_id].mode;
    let n = sys.state_dim();
    match spec.position_of_mode(mode) {
        Some(q) => {
            let parts: Vec<Polytope> = spec
                .successors(q)
                .map(|q2| sys.restricted_guard(spec.mode_indices[q2]).clone())
                .collect();
            PolytopeSet::new(n, parts)
        }
        None => PolytopeSet::empty(n),
    }
}

/// Map from symbolic states to admissible input regions. States missing
/// from the map carry the empty assignment.
#[derive(Clone, Debug)]
pub struct ControlStrategy {
    level: u32,
    assignments: BTreeMap<usize, PolytopeSet>,
}

impl ControlStrategy {
    pub fn from_assignments(level: u32, assignments: BTreeMap<usize, PolytopeSet>) -> Self {
        let assignments = assignments
            .into_iter()
            .filter(|(_, set)| !set.is_empty())
            .collect();
        ControlStrategy { level, assignments }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn assignment(&self, state_id: usize) -> Option<&PolytopeSet> {
        self.assignments.get(&state_id)
    }

    /// Ids of states with a non-empty assignment, ascending.
    pub fn controlled_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignments.keys().copied()
    }

    pub fn controlled_count(&self) -> usize {
        self.assignments.len()
    }

    /// Replaces one assignment (used to build deliberately corrupted
    /// strategies in negative tests).
    pub fn set_assignment(&mut self, state_id: usize, set: PolytopeSet) {
        if set.is_empty() {
            self.assignments.remove(&state_id);
        } else {
            self.assignments.insert(state_id, set);
        }
    }
}

/// Synthesizes the symbolic strategy: per state, keep every connected
/// component of the input graph whose destination union fits inside the
/// spec successors (containment up to measure zero), and assign the
/// union of the kept components' input sets.
pub fn synthesize(sys: &PWASystem, a: &SymbolicSystem, spec: &SpecAutomaton) -> ControlStrategy {
    let mut assignments = BTreeMap::new();
    for state in a.states() {
        if spec.position_of_mode(state.mode).is_none() {
            continue; // cell outside the spec region: empty assignment
        }
        let post = post_q(sys, a, spec, state.id);
        let graph = build_input_graph(a, state.id);
        let mut kept: Vec<Polytope> = Vec::new();
        for component in connected_components(&graph) {
            let dst_cells: Vec<Polytope> = component
                .iter()
                .map(|&n| a.states()[graph.dsts[n]].cell.clone())
                .collect();
            let destinations = PolytopeSet::new(sys.state_dim(), dst_cells);
            if post.contains_set_up_to_null(&destinations) {
                kept.extend(component.iter().map(|&n| graph.nodes[n].clone()));
            }
        }
        if !kept.is_empty() {
            assignments.insert(state.id, PolytopeSet::new(sys.input_dim(), kept));
        }
    }
    ControlStrategy::from_assignments(a.level(), assignments)
}

/// The abstraction restricted to transitions whose input set is covered
/// by the source state's assignment.
#[derive(Clone, Debug)]
pub struct ControllerSystem {
    pub level: u32,
    pub states: Vec<SymbolicState>,
    pub transitions: Vec<SymbolicTransition>,
}

/// Restriction of the transition relation to controlled moves. A
/// transition survives when its input set appears in the source
/// assignment (assignments are unions of outgoing input sets, and sets
/// in different components are disjoint, so part identity is exact
/// containment here).
pub fn controller_system(a: &SymbolicSystem, strategy: &ControlStrategy) -> ControllerSystem {
    let transitions: Vec<SymbolicTransition> = a
        .transitions()
        .iter()
        .filter(|tr| {
            strategy.assignment(tr.src).is_some_and(|set| {
                set.parts().iter().any(|part| part.same_set(&tr.input_set))
            })
        })
        .cloned()
        .collect();
    ControllerSystem {
        level: a.level(),
        states: a.states().to_vec(),
        transitions,
    }
}

/// Upper bound on the simulation distance from the synthesized
/// controller to the maximal enforcing controller: the granularity of
/// the abstraction the strategy was derived from.
pub fn controller_bound(a: &SymbolicSystem) -> Scalar {
    gran(a)
}

/// Why a closed-loop run stopped before its horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    None,
    /// The successor left the analysis region.
    ExitedRegion,
    /// The run entered a cell with an empty assignment.
    NoAssignment,
    /// No spec run is consistent with the trajectory prefix.
    WitnessEmpty,
}

/// A closed-loop run with its surviving spec-run witness: `witness[t]`
/// holds the spec states reachable along some spec run consistent with
/// the first `t+1` trajectory states. States outside the region carry no
/// witness entry.
#[derive(Clone, Debug)]
pub struct ClosedLoopRun {
    pub trajectory: Trajectory,
    pub witness: Vec<Vec<usize>>,
    pub truncation: Truncation,
}

impl ClosedLoopRun {
    /// True when every in-region step kept at least one consistent spec
    /// run.
    pub fn witness_never_empty(&self) -> bool {
        self.witness.iter().all(|w| !w.is_empty())
    }
}

/// Simulates the closed loop from `x0`, sampling inputs from the current
/// cell's assignment (lowest-id containing cell with a non-empty
/// assignment) and tracking the set of spec states consistent with the
/// run so far by subset construction.
pub fn simulate_closed_loop(
    sys: &PWASystem,
    a: &SymbolicSystem,
    strategy: &ControlStrategy,
    spec: &SpecAutomaton,
    x0: &[Scalar],
    horizon: u32,
    selector_seed: u64,
) -> Result<ClosedLoopRun> {
    if !sys.region().contains(x0) {
        return Err(Error::OutsideRegion);
    }
    if !a
        .states_containing(x0)
        .into_iter()
        .any(|id| strategy.assignment(id).is_some())
    {
        return Err(Error::NoAdmissibleInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(selector_seed);
    let membership = |x: &[Scalar]| -> Vec<usize> {
        (0..spec.mode_indices.len())
            .filter(|&q| sys.restricted_guard(spec.mode_indices[q]).contains(x))
            .collect()
    };
    let mut states: Vec<Point> = vec![x0.to_vec()];
    let mut inputs: Vec<Point> = Vec::new();
    let mut witness = vec![membership(x0)];
    let mut truncation = Truncation::None;
    let mut exited = false;
    if witness[0].is_empty() {
        truncation = Truncation::WitnessEmpty;
    }
    while truncation == Truncation::None && (inputs.len() as u32) < horizon {
        let x = states.last().unwrap().clone();
        let cell = a
            .states_containing(&x)
            .into_iter()
            .find(|&id| strategy.assignment(id).is_some());
        let Some(cell) = cell else {
            truncation = Truncation::NoAssignment;
            break;
        };
        let u = sample_in_set(strategy.assignment(cell).unwrap(), &mut rng);
        let next = sys.step(&x, &u)?;
        inputs.push(u);
        if !sys.region().contains(&next) {
            states.push(next);
            exited = true;
            truncation = Truncation::ExitedRegion;
            break;
        }
        let prev = witness.last().unwrap();
        let mut next_witness: Vec<usize> = (0..spec.mode_indices.len())
            .filter(|&q2| {
                sys.restricted_guard(spec.mode_indices[q2]).contains(&next)
                    && prev.iter().any(|&q| spec.edges.contains(&(q, q2)))
            })
            .collect();
        next_witness.dedup();
        states.push(next);
        let empty = next_witness.is_empty();
        witness.push(next_witness);
        if empty {
            truncation = Truncation::WitnessEmpty;
            break;
        }
    }
    Ok(ClosedLoopRun {
        trajectory: Trajectory {
            states,
            inputs,
            exited,
        },
        witness,
        truncation,
    })
}

/// First violating run found by the enforcement check.
#[derive(Clone, Debug)]
pub struct EnforcementViolation {
    pub trial: u64,
    pub x0: Point,
    pub run: ClosedLoopRun,
}

/// Outcome of randomized enforcement checking.
#[derive(Clone, Debug)]
pub struct EnforcementVerdict {
    pub trials: u64,
    pub violations: u64,
    pub truncated: u64,
    pub first_violation: Option<EnforcementViolation>,
    /// Set when no run could be attempted (zero trials or an empty
    /// controlled set); a pass in that case is vacuous.
    pub vacuous: bool,
}

impl EnforcementVerdict {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs `trials` closed-loop simulations from random controlled initial
/// states with seeded random input selectors. A trial violates the
/// specification when some prefix of its run admits no consistent spec
/// run; runs truncated by region exit or missing assignments count as
/// truncated, not as violations.
pub fn check_enforcement(
    sys: &PWASystem,
    a: &SymbolicSystem,
    strategy: &ControlStrategy,
    spec: &SpecAutomaton,
    trials: u64,
    horizon: u32,
    seed: u64,
) -> EnforcementVerdict {
    let controlled: Vec<usize> = strategy.controlled_states().collect();
    if trials == 0 || controlled.is_empty() {
        return EnforcementVerdict {
            trials,
            violations: 0,
            truncated: 0,
            first_violation: None,
            vacuous: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut truncated = 0;
    let mut first_violation = None;
    for trial in 0..trials {
        let state_id = controlled[(rng.next_u64() % controlled.len() as u64) as usize];
        let x0 = crate::sample::sample_in_polytope(&a.states()[state_id].cell, &mut rng);
        let run_seed = rng.next_u64();
        let run = simulate_closed_loop(sys, a, strategy, spec, &x0, horizon, run_seed)
            .expect("controlled initial states admit inputs");
        if !run.witness_never_empty() {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(EnforcementViolation { trial, x0, run });
            }
        } else if run.truncation != Truncation::None {
            truncated += 1;
        }
    }
    EnforcementVerdict {
        trials,
        violations,
        truncated,
        first_violation,
        vacuous: false,
    }
}

#[cfg(test)]
mod tests;
