//! The refinement sequence of symbolic models.
//!
//! Level 1 grid-splits the restricted guards; each further level keeps
//! the non-spurious cells, splits the reach slices of spurious cells with
//! a contracting grid, and covers whatever remains of the region with
//! fresh convex parts. A state is spurious when two outgoing transitions
//! to distinct cells carry overlapping input sets: no deterministic run
//! of the underlying system can match both. Granularity (the largest
//! spurious-cell diameter) bounds the simulation distance from the
//! embedded system to the symbolic model and contracts by the splitting
//! rate per level.
//!
//! A transition from one cell to another exists when the set of source
//! states that can reach the destination is full-dimensional; the kernel
//! stores closed cells, so witnesses confined to shared boundaries are
//! artifacts of the closure and are dropped.

use std::collections::BTreeSet;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{Halfspace, Polytope, PolytopeSet};
use crate::linalg::{add, dot, Point};
use crate::pwa::PWASystem;
use crate::sample::sample_in_polytope;
use crate::scalar::{zero, Scalar};
use crate::splitting::{make_policy, SplitPolicy};

/// One symbolic state: a polytopic cell inside a single mode's guard.
/// `spurious` records whether the state produces spurious transitions;
/// the output map sends spurious cells to themselves and all others to
/// the empty set.
#[derive(Clone, Debug)]
pub struct SymbolicState {
    pub id: usize,
    pub cell: Polytope,
    pub mode: usize,
    pub spurious: bool,
}

impl SymbolicState {
    /// Output value: the cell itself for spurious states, empty otherwise.
    pub fn h_value(&self) -> Option<&Polytope> {
        self.spurious.then_some(&self.cell)
    }

    /// Output value as a polytopic set (for pseudo-metric arguments).
    pub fn output_set(&self) -> PolytopeSet {
        match self.h_value() {
            Some(cell) => PolytopeSet::from_polytope(cell.clone()),
            None => PolytopeSet::empty(self.cell.dim()),
        }
    }
}

/// A transition labeled with its admissible input set
/// `V = {u | some x in the source cell reaches the destination with u}`.
#[derive(Clone, Debug)]
pub struct SymbolicTransition {
    pub src: usize,
    pub dst: usize,
    pub input_set: Polytope,
}

/// A finite symbolic model of the PWA system at one refinement level.
#[derive(Clone, Debug)]
pub struct SymbolicSystem {
    level: u32,
    states: Vec<SymbolicState>,
    transitions: Vec<SymbolicTransition>,
    input_alphabet: Vec<Polytope>,
    outgoing: Vec<Vec<usize>>,
}

impl SymbolicSystem {
    /// Assembles a system from states and transitions, recomputing the
    /// outgoing index, the spuriousness flags and the input alphabet.
    pub fn from_parts(
        level: u32,
        mut states: Vec<SymbolicState>,
        transitions: Vec<SymbolicTransition>,
    ) -> SymbolicSystem {
        for (i, s) in states.iter().enumerate() {
            assert_eq!(s.id, i, "state ids must be their indices");
        }
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
        for (t, tr) in transitions.iter().enumerate() {
            outgoing[tr.src].push(t);
        }
        for s in &mut states {
            let outs: Vec<&SymbolicTransition> =
                outgoing[s.id].iter().map(|&t| &transitions[t]).collect();
            s.spurious = spurious_from_outgoing(&outs);
        }
        let mut input_alphabet: Vec<Polytope> = Vec::new();
        for tr in &transitions {
            if !input_alphabet.iter().any(|v| v.same_set(&tr.input_set)) {
                input_alphabet.push(tr.input_set.clone());
            }
        }
        SymbolicSystem {
            level,
            states,
            transitions,
            input_alphabet,
            outgoing,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn states(&self) -> &[SymbolicState] {
        &self.states
    }

    pub fn transitions(&self) -> &[SymbolicTransition] {
        &self.transitions
    }

    /// Distinct input-set polytopes over all transitions.
    pub fn input_alphabet(&self) -> &[Polytope] {
        &self.input_alphabet
    }

    /// Indices into `transitions` of the given state's outgoing edges.
    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.outgoing[state]
    }

    /// States whose cells contain the point.
    pub fn states_containing(&self, x: &[Scalar]) -> Vec<usize> {
        self.states
            .iter()
            .filter(|s| s.cell.contains(x))
            .map(|s| s.id)
            .collect()
    }

    /// Granularity: the largest diameter among spurious cells.
    pub fn gran(&self) -> Scalar {
        gran(self)
    }
}

/// Summary of one refinement level. The simulation bound equals the
/// granularity: the embedded system is simulated by the symbolic model
/// within that output distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsReport {
    pub level: u32,
    pub gran: Scalar,
    pub sim_bound: Scalar,
    pub state_count: usize,
    pub transition_count: usize,
    pub spurious_state_count: usize,
    pub fixed_point: bool,
}

pub fn metrics(a: &SymbolicSystem) -> MetricsReport {
    let gran = gran(a);
    MetricsReport {
        level: a.level,
        sim_bound: gran.clone(),
        gran,
        state_count: a.states.len(),
        transition_count: a.transitions.len(),
        spurious_state_count: a.states.iter().filter(|s| s.spurious).count(),
        fixed_point: false,
    }
}

/// Constraint system for `{(x, u) : x in src_cell, u in U,
/// A x + B u + f in dst_cell}` in (state, input) space.
fn lifted_constraints(
    sys: &PWASystem,
    src_cell: &Polytope,
    mode: usize,
    dst_cell: &Polytope,
) -> Vec<Halfspace> {
    let n = sys.state_dim();
    let m = sys.input_dim();
    let dynamics = &sys.modes()[mode];
    let mut out = Vec::with_capacity(
        src_cell.halfspaces().len() + sys.input().halfspaces().len() + dst_cell.halfspaces().len(),
    );
    for hs in src_cell.halfspaces() {
        let mut normal = hs.normal.clone();
        normal.extend(std::iter::repeat_n(zero(), m));
        out.push(Halfspace::new(normal, hs.offset.clone()));
    }
    for hs in sys.input().halfspaces() {
        let mut normal = vec![zero(); n];
        normal.extend(hs.normal.iter().cloned());
        out.push(Halfspace::new(normal, hs.offset.clone()));
    }
    for hs in dst_cell.halfspaces() {
        // g . (A x + B u + f) <= h
        let mut normal = dynamics.a.vec_mul(&hs.normal);
        normal.extend(dynamics.b.vec_mul(&hs.normal));
        let offset = &hs.offset - dot(&hs.normal, &dynamics.f);
        out.push(Halfspace::new(normal, offset));
    }
    out
}

/// Input set of a transition: the exact shadow of the lifted set onto the
/// input coordinates. Empty when the destination is unreachable.
pub fn transition_input_set(
    sys: &PWASystem,
    src_cell: &Polytope,
    mode: usize,
    dst_cell: &Polytope,
) -> Polytope {
    let n = sys.state_dim();
    let m = sys.input_dim();
    let lifted =
        Polytope::canonicalize_bounded(n + m, lifted_constraints(sys, src_cell, mode, dst_cell));
    if lifted.is_empty() {
        return Polytope::empty(m);
    }
    let kept: Vec<usize> = (n..n + m).collect();
    lifted.project(&kept)
}

/// Reach slice: the source-cell states that can reach `dst_cell` under
/// some admissible input (the shadow of the lifted set onto the state
/// coordinates). The refinement step applies it to spurious states.
pub fn compute_z(sys: &PWASystem, state: &SymbolicState, dst_cell: &Polytope) -> Polytope {
    witness_region(sys, &state.cell, state.mode, dst_cell)
}

fn witness_region(
    sys: &PWASystem,
    src_cell: &Polytope,
    mode: usize,
    dst_cell: &Polytope,
) -> Polytope {
    let n = sys.state_dim();
    let m = sys.input_dim();
    let lifted =
        Polytope::canonicalize_bounded(n + m, lifted_constraints(sys, src_cell, mode, dst_cell));
    if lifted.is_empty() {
        return Polytope::empty(n);
    }
    let kept: Vec<usize> = (0..n).collect();
    lifted.project(&kept)
}

/// Cheap transition-existence test: the witness region must be
/// full-dimensional. Runs raw elimination (no canonicalization) plus one
/// strict-feasibility LP.
fn witness_has_interior(
    sys: &PWASystem,
    src_cell: &Polytope,
    mode: usize,
    dst_cell: &Polytope,
) -> bool {
    let n = sys.state_dim();
    let m = sys.input_dim();
    let lifted = lifted_constraints(sys, src_cell, mode, dst_cell);
    let drop: Vec<usize> = (n..n + m).collect();
    match crate::geometry::project::eliminate_columns_raw(&lifted, &drop) {
        Some(system) => crate::lp::strictly_feasible(&system, n),
        None => false,
    }
}

/// Whether a state's outgoing transitions contain a spurious pair: two
/// transitions to distinct destinations with intersecting input sets.
/// Zero or one transition is vacuously non-spurious.
pub fn detect_spurious(outgoing: &[&SymbolicTransition]) -> bool {
    spurious_from_outgoing(outgoing)
}

fn spurious_from_outgoing(outgoing: &[&SymbolicTransition]) -> bool {
    for (i, a) in outgoing.iter().enumerate() {
        for b in &outgoing[i + 1..] {
            if a.dst != b.dst && a.input_set.intersects(&b.input_set) {
                return true;
            }
        }
    }
    false
}

/// Largest diameter among spurious cells; zero when none are spurious.
pub fn gran(a: &SymbolicSystem) -> Scalar {
    a.states
        .iter()
        .filter(|s| s.spurious)
        .map(|s| s.cell.diameter())
        .max()
        .unwrap_or_else(zero)
}

/// Bounding box of the image of `cell x U` under the mode dynamics;
/// exact because the image of a vertex pair set spans the hull.
fn image_bbox(sys: &PWASystem, cell: &Polytope, mode: usize) -> (Point, Point) {
    let dynamics = &sys.modes()[mode];
    let mut lo: Option<Point> = None;
    let mut hi: Option<Point> = None;
    for v in cell.vertices() {
        let ax = add(&dynamics.a.mul_vec(v), &dynamics.f);
        for w in sys.input().vertices() {
            let y = add(&ax, &dynamics.b.mul_vec(w));
            match (&mut lo, &mut hi) {
                (Some(l), Some(h)) => {
                    for j in 0..y.len() {
                        if y[j] < l[j] {
                            l[j] = y[j].clone();
                        }
                        if y[j] > h[j] {
                            h[j] = y[j].clone();
                        }
                    }
                }
                _ => {
                    lo = Some(y.clone());
                    hi = Some(y);
                }
            }
        }
    }
    (lo.unwrap(), hi.unwrap())
}

fn boxes_overlap(a: &(Point, Point), b: &(Point, Point)) -> bool {
    let ((alo, ahi), (blo, bhi)) = (a, b);
    alo.iter()
        .zip(ahi.iter())
        .zip(blo.iter().zip(bhi.iter()))
        .all(|((al, ah), (bl, bh))| al <= bh && bl <= ah)
}

/// Builds states, transitions and flags from a list of candidate cells.
/// Cells are deduplicated by point set and mode, keeping first
/// occurrences, so the construction is deterministic in the input order.
fn assemble(sys: &PWASystem, level: u32, cells: Vec<(Polytope, usize)>) -> SymbolicSystem {
    let mut states: Vec<SymbolicState> = Vec::new();
    let mut seen: BTreeSet<(usize, Vec<Point>)> = BTreeSet::new();
    for (cell, mode) in cells {
        let key = (mode, cell.vertices().to_vec());
        if seen.insert(key) {
            states.push(SymbolicState {
                id: states.len(),
                cell,
                mode,
                spurious: false,
            });
        }
    }
    let image_boxes: Vec<(Point, Point)> = states
        .iter()
        .map(|s| image_bbox(sys, &s.cell, s.mode))
        .collect();
    let cell_boxes: Vec<(Point, Point)> = states
        .iter()
        .map(|s| s.cell.bbox().expect("cells are non-empty"))
        .collect();
    let mut transitions = Vec::new();
    for src in &states {
        for dst in &states {
            if !boxes_overlap(&image_boxes[src.id], &cell_boxes[dst.id]) {
                continue;
            }
            if !witness_has_interior(sys, &src.cell, src.mode, &dst.cell) {
                continue;
            }
            let v = transition_input_set(sys, &src.cell, src.mode, &dst.cell);
            debug_assert!(!v.is_empty(), "reachable destination has inputs");
            transitions.push(SymbolicTransition {
                src: src.id,
                dst: dst.id,
                input_set: v,
            });
        }
    }
    SymbolicSystem::from_parts(level, states, transitions)
}

/// First symbolic model: grid-split of the restricted guards, with the
/// grid scale taken from the whole guard collection.
pub fn build_a1(sys: &PWASystem, lambda: Scalar) -> Result<SymbolicSystem> {
    let policy = guard_policy(sys, lambda)?;
    let mut cells = Vec::new();
    for (mode, guard) in sys.restricted_guards().iter().enumerate() {
        if guard.is_empty() {
            continue;
        }
        for piece in policy.split(guard) {
            cells.push((piece, mode));
        }
    }
    Ok(assemble(sys, 1, cells))
}

fn guard_policy(sys: &PWASystem, lambda: Scalar) -> Result<SplitPolicy> {
    let guards: Vec<Polytope> = sys
        .restricted_guards()
        .iter()
        .filter(|g| !g.is_empty())
        .cloned()
        .collect();
    make_policy(&guards, lambda)
}

/// One refinement step.
///
/// Keeps non-spurious cells, splits the reach slices of every spurious
/// cell toward every state (with a locally contracted grid so part
/// diameters shrink by the contraction rate relative to the slice), and
/// decomposes the uncovered remainder of the region into fresh convex
/// states clipped to the guards.
pub fn refine(sys: &PWASystem, a: &SymbolicSystem, lambda: Scalar) -> Result<SymbolicSystem> {
    let policy = guard_policy(sys, lambda)?;
    let mut cells: Vec<(Polytope, usize)> = Vec::new();
    for s in &a.states {
        if !s.spurious {
            cells.push((s.cell.clone(), s.mode));
        }
    }
    for s in &a.states {
        if !s.spurious {
            continue;
        }
        let ibox = image_bbox(sys, &s.cell, s.mode);
        for d in &a.states {
            let dbox = d.cell.bbox().expect("cells are non-empty");
            if !boxes_overlap(&ibox, &dbox) {
                continue;
            }
            let z = witness_region(sys, &s.cell, s.mode, &d.cell);
            if !z.has_interior() {
                continue;
            }
            for piece in policy.split_contracting(&z) {
                cells.push((piece, s.mode));
            }
        }
    }
    // cover what the kept and split cells leave of the region
    let mut remaining = PolytopeSet::from_polytope(sys.region().clone());
    for (cell, _) in &cells {
        if remaining.is_empty() {
            break;
        }
        remaining = remaining.subtract_polytope(cell);
    }
    for part in remaining.parts() {
        for (mode, guard) in sys.restricted_guards().iter().enumerate() {
            if guard.is_empty() {
                continue;
            }
            let piece = part.intersect(guard);
            if piece.has_interior() {
                cells.push((piece, mode));
            }
        }
    }
    Ok(assemble(sys, a.level + 1, cells))
}

/// Point-set equality of state multisets; transitions and labels are
/// recomputed deterministically from the states, so this is system
/// equality.
pub fn same_abstraction(a: &SymbolicSystem, b: &SymbolicSystem) -> bool {
    if a.states.len() != b.states.len() {
        return false;
    }
    let key = |sys: &SymbolicSystem| {
        let mut keys: Vec<(usize, Vec<Point>)> = sys
            .states
            .iter()
            .map(|s| (s.mode, s.cell.vertices().to_vec()))
            .collect();
        keys.sort();
        keys
    };
    key(a) == key(b)
}

/// Runs the refinement until a fixed point, a granularity target or the
/// level cap is reached. Returns each level with its metrics; a detected
/// fixed point flags the last report.
pub fn refinement_sequence(
    sys: &PWASystem,
    lambda: Scalar,
    max_level: u32,
    epsilon_target: Option<&Scalar>,
) -> Result<Vec<(SymbolicSystem, MetricsReport)>> {
    assert!(max_level >= 1, "need at least one level");
    let mut out: Vec<(SymbolicSystem, MetricsReport)> = Vec::new();
    let mut current = build_a1(sys, lambda.clone())?;
    loop {
        let mut report = metrics(&current);
        let reached_target = epsilon_target.is_some_and(|eps| report.gran <= *eps);
        if reached_target || report.level >= max_level {
            out.push((current, report));
            return Ok(out);
        }
        let next = refine(sys, &current, lambda.clone())?;
        if same_abstraction(&current, &next) {
            report.fixed_point = true;
            out.push((current, report));
            return Ok(out);
        }
        out.push((current, report));
        current = next;
    }
}

#[derive(Clone, Debug)]
pub enum SimulationVerdict {
    Pass,
    Fail(SimulationFailure),
}

impl SimulationVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SimulationVerdict::Pass)
    }
}

/// First counterexample found by a sampled simulation check.
#[derive(Clone, Debug)]
pub struct SimulationFailure {
    pub state: Point,
    pub input: Option<Point>,
    pub state_id: Option<usize>,
    pub reason: String,
}

/// Sampled check that the symbolic model simulates the embedded system
/// within output distance `epsilon`: every sampled concrete transition
/// from a point must be matched, from every cell containing the point,
/// by a symbolic transition carrying that input into a cell containing
/// the successor; the output distance `d_p({x}, H(cell))` (the cell
/// diameter for spurious cells, zero otherwise) must stay within
/// `epsilon`.
pub fn check_simulation(
    sys: &PWASystem,
    a: &SymbolicSystem,
    epsilon: &Scalar,
    samples: usize,
    seed: u64,
) -> SimulationVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diameters: Vec<Scalar> = a.states.iter().map(|s| s.cell.diameter()).collect();
    for _ in 0..samples {
        let x = sample_in_polytope(sys.region(), &mut rng);
        let u = sample_in_polytope(sys.input(), &mut rng);
        let containing = a.states_containing(&x);
        if containing.is_empty() {
            return SimulationVerdict::Fail(SimulationFailure {
                state: x,
                input: None,
                state_id: None,
                reason: "point not covered by any cell".into(),
            });
        }
        for &c in &containing {
            if a.states[c].spurious && diameters[c] > *epsilon {
                return SimulationVerdict::Fail(SimulationFailure {
                    state: x,
                    input: None,
                    state_id: Some(c),
                    reason: "output distance exceeds epsilon".into(),
                });
            }
        }
        let successor = sys
            .step(&x, &u)
            .expect("sampled state and input are admissible");
        if !sys.region().contains(&successor) {
            continue; // not a transition of the embedded system
        }
        for &c in &containing {
            let matched = a.outgoing[c].iter().any(|&t| {
                let tr = &a.transitions[t];
                tr.input_set.contains(&u) && a.states[tr.dst].cell.contains(&successor)
            });
            if !matched {
                return SimulationVerdict::Fail(SimulationFailure {
                    state: x,
                    input: Some(u),
                    state_id: Some(c),
                    reason: "concrete transition has no symbolic match".into(),
                });
            }
        }
    }
    SimulationVerdict::Pass
}

/// Sampled check of the reverse direction: every symbolic transition
/// must be matched, from every sampled point of its source cell, by a
/// concrete transition into the destination cell (under some admissible
/// input), with the same output-distance requirement. Together with
/// [`check_simulation`] at `epsilon = 0` this samples exact bisimilarity.
pub fn check_reverse_simulation(
    sys: &PWASystem,
    a: &SymbolicSystem,
    epsilon: &Scalar,
    samples: usize,
    seed: u64,
) -> SimulationVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diameters: Vec<Scalar> = a.states.iter().map(|s| s.cell.diameter()).collect();
    if a.states.is_empty() {
        return SimulationVerdict::Pass;
    }
    for _ in 0..samples {
        let sid = (rng.next_u64() % a.states.len() as u64) as usize;
        let state = &a.states[sid];
        if state.spurious && diameters[sid] > *epsilon {
            return SimulationVerdict::Fail(SimulationFailure {
                state: Vec::new(),
                input: None,
                state_id: Some(sid),
                reason: "output distance exceeds epsilon".into(),
            });
        }
        let outs = &a.outgoing[sid];
        if outs.is_empty() {
            continue;
        }
        let tr = &a.transitions[outs[(rng.next_u64() % outs.len() as u64) as usize]];
        let x = sample_in_polytope(&state.cell, &mut rng);
        let mode = &sys.modes()[sys.mode_of(&x).expect("cells lie inside the region")];
        // some admissible input must take x into the destination cell
        let ax = add(&mode.a.mul_vec(&x), &mode.f);
        let mut system: Vec<Halfspace> = sys.input().halfspaces().to_vec();
        for hs in a.states[tr.dst].cell.halfspaces() {
            let normal = mode.b.vec_mul(&hs.normal);
            let offset = &hs.offset - dot(&hs.normal, &ax);
            system.push(Halfspace::new(normal, offset));
        }
        if crate::lp::feasible_point(&system, sys.input_dim()).is_none() {
            return SimulationVerdict::Fail(SimulationFailure {
                state: x,
                input: None,
                state_id: Some(sid),
                reason: "symbolic transition has no concrete match".into(),
            });
        }
    }
    SimulationVerdict::Pass
}
