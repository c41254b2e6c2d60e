//! Reference systems used across tests, the acceptance suite and the
//! benchmarks. Each builder returns a validated system; the names
//! describe the dynamics.

use crate::abstraction::SymbolicSystem;
use crate::geometry::Polytope;
use crate::linalg::Matrix;
use crate::pwa::{Mode, PWASystem};
use crate::scalar::{int, ratio, zero, Scalar};
use crate::synthesis::SpecAutomaton;

fn interval(a: Scalar, b: Scalar) -> Polytope {
    Polytope::from_box(&[a], &[b])
}

fn rect(x0: Scalar, x1: Scalar, y0: Scalar, y1: Scalar) -> Polytope {
    Polytope::from_box(&[x0, y0], &[x1, y1])
}

/// 1D controlled shift `x' = x + u` with `u in [0, 1]` on the region
/// `[0, 1]`, single mode. Every left cell can reach several cells with
/// overlapping input sets, so refinement keeps working forever; the
/// right cell is non-spurious from level 1 on.
pub fn slide1d() -> PWASystem {
    let mode = Mode {
        a: Matrix::identity(1),
        b: Matrix::new(vec![vec![int(1)]]),
        f: vec![zero()],
        guard: interval(zero(), int(1)),
    };
    PWASystem::new(
        vec![mode],
        interval(zero(), int(1)),
        interval(zero(), int(1)),
    )
    .unwrap()
}

/// 1D controlled identity `x' = x` (the input has no effect) on `[0, 1]`,
/// single mode, `u in [0, 1]`. Reaches a fixed point at level 1.
pub fn identity1d() -> PWASystem {
    let mode = Mode {
        a: Matrix::identity(1),
        b: Matrix::new(vec![vec![zero()]]),
        f: vec![zero()],
        guard: interval(zero(), int(1)),
    };
    PWASystem::new(
        vec![mode],
        interval(zero(), int(1)),
        interval(zero(), int(1)),
    )
    .unwrap()
}

/// 2D autonomous identity on `[0, 1] x [0, 1/2]`, one mode, `U = {0}`.
/// The level-1 model has two square cells with one self-loop each and is
/// exactly bisimilar to the embedded system.
pub fn identity2d() -> PWASystem {
    let guard = rect(zero(), int(1), zero(), ratio(1, 2));
    let mode = Mode {
        a: Matrix::identity(2),
        b: Matrix::new(vec![vec![zero()], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: guard.clone(),
    };
    PWASystem::new(vec![mode], Polytope::singleton(&[zero()]), guard).unwrap()
}

/// 2D two-mode benchmark on `[0, 2] x [0, 1/4]`: mode 1 translates right
/// by the input (`x' = x + (u, 0)`, `u in [0, 1]`), mode 2 is the
/// identity. Mode 1 cells stay spurious at every level, so granularity
/// decays exactly by the contraction rate per level.
pub fn translate2d() -> PWASystem {
    let quarter = ratio(1, 4);
    let mode1 = Mode {
        a: Matrix::identity(2),
        b: Matrix::new(vec![vec![int(1)], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: rect(zero(), int(1), zero(), quarter.clone()),
    };
    let mode2 = Mode {
        a: Matrix::identity(2),
        b: Matrix::new(vec![vec![zero()], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: rect(int(1), int(2), zero(), quarter.clone()),
    };
    PWASystem::new(
        vec![mode1, mode2],
        interval(zero(), int(1)),
        rect(zero(), int(2), zero(), quarter),
    )
    .unwrap()
}

/// Like [`translate2d`] but with inputs `u in [1/4, 1]`: mode 1 must move
/// right, so cells near the mode boundary can be steered into mode 2
/// while the rest of mode 1 admits no spec-conforming component.
pub fn jump2d() -> PWASystem {
    let quarter = ratio(1, 4);
    let mode1 = Mode {
        a: Matrix::identity(2),
        b: Matrix::new(vec![vec![int(1)], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: rect(zero(), int(1), zero(), quarter.clone()),
    };
    let mode2 = Mode {
        a: Matrix::identity(2),
        b: Matrix::new(vec![vec![zero()], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: rect(int(1), int(2), zero(), quarter.clone()),
    };
    PWASystem::new(
        vec![mode1, mode2],
        interval(quarter.clone(), int(1)),
        rect(zero(), int(2), zero(), quarter),
    )
    .unwrap()
}

/// Specification for [`jump2d`]: mode-1 states must move to mode 2 in one
/// step and stay there (`1 -> 2`, `2 -> 2`).
pub fn jump2d_spec(sys: &PWASystem) -> SpecAutomaton {
    SpecAutomaton::new(vec![0, 1], vec![(0, 1), (1, 1)], sys.modes().len()).unwrap()
}

/// 1D autonomous shift: mode 1 on `[0, 1]` jumps by `+1`, mode 2 on
/// `[1, 2]` holds (`U = {0}`). Cells align with the grid, so level 1 is
/// already a fixed point with granularity zero.
pub fn shift1d() -> PWASystem {
    let mode1 = Mode {
        a: Matrix::identity(1),
        b: Matrix::new(vec![vec![zero()]]),
        f: vec![int(1)],
        guard: interval(zero(), int(1)),
    };
    let mode2 = Mode {
        a: Matrix::identity(1),
        b: Matrix::new(vec![vec![zero()]]),
        f: vec![zero()],
        guard: interval(int(1), int(2)),
    };
    PWASystem::new(
        vec![mode1, mode2],
        Polytope::singleton(&[zero()]),
        interval(zero(), int(2)),
    )
    .unwrap()
}

/// Specification for [`shift1d`]: only mode 2 is allowed (`2 -> 2`), so
/// mode-1 cells get an empty assignment.
pub fn shift1d_spec(sys: &PWASystem) -> SpecAutomaton {
    SpecAutomaton::new(vec![1], vec![(0, 0)], sys.modes().len()).unwrap()
}

/// 2D single-mode system `x' = (x1 + u, 4 x2)` on `[0, 1]^2` with
/// `u in [0, 1]`. States with `x2 > 1/4` have no admissible successor
/// inside the region, so the refinement's covering step must produce
/// fresh remainder cells.
pub fn stretch2d() -> PWASystem {
    let guard = rect(zero(), int(1), zero(), int(1));
    let mode = Mode {
        a: Matrix::new(vec![vec![int(1), zero()], vec![zero(), int(4)]]),
        b: Matrix::new(vec![vec![int(1)], vec![zero()]]),
        f: vec![zero(), zero()],
        guard: guard.clone(),
    };
    PWASystem::new(vec![mode], interval(zero(), int(1)), guard).unwrap()
}

/// Hand-built symbolic state with four outgoing input sets arranged in
/// two overlap pairs: `V1` meets `V3`, `V2` meets `V4`, all other pairs
/// are disjoint. The destinations of the first pair lie inside the spec
/// successors, those of the second do not, so the synthesized assignment
/// is exactly `V1 ∪ V3`.
///
/// Returns the carrier system, the symbolic model and the specification.
pub fn component_fan() -> (PWASystem, SymbolicSystem, SpecAutomaton) {
    use crate::abstraction::{SymbolicState, SymbolicTransition};

    let hold = |guard: Polytope| Mode {
        a: Matrix::identity(1),
        b: Matrix::new(vec![vec![zero()]]),
        f: vec![zero()],
        guard,
    };
    let sys = PWASystem::new(
        vec![
            hold(interval(zero(), int(1))),
            hold(interval(int(1), int(2))),
            hold(interval(int(2), int(3))),
            hold(interval(int(3), int(4))),
        ],
        interval(zero(), int(1)),
        interval(zero(), int(4)),
    )
    .unwrap();

    let cell = |a: Scalar, b: Scalar, id: usize, mode: usize| SymbolicState {
        id,
        cell: interval(a, b),
        mode,
        spurious: false,
    };
    let states = vec![
        cell(zero(), int(1), 0, 0),
        cell(int(1), ratio(3, 2), 1, 1),
        cell(int(2), int(3), 2, 2),
        cell(ratio(3, 2), int(2), 3, 1),
        cell(int(3), int(4), 4, 3),
    ];
    let v = |a: i64, b: i64| interval(ratio(a, 20), ratio(b, 20));
    let transitions = vec![
        SymbolicTransition { src: 0, dst: 1, input_set: v(0, 8) },
        SymbolicTransition { src: 0, dst: 2, input_set: v(12, 16) },
        SymbolicTransition { src: 0, dst: 3, input_set: v(6, 10) },
        SymbolicTransition { src: 0, dst: 4, input_set: v(15, 20) },
    ];
    let a = SymbolicSystem::from_parts(1, states, transitions);
    // spec states cover modes 1..3; from the first, both successors are
    // allowed; self-loops keep the automaton non-blocking
    let spec = SpecAutomaton::new(
        vec![0, 1, 2],
        vec![(0, 1), (0, 2), (1, 1), (2, 2)],
        sys.modes().len(),
    )
    .unwrap();
    (sys, a, spec)
}
