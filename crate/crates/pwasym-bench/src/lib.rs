//! Shared inputs for the geometry and abstraction benchmarks.

use pwasym::geometry::{Halfspace, Polytope};
use pwasym::scalar::{int, ratio};

/// A hexagon-ish 2D polytope with non-axis-aligned faces.
pub fn hexagon() -> Polytope {
    Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::from_ints(&[1, 0], 4),
            Halfspace::from_ints(&[-1, 0], 0),
            Halfspace::from_ints(&[0, 1], 3),
            Halfspace::from_ints(&[0, -1], 0),
            Halfspace::from_ints(&[2, 3], 14),
            Halfspace::from_ints(&[-3, 2], 4),
            Halfspace::from_ints(&[1, -2], 3),
        ],
    )
    .unwrap()
}

/// A lifted 3D polytope like the (state, input) sets the abstraction
/// projects.
pub fn lifted_block() -> Polytope {
    Polytope::from_halfspaces(
        3,
        vec![
            Halfspace::from_ints(&[1, 0, 0], 2),
            Halfspace::from_ints(&[-1, 0, 0], 0),
            Halfspace::from_ints(&[0, 1, 0], 1),
            Halfspace::from_ints(&[0, -1, 0], 0),
            Halfspace::from_ints(&[0, 0, 1], 1),
            Halfspace::from_ints(&[0, 0, -1], 0),
            Halfspace::from_ints(&[1, 1, 1], 3),
            Halfspace::from_ints(&[-1, 2, -1], 1),
        ],
    )
    .unwrap()
}

pub fn shifted_hexagon() -> Polytope {
    let shift = Polytope::from_box(&[ratio(3, 2), ratio(1, 2)], &[int(5), int(3)]);
    hexagon().intersect(&shift)
}
