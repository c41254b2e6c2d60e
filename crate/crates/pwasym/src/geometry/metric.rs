//! The polytope pseudo-metric: diameter of the symmetric difference,
//! evaluated through the vertex formula.

use crate::error::{Error, Result};
use crate::linalg::{inf_dist, Point};
use crate::scalar::{zero, Scalar};

use super::PolytopeSet;

/// Pseudo-metric distance between two polytopic sets.
///
/// Zero exactly when the sets are equal as point sets (up to closure
/// boundaries); otherwise the diameter of the symmetric difference is
/// evaluated by the vertex formula: the largest infinity-norm distance
/// over all vertices of all parts of both arguments.
pub fn dp_distance(a: &PolytopeSet, b: &PolytopeSet) -> Result<Scalar> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if sets_equal(a, b) {
        return Ok(zero());
    }
    let vertices: Vec<&Point> = a
        .parts()
        .iter()
        .chain(b.parts())
        .flat_map(|p| p.vertices())
        .collect();
    let mut best = zero();
    for (i, v) in vertices.iter().enumerate() {
        for w in &vertices[i + 1..] {
            let d = inf_dist(v, w);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

fn sets_equal(a: &PolytopeSet, b: &PolytopeSet) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    if a.is_empty() != b.is_empty() {
        return false;
    }
    // fast path: single convex parts compare by vertex set
    if a.parts().len() == 1 && b.parts().len() == 1 {
        return a.parts()[0].same_set(&b.parts()[0]);
    }
    // cheap reject: different bounding boxes cannot be equal
    if a.bbox() != b.bbox() {
        return false;
    }
    a.same_set_up_to_null(b)
}
