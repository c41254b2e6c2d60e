//! Set difference by sequential halfspace slicing, and the union
//! operations (containment, volume) built from it.

use crate::scalar::{zero, Scalar};

use super::{Polytope, PolytopeSet};

/// Convex decomposition of `cl(p1 \ p2)`.
///
/// For each halfspace of `p2` in canonical order, the slice of `p1`
/// beyond it (intersected with the not-yet-sliced remainder) becomes one
/// part. Parts have pairwise disjoint interiors, their union is the
/// closed difference up to a measure-zero set, and only full-dimensional
/// parts are kept, so `set_difference(p, p)` is empty.
pub fn set_difference(p1: &Polytope, p2: &Polytope) -> PolytopeSet {
    assert_eq!(p1.dim(), p2.dim(), "set_difference dimension mismatch");
    let dim = p1.dim();
    if p1.is_empty() {
        return PolytopeSet::empty(dim);
    }
    if p2.is_empty() {
        return PolytopeSet::new(dim, vec![p1.clone()]);
    }
    let mut parts = Vec::new();
    let mut remaining = p1.clone();
    for hs in p2.halfspaces() {
        if remaining.is_empty() {
            break;
        }
        let piece = remaining.intersect_halfspace(&hs.flipped());
        if piece.has_interior() {
            parts.push(piece);
        }
        remaining = remaining.intersect_halfspace(hs);
    }
    PolytopeSet::new(dim, parts)
}

/// Exact volume of a union of possibly overlapping polytopes, computed by
/// sequential disjointification.
pub fn union_volume(parts: &[Polytope]) -> Scalar {
    let mut total = zero();
    let mut seen: Vec<Polytope> = Vec::new();
    for p in parts {
        if p.is_empty() {
            continue;
        }
        let mut fresh = PolytopeSet::new(p.dim(), vec![p.clone()]);
        for q in &seen {
            fresh = fresh.subtract_polytope(q);
            if fresh.is_empty() {
                break;
            }
        }
        for piece in fresh.parts() {
            total += piece.volume();
        }
        seen.push(p.clone());
    }
    total
}

impl PolytopeSet {
    /// Removes one polytope from every part.
    pub fn subtract_polytope(&self, q: &Polytope) -> PolytopeSet {
        let mut out = PolytopeSet::empty(self.dim());
        for part in self.parts() {
            for piece in set_difference(part, q).parts() {
                out.push(piece.clone());
            }
        }
        out
    }

    /// Removes a whole union from every part.
    pub fn subtract(&self, other: &PolytopeSet) -> PolytopeSet {
        let mut current = self.clone();
        for q in other.parts() {
            if current.is_empty() {
                break;
            }
            current = current.subtract_polytope(q);
        }
        current
    }

    /// Whether `inner` is contained in `self` up to a measure-zero set.
    pub fn contains_set_up_to_null(&self, inner: &PolytopeSet) -> bool {
        inner.subtract(self).is_empty()
    }

    /// Point-set equality up to measure zero (mutual containment).
    pub fn same_set_up_to_null(&self, other: &PolytopeSet) -> bool {
        self.contains_set_up_to_null(other) && other.contains_set_up_to_null(self)
    }

    /// Exact volume of the union (overlap-safe).
    pub fn volume(&self) -> Scalar {
        union_volume(self.parts())
    }
}
