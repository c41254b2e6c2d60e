//! Grid splitting policies with a contraction rate.
//!
//! The policy fixes a grid scale `rho` (the smallest diameter over the
//! collection it was created for) and splits a polytope along the integer
//! lattice scaled by `lambda * rho`, anchored at the origin. Cells of the
//! underlying half-open grid are stored as their closures; only
//! full-dimensional intersections become parts, so adjacent cells overlap
//! in measure-zero sets only.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::scalar::{int, one, zero, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPolicy {
    lambda: Scalar,
    rho: Scalar,
}

impl SplitPolicy {
    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn rho(&self) -> &Scalar {
        &self.rho
    }
}

/// Builds the grid policy for a collection: `rho` is the minimum diameter
/// over its members.
pub fn make_policy(collection: &[Polytope], lambda: Scalar) -> Result<SplitPolicy> {
    if lambda <= zero() || lambda >= one() {
        return Err(Error::LambdaOutOfRange);
    }
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut rho: Option<Scalar> = None;
    for p in collection {
        if p.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let d = p.diameter();
        if rho.as_ref().is_none_or(|r| d < *r) {
            rho = Some(d);
        }
    }
    let rho = rho.unwrap();
    if rho.is_zero() {
        // a zero-diameter member makes the grid scale degenerate
        return Err(Error::EmptyCollection);
    }
    Ok(SplitPolicy { lambda, rho })
}

impl SplitPolicy {
    /// Splits `p` along the fixed `lambda * rho` grid. Parts appear in
    /// lattice index order (first axis most significant).
    pub fn split(&self, p: &Polytope) -> Vec<Polytope> {
        let side = &self.lambda * &self.rho;
        grid_split(p, &side)
    }

    /// Splits with a locally contracted scale `min(rho, Diam(p))` so the
    /// contraction property `Diam(part) <= lambda * Diam(p)` holds even
    /// for arguments smaller than the policy's collection members (as the
    /// refinement step needs for derived reach sets).
    pub fn split_contracting(&self, p: &Polytope) -> Vec<Polytope> {
        let d = p.diameter();
        if d.is_zero() {
            return vec![p.clone()];
        }
        let local = if d < self.rho { d } else { self.rho.clone() };
        let side = &self.lambda * &local;
        grid_split(p, &side)
    }
}

fn grid_split(p: &Polytope, side: &Scalar) -> Vec<Polytope> {
    assert!(side.is_positive());
    if p.is_empty() {
        return Vec::new();
    }
    let (lo, hi) = p.bbox().expect("non-empty polytope has a bounding box");
    let dim = p.dim();
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(dim);
    for j in 0..dim {
        let a = (&lo[j] / side)
            .floor()
            .to_integer()
            .to_i64()
            .expect("lattice index fits in i64");
        let b = ((&hi[j] / side).ceil().to_integer() - 1i64)
            .to_i64()
            .expect("lattice index fits in i64")
            .max(a);
        ranges.push((a, b));
    }
    let mut parts = Vec::new();
    let mut degenerate = Vec::new();
    let mut index: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let cell_lo: Vec<Scalar> = index.iter().map(|&i| int(i) * side).collect();
        let cell_hi: Vec<Scalar> = index.iter().map(|&i| int(i + 1) * side).collect();
        let cell = Polytope::from_box(&cell_lo, &cell_hi);
        let piece = p.intersect(&cell);
        if piece.has_interior() {
            parts.push(piece);
        } else if !piece.is_empty() {
            degenerate.push(piece);
        }
        // odometer increment, last axis fastest
        let mut k = dim;
        loop {
            if k == 0 {
                if parts.is_empty() {
                    // lower-dimensional input: fall back to closed-cell
                    // pieces so a non-empty polytope never splits to nothing
                    return degenerate;
                }
                return parts;
            }
            k -= 1;
            if index[k] < ranges[k].1 {
                index[k] += 1;
                for r in k + 1..dim {
                    index[r] = ranges[r].0;
                }
                break;
            }
        }
    }
}
