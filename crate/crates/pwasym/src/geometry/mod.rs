//! Exact convex polytope kernel.
//!
//! Polytopes are kept in dual representation: a canonical irredundant
//! halfspace system plus a lazily computed vertex list, both over exact
//! rationals. The kernel stores topological closures only; operations on
//! coverings and partitions are therefore meaningful "up to boundaries"
//! (interiors disjoint, volumes additive), which is what every downstream
//! property asserts.
//!
//! Canonical form: each halfspace is scaled to coprime integer
//! coefficients, duplicates and looser parallel copies are dropped, the
//! system is irredundant (each constraint is tight somewhere on the
//! polytope), and constraints are sorted lexicographically. The canonical
//! empty polytope carries the single infeasible constraint `0 <= -1`.

mod difference;
mod metric;
pub(crate) mod project;
mod volume;

pub use difference::{set_difference, union_volume};
pub use metric::dp_distance;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inf_dist, solve_square, Point};
use crate::lp::{self, LpOutcome};
use crate::scalar::{one, zero, Scalar};

/// Closed halfspace `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
}

impl Halfspace {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Halfspace {
        Halfspace { normal, offset }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(normal: &[i64], offset: i64) -> Halfspace {
        Halfspace {
            normal: normal.iter().map(|&c| crate::scalar::int(c)).collect(),
            offset: crate::scalar::int(offset),
        }
    }

    pub fn holds(&self, x: &[Scalar]) -> bool {
        crate::linalg::dot(&self.normal, x) <= self.offset
    }

    /// The complementary closed halfspace `normal . x >= offset`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|c| -c).collect(),
            offset: -&self.offset,
        }
    }
}

enum ScanOutcome {
    Keep(Halfspace),
    Trivial,
    Infeasible,
}

/// Scales a halfspace by a positive rational so that all coefficients are
/// coprime integers. Zero normals collapse to "always true" or "never".
fn canonical_halfspace(hs: Halfspace) -> ScanOutcome {
    if hs.normal.iter().all(Zero::is_zero) {
        return if hs.offset.is_negative() {
            ScanOutcome::Infeasible
        } else {
            ScanOutcome::Trivial
        };
    }
    let mut l = BigInt::one();
    for e in hs.normal.iter().chain(std::iter::once(&hs.offset)) {
        l = l.lcm(e.denom());
    }
    let scale = Scalar::from_integer(l);
    let ints: Vec<BigInt> = hs
        .normal
        .iter()
        .map(|e| (e * &scale).to_integer())
        .collect();
    let off = (&hs.offset * &scale).to_integer();
    let mut g = BigInt::zero();
    for e in ints.iter().chain(std::iter::once(&off)) {
        g = g.gcd(e);
    }
    debug_assert!(g.is_positive());
    ScanOutcome::Keep(Halfspace {
        normal: ints
            .into_iter()
            .map(|i| Scalar::from_integer(i / &g))
            .collect(),
        offset: Scalar::from_integer(off / &g),
    })
}

/// Bounded convex polytope in dual representation.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    empty: bool,
    vertices: OnceLock<Vec<Point>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        let vertices = OnceLock::new();
        if let Some(v) = self.vertices.get() {
            let _ = vertices.set(v.clone());
        }
        Polytope {
            dim: self.dim,
            halfspaces: self.halfspaces.clone(),
            empty: self.empty,
            vertices,
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.empty == other.empty && self.halfspaces == other.halfspaces
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// The canonical empty polytope of the given ambient dimension.
    pub fn empty(dim: usize) -> Polytope {
        let p = Polytope {
            dim,
            halfspaces: vec![Halfspace {
                normal: vec![zero(); dim],
                offset: -one(),
            }],
            empty: true,
            vertices: OnceLock::new(),
        };
        let _ = p.vertices.set(Vec::new());
        p
    }

    /// Builds a polytope from a halfspace system, canonicalizing it.
    /// Fails with `UnboundedRegion` when the feasible set is unbounded.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
        for hs in &halfspaces {
            if hs.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: hs.normal.len(),
                });
            }
        }
        let Some(mut system) = scan_and_dedup(halfspaces) else {
            return Ok(Polytope::empty(dim));
        };
        if lp::feasible_point(&system, dim).is_none() {
            return Ok(Polytope::empty(dim));
        }
        // boundedness: every coordinate must have a finite extent
        for j in 0..dim {
            for sign in [1i64, -1] {
                let mut obj = vec![zero(); dim];
                obj[j] = crate::scalar::int(sign);
                if let LpOutcome::Unbounded = lp::maximize(&system, dim, &obj) {
                    return Err(Error::UnboundedRegion);
                }
            }
        }
        remove_redundant(&mut system, dim);
        Ok(Polytope {
            dim,
            halfspaces: system,
            empty: false,
            vertices: OnceLock::new(),
        })
    }

    /// Canonicalizes a system already known to describe a bounded set
    /// (intersections, projections and affine images of polytopes).
    pub(crate) fn canonicalize_bounded(dim: usize, halfspaces: Vec<Halfspace>) -> Polytope {
        let Some(mut system) = scan_and_dedup(halfspaces) else {
            return Polytope::empty(dim);
        };
        if lp::feasible_point(&system, dim).is_none() {
            return Polytope::empty(dim);
        }
        remove_redundant(&mut system, dim);
        Polytope {
            dim,
            halfspaces: system,
            empty: false,
            vertices: OnceLock::new(),
        }
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn from_box(lo: &[Scalar], hi: &[Scalar]) -> Polytope {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let mut up = vec![zero(); dim];
            up[j] = one();
            hs.push(Halfspace::new(up.clone(), hi[j].clone()));
            let mut down = up;
            down[j] = -one();
            hs.push(Halfspace::new(down, -&lo[j]));
        }
        Polytope::canonicalize_bounded(dim, hs)
    }

    /// The single-point polytope `{x}`.
    pub fn singleton(x: &[Scalar]) -> Polytope {
        Polytope::from_box(x, x)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.halfspaces.iter().all(|hs| hs.holds(x))
    }

    /// Exact extreme points, lexicographically sorted. Empty for the
    /// empty polytope.
    pub fn vertices(&self) -> &[Point] {
        self.vertices.get_or_init(|| enumerate_vertices(self))
    }

    /// Smallest axis-aligned box containing the polytope.
    pub fn bbox(&self) -> Option<(Point, Point)> {
        let vs = self.vertices();
        let first = vs.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for v in &vs[1..] {
            for j in 0..self.dim {
                if v[j] < lo[j] {
                    lo[j] = v[j].clone();
                }
                if v[j] > hi[j] {
                    hi[j] = v[j].clone();
                }
            }
        }
        Some((lo, hi))
    }

    /// Intersection; empty results are valid polytopes.
    pub fn intersect(&self, other: &Polytope) -> Polytope {
        assert_eq!(self.dim, other.dim, "intersect dimension mismatch");
        if self.empty || other.empty {
            return Polytope::empty(self.dim);
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Polytope::canonicalize_bounded(self.dim, hs)
    }

    pub(crate) fn intersect_halfspace(&self, hs: &Halfspace) -> Polytope {
        if self.empty {
            return Polytope::empty(self.dim);
        }
        let mut system = self.halfspaces.clone();
        system.push(hs.clone());
        Polytope::canonicalize_bounded(self.dim, system)
    }

    /// Whether the polytope is full-dimensional.
    pub fn has_interior(&self) -> bool {
        !self.empty && lp::strictly_feasible(&self.halfspaces, self.dim)
    }

    /// Non-emptiness of the intersection without constructing it.
    pub fn intersects(&self, other: &Polytope) -> bool {
        assert_eq!(self.dim, other.dim, "intersects dimension mismatch");
        if self.empty || other.empty {
            return false;
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        lp::feasible_point(&hs, self.dim).is_some()
    }

    /// Infinity-norm diameter; `Diam(empty) = 0`.
    pub fn diameter(&self) -> Scalar {
        let vs = self.vertices();
        let mut best = zero();
        for (i, v) in vs.iter().enumerate() {
            for w in &vs[i + 1..] {
                let d = inf_dist(v, w);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Exact Lebesgue volume (zero for lower-dimensional polytopes).
    pub fn volume(&self) -> Scalar {
        volume::volume(self)
    }

    /// Point-set equality (closed convex sets are equal iff their vertex
    /// sets are equal).
    pub fn same_set(&self, other: &Polytope) -> bool {
        self.dim == other.dim && self.vertices() == other.vertices()
    }
}

/// Canonical-scales, drops trivial constraints, deduplicates and sorts.
/// Returns `None` when a constraint is trivially infeasible.
fn scan_and_dedup(halfspaces: Vec<Halfspace>) -> Option<Vec<Halfspace>> {
    let mut kept = Vec::with_capacity(halfspaces.len());
    for hs in halfspaces {
        match canonical_halfspace(hs) {
            ScanOutcome::Keep(h) => kept.push(h),
            ScanOutcome::Trivial => {}
            ScanOutcome::Infeasible => return None,
        }
    }
    kept.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    // parallel same-direction constraints: keep the tightest offset
    kept.dedup_by(|next, prev| next.normal == prev.normal);
    Some(kept)
}

/// Drops constraints whose removal does not change the feasible set.
/// A kept constraint is tight somewhere on the set, so the result pairs
/// one halfspace per supporting face.
fn remove_redundant(system: &mut Vec<Halfspace>, dim: usize) {
    let mut i = 0;
    while i < system.len() {
        if system.len() == 1 {
            break;
        }
        let candidate = system.remove(i);
        let redundant = match lp::maximize(system, dim, &candidate.normal) {
            LpOutcome::Optimal { value, .. } => value <= candidate.offset,
            LpOutcome::Unbounded => false,
            LpOutcome::Infeasible => unreachable!("system was feasible"),
        };
        if !redundant {
            system.insert(i, candidate);
            i += 1;
        }
    }
}

/// Brute-force vertex enumeration: every choice of `dim` constraints with
/// an invertible normal matrix yields a candidate, kept when feasible.
/// Duplicates from degenerate vertices are merged.
fn enumerate_vertices(p: &Polytope) -> Vec<Point> {
    if p.empty {
        return Vec::new();
    }
    let d = p.dim;
    let m = p.halfspaces.len();
    let mut found: Vec<Point> = Vec::new();
    if m < d {
        debug_assert!(false, "bounded non-empty polytope needs >= dim constraints");
        return found;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&i| p.halfspaces[i].normal.clone())
            .collect();
        let rhs: Vec<Scalar> = idx.iter().map(|&i| p.halfspaces[i].offset.clone()).collect();
        if let Some(x) = solve_square(&rows, &rhs) {
            if p.contains(&x) {
                found.push(x);
            }
        }
        // next combination in lexicographic order
        let mut k = d;
        loop {
            if k == 0 {
                found.sort();
                found.dedup();
                debug_assert!(!found.is_empty(), "non-empty polytope has a vertex");
                return found;
            }
            k -= 1;
            if idx[k] != k + m - d {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Spec-level vertex enumeration: errors on the empty polytope.
pub fn vertex_enumeration(p: &Polytope) -> Result<Vec<Point>> {
    if p.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(p.vertices().to_vec())
}

/// Finite union of polytopes with a shared ambient dimension. Parts are
/// expected to have pairwise disjoint interiors when the set represents a
/// decomposition, but the operations below do not rely on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeSet {
    dim: usize,
    parts: Vec<Polytope>,
}

impl PolytopeSet {
    pub fn new(dim: usize, parts: Vec<Polytope>) -> PolytopeSet {
        let parts: Vec<Polytope> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        assert!(parts.iter().all(|p| p.dim() == dim), "part dimension mismatch");
        PolytopeSet { dim, parts }
    }

    pub fn empty(dim: usize) -> PolytopeSet {
        PolytopeSet { dim, parts: Vec::new() }
    }

    pub fn from_polytope(p: Polytope) -> PolytopeSet {
        let dim = p.dim();
        PolytopeSet::new(dim, vec![p])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[Polytope] {
        &self.parts
    }

    pub fn push(&mut self, p: Polytope) {
        if !p.is_empty() {
            assert_eq!(p.dim(), self.dim);
            self.parts.push(p);
        }
    }

    pub fn contains_point(&self, x: &[Scalar]) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    /// Diameter of the union: the vertex formula extends to unions since
    /// hull vertices of a union are vertices of its members.
    pub fn diameter(&self) -> Scalar {
        let all: Vec<&Point> = self.parts.iter().flat_map(|p| p.vertices()).collect();
        let mut best = zero();
        for (i, v) in all.iter().enumerate() {
            for w in &all[i + 1..] {
                let d = inf_dist(v, w);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        let mut boxes = self.parts.iter().filter_map(|p| p.bbox());
        let (mut lo, mut hi) = boxes.next()?;
        for (l, h) in boxes {
            for j in 0..self.dim {
                if l[j] < lo[j] {
                    lo[j] = l[j].clone();
                }
                if h[j] > hi[j] {
                    hi[j] = h[j].clone();
                }
            }
        }
        Some((lo, hi))
    }
}

#[cfg(test)]
pub(crate) mod tests;
