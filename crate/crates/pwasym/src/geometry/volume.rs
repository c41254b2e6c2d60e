//! Exact polytope volume.
//!
//! The volume of a d-polytope is integrated along the first coordinate:
//! between consecutive vertex abscissae the (d-1)-volume of the cross
//! section is a polynomial of degree at most d-1, so it is recovered
//! exactly from d interior evaluation nodes by Lagrange interpolation and
//! integrated in closed form. Recursion bottoms out at interval lengths.
//! Lower-dimensional polytopes get volume zero along the way for free.

use num_traits::{Signed, Zero};

use crate::linalg::solve_square;
use crate::scalar::{int, zero, Scalar};

use super::{Halfspace, Polytope};

pub(crate) fn volume(p: &Polytope) -> Scalar {
    if p.is_empty() {
        return zero();
    }
    volume_rec(p)
}

fn volume_rec(p: &Polytope) -> Scalar {
    let d = p.dim();
    let vs = p.vertices();
    if vs.is_empty() {
        return zero();
    }
    if d == 1 {
        let mut lo = vs[0][0].clone();
        let mut hi = lo.clone();
        for v in vs {
            if v[0] < lo {
                lo = v[0].clone();
            }
            if v[0] > hi {
                hi = v[0].clone();
            }
        }
        return hi - lo;
    }
    let mut breakpoints: Vec<Scalar> = vs.iter().map(|v| v[0].clone()).collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut total = zero();
    let denom = int((d + 1) as i64);
    for w in breakpoints.windows(2) {
        let (t0, t1) = (&w[0], &w[1]);
        let width = t1 - t0;
        debug_assert!(width.is_positive());
        let nodes: Vec<Scalar> = (1..=d)
            .map(|k| t0 + &width * int(k as i64) / &denom)
            .collect();
        let values: Vec<Scalar> = nodes.iter().map(|t| section_volume(p, t)).collect();
        total += integrate_interpolant(&nodes, &values, t0, t1);
    }
    total
}

/// Volume of the cross section `p ∩ {x_1 = t}` as a (d-1)-polytope.
fn section_volume(p: &Polytope, t: &Scalar) -> Scalar {
    let mut system: Vec<Halfspace> = Vec::with_capacity(p.halfspaces().len());
    for hs in p.halfspaces() {
        let normal: Vec<Scalar> = hs.normal[1..].to_vec();
        let offset = &hs.offset - &hs.normal[0] * t;
        if normal.iter().all(Zero::is_zero) {
            if offset.is_negative() {
                return zero();
            }
            continue;
        }
        system.push(Halfspace::new(normal, offset));
    }
    let section = Polytope::canonicalize_bounded(p.dim() - 1, system);
    if section.is_empty() {
        zero()
    } else {
        volume_rec(&section)
    }
}

/// Integrates the unique polynomial through `(nodes[i], values[i])` over
/// `[a, b]`; the Vandermonde system is solvable because nodes are
/// pairwise distinct.
fn integrate_interpolant(nodes: &[Scalar], values: &[Scalar], a: &Scalar, b: &Scalar) -> Scalar {
    let n = nodes.len();
    let rows: Vec<Vec<Scalar>> = nodes
        .iter()
        .map(|x| {
            let mut power = crate::scalar::one();
            (0..n)
                .map(|_| {
                    let entry = power.clone();
                    power = &power * x;
                    entry
                })
                .collect()
        })
        .collect();
    let coeffs = solve_square(&rows, values).expect("distinct nodes give a regular system");
    let mut total = zero();
    let mut b_pow = b.clone();
    let mut a_pow = a.clone();
    for (j, c) in coeffs.iter().enumerate() {
        total += c * (&b_pow - &a_pow) / int((j + 1) as i64);
        b_pow = &b_pow * b;
        a_pow = &a_pow * a;
    }
    total
}
