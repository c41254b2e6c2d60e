//! Deterministic seeded sampling of rational points from polytopes.
//!
//! Points are random convex combinations of the vertex set with strictly
//! positive weights, so samples always lie in the relative interior and
//! membership never needs a tolerance. Weight denominators are pseudo
//! random 64-bit integers, which keeps accidental alignment with the
//! (small-denominator) cell boundaries of the benchmarks improbable.

use rand::RngCore;

use crate::geometry::{Polytope, PolytopeSet};
use crate::linalg::Point;
use crate::scalar::{int, Scalar};

/// Relative-interior point of a non-empty polytope, deterministic in the
/// RNG stream.
pub fn sample_in_polytope(p: &Polytope, rng: &mut dyn RngCore) -> Point {
    let vs = p.vertices();
    assert!(!vs.is_empty(), "cannot sample from an empty polytope");
    let weights: Vec<Scalar> = vs
        .iter()
        .map(|_| int((rng.next_u64() % 0xffff_ffff) as i64 + 1))
        .collect();
    let total: Scalar = weights.iter().cloned().sum();
    let mut point = vec![crate::scalar::zero(); p.dim()];
    for (v, w) in vs.iter().zip(&weights) {
        for (acc, coord) in point.iter_mut().zip(v) {
            *acc += coord * w;
        }
    }
    for coord in &mut point {
        *coord /= &total;
    }
    point
}

/// Sample from a union: picks a part uniformly, then samples within it.
pub fn sample_in_set(set: &PolytopeSet, rng: &mut dyn RngCore) -> Point {
    let parts = set.parts();
    assert!(!parts.is_empty(), "cannot sample from an empty set");
    let idx = (rng.next_u64() % parts.len() as u64) as usize;
    sample_in_polytope(&parts[idx], rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_lie_inside() {
        let p = Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], 1),
                Halfspace::from_ints(&[-1, 0], 0),
                Halfspace::from_ints(&[0, 1], 1),
                Halfspace::from_ints(&[0, -1], 0),
                Halfspace::from_ints(&[1, 1], 1),
            ],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = sample_in_polytope(&p, &mut rng);
            assert!(p.contains(&x));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_handles_points() {
        let p = Polytope::singleton(&[crate::scalar::ratio(1, 3)]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(sample_in_polytope(&p, &mut rng), vec![crate::scalar::ratio(1, 3)]);
        let set = PolytopeSet::from_polytope(p);
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_in_set(&set, &mut a), sample_in_set(&set, &mut b));
    }
}
