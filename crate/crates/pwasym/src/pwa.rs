//! Discrete-time piecewise-affine systems over a bounded analysis region.
//!
//! A system is a list of modes `x' = A_i x + B_i u + f_i` with polytopic
//! guards, a polytopic input set and a bounded polytopic analysis region.
//! The restricted guards (guard intersected with the region) must
//! partition the region up to boundaries; membership ties on shared
//! facets resolve to the lowest mode index, which keeps the dynamics
//! deterministic.

use crate::error::{Error, Result};
use crate::geometry::{union_volume, Polytope};
use crate::linalg::{add, Matrix, Point};
use crate::scalar::{zero, Scalar};

/// One affine mode with its guard polytope.
#[derive(Clone, Debug)]
pub struct Mode {
    pub a: Matrix,
    pub b: Matrix,
    pub f: Vec<Scalar>,
    pub guard: Polytope,
}

/// A PWA system restricted to a bounded analysis region.
#[derive(Clone, Debug)]
pub struct PWASystem {
    modes: Vec<Mode>,
    input: Polytope,
    region: Polytope,
    restricted: Vec<Polytope>,
}

/// A finite run of the system. `states` always holds one more entry than
/// `inputs`; when the run leaves the analysis region the offending state
/// is recorded and `exited` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<Point>,
    pub inputs: Vec<Point>,
    pub exited: bool,
}

impl PWASystem {
    /// Validates and builds a system. The restricted guards must cover
    /// the region with pairwise disjoint interiors (checked exactly via
    /// volumes and interior tests).
    pub fn new(modes: Vec<Mode>, input: Polytope, region: Polytope) -> Result<PWASystem> {
        if region.is_empty() {
            return Err(Error::Model("analysis region is empty".into()));
        }
        if input.is_empty() {
            return Err(Error::Model("input polytope is empty".into()));
        }
        if modes.is_empty() {
            return Err(Error::Model("system has no modes".into()));
        }
        let n = region.dim();
        let m = input.dim();
        for (i, mode) in modes.iter().enumerate() {
            if mode.a.nrows() != n || mode.a.ncols() != n {
                return Err(Error::Model(format!("mode {}: A must be {n}x{n}", i + 1)));
            }
            if mode.b.nrows() != n || mode.b.ncols() != m {
                return Err(Error::Model(format!("mode {}: B must be {n}x{m}", i + 1)));
            }
            if mode.f.len() != n {
                return Err(Error::Model(format!("mode {}: f must have length {n}", i + 1)));
            }
            if mode.guard.dim() != n {
                return Err(Error::Model(format!("mode {}: guard dimension mismatch", i + 1)));
            }
            if !mode.guard.has_interior() {
                return Err(Error::Model(format!("mode {}: guard has empty interior", i + 1)));
            }
        }
        let restricted: Vec<Polytope> = modes.iter().map(|m| m.guard.intersect(&region)).collect();
        for (i, gi) in restricted.iter().enumerate() {
            for (j, gj) in restricted.iter().enumerate().skip(i + 1) {
                if gi.intersect(gj).has_interior() {
                    return Err(Error::Model(format!(
                        "guards of modes {} and {} overlap with interior",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if union_volume(&restricted) != region.volume() {
            return Err(Error::Model(
                "restricted guards do not cover the analysis region".into(),
            ));
        }
        Ok(PWASystem {
            modes,
            input,
            region,
            restricted,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.region.dim()
    }

    pub fn input_dim(&self) -> usize {
        self.input.dim()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn input(&self) -> &Polytope {
        &self.input
    }

    pub fn region(&self) -> &Polytope {
        &self.region
    }

    /// Guard of the given mode intersected with the analysis region.
    pub fn restricted_guard(&self, mode: usize) -> &Polytope {
        &self.restricted[mode]
    }

    pub fn restricted_guards(&self) -> &[Polytope] {
        &self.restricted
    }

    /// Index of the mode whose restricted guard contains `x`; boundary
    /// points resolve to the lowest index.
    pub fn mode_of(&self, x: &[Scalar]) -> Result<usize> {
        if !self.region.contains(x) {
            return Err(Error::OutsideRegion);
        }
        self.restricted
            .iter()
            .position(|g| g.contains(x))
            .ok_or_else(|| Error::Model("region point outside all guards".into()))
    }

    /// One exact step `A_i x + B_i u + f_i`; the result may leave the
    /// analysis region.
    pub fn step(&self, x: &[Scalar], u: &[Scalar]) -> Result<Point> {
        if !self.input.contains(u) {
            return Err(Error::InputNotAdmissible);
        }
        let mode = &self.modes[self.mode_of(x)?];
        Ok(add(&add(&mode.a.mul_vec(x), &mode.b.mul_vec(u)), &mode.f))
    }

    /// Iterates `step`, truncating at the first state outside the region
    /// (successors outside the region are not states of the embedding).
    pub fn run(&self, x0: &[Scalar], inputs: &[Point]) -> Result<Trajectory> {
        if !self.region.contains(x0) {
            return Err(Error::OutsideRegion);
        }
        let mut states = vec![x0.to_vec()];
        let mut used = Vec::new();
        for u in inputs {
            let x = states.last().unwrap().clone();
            let next = self.step(&x, u)?;
            used.push(u.clone());
            let exited = !self.region.contains(&next);
            states.push(next);
            if exited {
                return Ok(Trajectory {
                    states,
                    inputs: used,
                    exited: true,
                });
            }
        }
        Ok(Trajectory {
            states,
            inputs: used,
            exited: false,
        })
    }

    /// Granularity of the embedding: the largest restricted-guard
    /// diameter.
    pub fn gran_of_embedding(&self) -> Scalar {
        self.restricted
            .iter()
            .map(Polytope::diameter)
            .max()
            .unwrap_or_else(zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn interval(a: i64, b: i64) -> Polytope {
        Polytope::from_box(&[int(a)], &[int(b)])
    }

    /// 1D two-mode fixture: guards [0,1] and [1,2] on region [0,2].
    fn two_mode_1d() -> PWASystem {
        let mode = |guard: Polytope| Mode {
            a: Matrix::identity(1),
            b: Matrix::new(vec![vec![int(1)]]),
            f: vec![zero()],
            guard,
        };
        PWASystem::new(
            vec![mode(interval(0, 1)), mode(interval(1, 2))],
            interval(0, 1),
            interval(0, 2),
        )
        .unwrap()
    }

    #[test]
    fn mode_lookup_uses_lowest_index_on_boundaries() {
        let sys = two_mode_1d();
        assert_eq!(sys.mode_of(&[ratio(1, 2)]).unwrap(), 0);
        assert_eq!(sys.mode_of(&[int(1)]).unwrap(), 0);
        assert_eq!(sys.mode_of(&[ratio(3, 2)]).unwrap(), 1);
        assert_eq!(sys.mode_of(&[int(5)]).unwrap_err(), Error::OutsideRegion);
    }

    #[test]
    fn step_is_exact_affine_evaluation() {
        let sys = two_mode_1d();
        // x' = x + u in both modes
        assert_eq!(
            sys.step(&[ratio(1, 4)], &[ratio(1, 2)]).unwrap(),
            vec![ratio(3, 4)]
        );
        assert_eq!(
            sys.step(&[int(0)], &[int(2)]).unwrap_err(),
            Error::InputNotAdmissible
        );
        // identity-dynamics fixture: step is the identity
        let idle = PWASystem::new(
            vec![Mode {
                a: Matrix::identity(1),
                b: Matrix::new(vec![vec![zero()]]),
                f: vec![zero()],
                guard: interval(0, 1),
            }],
            Polytope::singleton(&[zero()]),
            interval(0, 1),
        )
        .unwrap();
        assert_eq!(idle.step(&[ratio(1, 3)], &[zero()]).unwrap(), vec![ratio(1, 3)]);
    }

    #[test]
    fn step_matches_independent_evaluation() {
        // 2D mode with a nontrivial matrix, evaluated by hand
        let sys = PWASystem::new(
            vec![Mode {
                a: Matrix::new(vec![vec![int(1), int(1)], vec![zero(), int(2)]]),
                b: Matrix::new(vec![vec![int(1)], vec![zero()]]),
                f: vec![ratio(1, 2), zero()],
                guard: Polytope::from_box(&[zero(), zero()], &[int(4), int(4)]),
            }],
            interval(0, 1),
            Polytope::from_box(&[zero(), zero()], &[int(4), int(4)]),
        )
        .unwrap();
        let x = [ratio(1, 2), ratio(1, 4)];
        let u = [ratio(1, 2)];
        // A x = (3/4, 1/2); + B u = (5/4, 1/2); + f = (7/4, 1/2)
        assert_eq!(sys.step(&x, &u).unwrap(), vec![ratio(7, 4), ratio(1, 2)]);
    }

    #[test]
    fn runs_truncate_on_exit() {
        let sys = two_mode_1d();
        let t = sys.run(&[ratio(1, 2)], &[]).unwrap();
        assert_eq!(t.states.len(), 1);
        assert!(!t.exited);

        // x' = x + u with u = 1 exits after two steps from 1/2
        let ones = vec![vec![int(1)], vec![int(1)], vec![int(1)]];
        let t = sys.run(&[ratio(1, 2)], &ones).unwrap();
        assert!(t.exited);
        assert_eq!(t.states.len(), 3);
        assert_eq!(t.inputs.len(), 2);
        assert_eq!(t.states.last().unwrap(), &vec![ratio(5, 2)]);
    }

    #[test]
    fn expanding_map_exits_after_two_steps() {
        // x' = 2x on [0, 1] from 3/10: 3/10 -> 3/5 -> 6/5 leaves the region
        let sys = PWASystem::new(
            vec![Mode {
                a: Matrix::new(vec![vec![int(2)]]),
                b: Matrix::new(vec![vec![zero()]]),
                f: vec![zero()],
                guard: interval(0, 1),
            }],
            Polytope::singleton(&[zero()]),
            interval(0, 1),
        )
        .unwrap();
        let zeros = vec![vec![zero()]; 5];
        let t = sys.run(&[ratio(3, 10)], &zeros).unwrap();
        assert!(t.exited);
        assert_eq!(
            t.states,
            vec![vec![ratio(3, 10)], vec![ratio(3, 5)], vec![ratio(6, 5)]]
        );
        assert_eq!(t.inputs.len(), 2);
    }

    #[test]
    fn gran_of_embedding_is_max_guard_diameter() {
        let mode = |guard: Polytope| Mode {
            a: Matrix::identity(1),
            b: Matrix::new(vec![vec![zero()]]),
            f: vec![zero()],
            guard,
        };
        let sys = PWASystem::new(
            vec![mode(interval(0, 1)), mode(interval(1, 3))],
            Polytope::singleton(&[zero()]),
            interval(0, 3),
        )
        .unwrap();
        assert_eq!(sys.gran_of_embedding(), int(2));
        // shrinking the region shrinks the restricted guard
        let sys = PWASystem::new(
            vec![mode(interval(0, 1)), mode(interval(1, 3))],
            Polytope::singleton(&[zero()]),
            interval(0, 2),
        )
        .unwrap();
        assert_eq!(sys.gran_of_embedding(), int(1));
    }

    #[test]
    fn rejects_non_partitions() {
        let mode = |guard: Polytope| Mode {
            a: Matrix::identity(1),
            b: Matrix::new(vec![vec![zero()]]),
            f: vec![zero()],
            guard,
        };
        // overlapping interiors
        let err = PWASystem::new(
            vec![mode(interval(0, 2)), mode(interval(1, 3))],
            Polytope::singleton(&[zero()]),
            interval(0, 3),
        );
        assert!(matches!(err, Err(Error::Model(_))));
        // coverage gap
        let err = PWASystem::new(
            vec![mode(interval(0, 1))],
            Polytope::singleton(&[zero()]),
            interval(0, 3),
        );
        assert!(matches!(err, Err(Error::Model(_))));
    }
}
