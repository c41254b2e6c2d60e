//! Fourier-Motzkin elimination and the operations built on it:
//! coordinate projection and affine images via lift-and-project.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{zero, Scalar};

use super::{Halfspace, Polytope};

/// One elimination step: removes the given column, combining every
/// positive-coefficient constraint with every negative-coefficient one.
/// The output is deduplicated but not made irredundant. `None` marks a
/// system recognized as infeasible during scaling.
pub(crate) fn fm_eliminate_raw(halfspaces: &[Halfspace], col: usize) -> Option<Vec<Halfspace>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for hs in halfspaces {
        let c = &hs.normal[col];
        if c.is_positive() {
            pos.push(hs);
        } else if c.is_negative() {
            neg.push(hs);
        } else {
            let mut normal = hs.normal.clone();
            normal.remove(col);
            out.push(Halfspace::new(normal, hs.offset.clone()));
        }
    }
    for p in &pos {
        let pc = &p.normal[col];
        for n in &neg {
            let nc = &n.normal[col]; // negative
            // p/pc + n/(-nc) cancels the eliminated coordinate
            let mut normal = Vec::with_capacity(p.normal.len() - 1);
            for j in 0..p.normal.len() {
                if j != col {
                    normal.push(&p.normal[j] / pc - &n.normal[j] / nc);
                }
            }
            let offset = &p.offset / pc - &n.offset / nc;
            out.push(Halfspace::new(normal, offset));
        }
    }
    super::scan_and_dedup(out)
}

/// Eliminates several columns (ascending order) without redundancy
/// removal; used for existence tests where only feasibility or interior
/// of the shadow matters. `None` marks an infeasible system.
pub(crate) fn eliminate_columns_raw(
    halfspaces: &[Halfspace],
    drop: &[usize],
) -> Option<Vec<Halfspace>> {
    debug_assert!(drop.windows(2).all(|w| w[0] < w[1]));
    let mut system = halfspaces.to_vec();
    for (done, &orig) in drop.iter().enumerate() {
        let col = orig - done;
        system = fm_eliminate_raw(&system, col)?;
    }
    Some(system)
}

impl Polytope {
    /// Exact shadow of the polytope onto the kept coordinates, via
    /// Fourier-Motzkin elimination of the dropped ones (ascending
    /// coordinate order, redundancy removal after each step).
    pub fn project(&self, kept: &[usize]) -> Polytope {
        assert!(!kept.is_empty(), "projection needs at least one coordinate");
        assert!(kept.len() < self.dim, "projection must drop a coordinate");
        assert!(
            kept.windows(2).all(|w| w[0] < w[1]) && kept.iter().all(|&k| k < self.dim),
            "kept coordinates must be strictly ascending axis indices"
        );
        if self.empty {
            return Polytope::empty(kept.len());
        }
        let drop: Vec<usize> = (0..self.dim).filter(|j| !kept.contains(j)).collect();
        let mut system = self.halfspaces.clone();
        let mut dim = self.dim;
        for (done, &orig) in drop.iter().enumerate() {
            let col = orig - done;
            system = fm_eliminate_raw(&system, col)
                .expect("elimination preserves feasibility");
            dim -= 1;
            // per-step cleanup keeps the constraint count from blowing up
            let cleaned = Polytope::canonicalize_bounded(dim, system);
            debug_assert!(!cleaned.is_empty(), "projection of a non-empty set");
            system = cleaned.halfspaces;
        }
        Polytope::canonicalize_bounded(kept.len(), system)
    }

    /// Image of the polytope under `x -> A x + t`, computed exactly by
    /// lifting to graph space and projecting onto the output coordinates.
    pub fn affine_image(&self, a: &Matrix, t: &[Scalar]) -> Result<Polytope> {
        if self.empty {
            return Err(Error::EmptyPolytope);
        }
        assert_eq!(a.ncols(), self.dim, "matrix width must match dimension");
        assert_eq!(a.nrows(), t.len(), "offset length must match matrix height");
        let out = a.nrows();
        let lifted_dim = self.dim + out;
        let mut system: Vec<Halfspace> = Vec::with_capacity(self.halfspaces.len() + 2 * out);
        for hs in &self.halfspaces {
            let mut normal = hs.normal.clone();
            normal.extend(std::iter::repeat_n(zero(), out));
            system.push(Halfspace::new(normal, hs.offset.clone()));
        }
        for i in 0..out {
            // y_i - (A x)_i <= t_i   and   (A x)_i - y_i <= -t_i
            let mut up = vec![zero(); lifted_dim];
            let mut down = vec![zero(); lifted_dim];
            for j in 0..self.dim {
                up[j] = -a.get(i, j);
                down[j] = a.get(i, j).clone();
            }
            up[self.dim + i] = crate::scalar::one();
            down[self.dim + i] = -crate::scalar::one();
            system.push(Halfspace::new(up, t[i].clone()));
            system.push(Halfspace::new(down, -&t[i]));
        }
        let lifted = Polytope::canonicalize_bounded(lifted_dim, system);
        let kept: Vec<usize> = (self.dim..lifted_dim).collect();
        Ok(lifted.project(&kept))
    }
}
