//! Exact rational linear programming.
//!
//! A dense two-phase simplex over arbitrary-precision rationals, with
//! Bland's rule for guaranteed termination. Free variables are split into
//! positive and negative parts. Problem sizes here are tiny (a handful of
//! variables, tens of constraints), so a dense tableau is the right tool;
//! exactness is what matters.
//!
//! The geometry kernel uses this for feasibility, interior (strict
//! feasibility) tests, redundancy elimination and boundedness checks.

use num_traits::{Signed, Zero};

use crate::geometry::Halfspace;
use crate::scalar::{one, zero, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Scalar, point: Vec<Scalar> },
}

struct Tableau {
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    obj: Vec<Scalar>,
    obj_value: Scalar,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        debug_assert!(!p.is_zero());
        for j in 0..self.ncols {
            self.rows[row][j] = &self.rows[row][j] / &p;
        }
        self.rhs[row] = &self.rhs[row] / &p;
        for r in 0..self.rows.len() {
            if r != row && !self.rows[r][col].is_zero() {
                let f = self.rows[r][col].clone();
                for j in 0..self.ncols {
                    let d = &f * &self.rows[row][j];
                    self.rows[r][j] = &self.rows[r][j] - &d;
                }
                let d = &f * &self.rhs[row];
                self.rhs[r] = &self.rhs[r] - &d;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for j in 0..self.ncols {
                let d = &f * &self.rows[row][j];
                self.obj[j] = &self.obj[j] - &d;
            }
            let d = &f * &self.rhs[row];
            self.obj_value = &self.obj_value + &d;
        }
        self.basis[row] = col;
    }

    /// Prices the objective row so that basic columns have zero reduced cost.
    fn price_out(&mut self) {
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !self.obj[b].is_zero() {
                let f = self.obj[b].clone();
                for j in 0..self.ncols {
                    let d = &f * &self.rows[r][j];
                    self.obj[j] = &self.obj[j] - &d;
                }
                let d = &f * &self.rhs[r];
                self.obj_value = &self.obj_value + &d;
            }
        }
    }

    /// Runs simplex iterations (maximization) until optimal or unbounded.
    /// Bland's rule: entering column is the lowest index with positive
    /// reduced cost; leaving row breaks ratio ties by lowest basis index.
    fn optimize(&mut self, allowed_cols: usize) -> bool {
        loop {
            let entering = (0..allowed_cols).find(|&j| self.obj[j].is_positive());
            let Some(col) = entering else {
                return true; // optimal
            };
            let mut leave: Option<(usize, Scalar)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][col];
                    match &leave {
                        None => leave = Some((r, ratio)),
                        Some((br, best)) => {
                            if ratio < *best
                                || (ratio == *best && self.basis[r] < self.basis[*br])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false, // unbounded
            }
        }
    }

    fn var_value(&self, col: usize) -> Scalar {
        match self.basis.iter().position(|&b| b == col) {
            Some(r) => self.rhs[r].clone(),
            None => zero(),
        }
    }
}

/// Maximizes `objective . x` over `{x : a_i . x <= b_i}`.
pub fn maximize(halfspaces: &[Halfspace], dim: usize, objective: &[Scalar]) -> LpOutcome {
    assert_eq!(objective.len(), dim);
    let m = halfspaces.len();
    // columns: d positive parts, d negative parts, m slacks, then artificials
    let base_cols = 2 * dim + m;
    let negatives: Vec<usize> = (0..m)
        .filter(|&i| halfspaces[i].offset.is_negative())
        .collect();
    let ncols = base_cols + negatives.len();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0usize;
    for (i, hs) in halfspaces.iter().enumerate() {
        let mut row = vec![zero(); ncols];
        let flip = hs.offset.is_negative();
        for (j, c) in hs.normal.iter().enumerate() {
            let a = if flip { -c } else { c.clone() };
            row[dim + j] = -&a;
            row[j] = a;
        }
        if flip {
            row[2 * dim + i] = -one();
            row[base_cols + art] = one();
            basis.push(base_cols + art);
            rhs.push(-&hs.offset);
            art += 1;
        } else {
            row[2 * dim + i] = one();
            basis.push(2 * dim + i);
            rhs.push(hs.offset.clone());
        }
        rows.push(row);
    }

    let mut t = Tableau {
        ncols,
        rows,
        rhs,
        basis,
        obj: vec![zero(); ncols],
        obj_value: zero(),
    };

    // Phase 1: maximize minus the sum of artificials.
    if !negatives.is_empty() {
        for j in base_cols..ncols {
            t.obj[j] = -one();
        }
        t.price_out();
        let ok = t.optimize(ncols);
        debug_assert!(ok, "phase 1 is bounded by construction");
        if t.obj_value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive any zero-valued basic artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= base_cols {
                match (0..base_cols).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(col) => t.pivot(r, col),
                    None => {
                        // redundant row
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2 with the real objective over x = p - q.
    t.obj = vec![zero(); ncols];
    t.obj_value = zero();
    for (j, c) in objective.iter().enumerate() {
        t.obj[j] = c.clone();
        t.obj[dim + j] = -c;
    }
    t.price_out();
    if !t.optimize(base_cols) {
        return LpOutcome::Unbounded;
    }
    let point: Vec<Scalar> = (0..dim)
        .map(|j| t.var_value(j) - t.var_value(dim + j))
        .collect();
    LpOutcome::Optimal {
        value: t.obj_value.clone(),
        point,
    }
}

/// A feasible point of the system, if any.
pub fn feasible_point(halfspaces: &[Halfspace], dim: usize) -> Option<Vec<Scalar>> {
    match maximize(halfspaces, dim, &vec![zero(); dim]) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Whether the system admits a point satisfying every inequality strictly;
/// for a bounded system this is exactly "the region is full-dimensional".
/// Solved as: maximize t subject to a_i . x + t <= b_i and t <= 1.
pub fn strictly_feasible(halfspaces: &[Halfspace], dim: usize) -> bool {
    let mut augmented: Vec<Halfspace> = halfspaces
        .iter()
        .map(|hs| {
            let mut n = hs.normal.clone();
            n.push(one());
            Halfspace::new(n, hs.offset.clone())
        })
        .collect();
    let mut cap = vec![zero(); dim];
    cap.push(one());
    augmented.push(Halfspace::new(cap, one()));
    let mut objective = vec![zero(); dim];
    objective.push(one());
    match maximize(&augmented, dim + 1, &objective) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Infeasible => false,
        // x-components are unconstrained in the augmented problem only if
        // they were unconstrained before; t itself is capped.
        LpOutcome::Unbounded => unreachable!("t is capped at 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn hs(normal: Vec<i64>, offset: i64) -> Halfspace {
        Halfspace::new(normal.into_iter().map(int).collect(), int(offset))
    }

    fn unit_square() -> Vec<Halfspace> {
        vec![
            hs(vec![1, 0], 1),
            hs(vec![-1, 0], 0),
            hs(vec![0, 1], 1),
            hs(vec![0, -1], 0),
        ]
    }

    #[test]
    fn maximizes_over_square() {
        let out = maximize(&unit_square(), 2, &[int(1), int(2)]);
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(3));
                assert_eq!(point, vec![int(1), int(1)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        let sys = vec![hs(vec![1], 0), hs(vec![-1], -1)]; // x <= 0, x >= 1
        assert_eq!(maximize(&sys, 1, &[int(1)]), LpOutcome::Infeasible);
        assert!(feasible_point(&sys, 1).is_none());
    }

    #[test]
    fn detects_unbounded() {
        let sys = vec![hs(vec![-1], 0)]; // x >= 0
        assert_eq!(maximize(&sys, 1, &[int(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // x >= 2, x <= 5 (x >= 2 becomes -x <= -2)
        let sys = vec![hs(vec![-1], -2), hs(vec![1], 5)];
        match maximize(&sys, 1, &[int(-1)]) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(-2));
                assert_eq!(point, vec![int(2)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn strict_feasibility_distinguishes_flat_regions() {
        assert!(strictly_feasible(&unit_square(), 2));
        // segment x in [0,1], y = 0
        let flat = vec![
            hs(vec![1, 0], 1),
            hs(vec![-1, 0], 0),
            hs(vec![0, 1], 0),
            hs(vec![0, -1], 0),
        ];
        assert!(!strictly_feasible(&flat, 2));
        let empty = vec![hs(vec![1, 0], 0), hs(vec![-1, 0], -1)];
        assert!(!strictly_feasible(&empty, 2));
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // maximize x + y st 2x + y <= 2, x + 3y <= 3, x,y >= 0
        let sys = vec![
            hs(vec![2, 1], 2),
            hs(vec![1, 3], 3),
            hs(vec![-1, 0], 0),
            hs(vec![0, -1], 0),
        ];
        match maximize(&sys, 2, &[int(1), int(1)]) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(point, vec![ratio(3, 5), ratio(4, 5)]);
                assert_eq!(value, ratio(7, 5));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
