//! Small dense exact-rational linear algebra: just enough for affine maps
//! and for solving the square systems that vertex enumeration and volume
//! interpolation need.

use num_traits::Zero;

use crate::scalar::Scalar;

pub type Point = Vec<Scalar>;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vec<Scalar>>,
    cols: usize,
}

impl Matrix {
    /// Builds a matrix from rows; all rows must have equal length.
    pub fn new(rows: Vec<Vec<Scalar>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged matrix rows"
        );
        Matrix { rows, cols }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            rows: vec![vec![Scalar::zero(); ncols]; nrows],
            cols: ncols,
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = crate::scalar::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    /// Row-vector times matrix (`v^T M`).
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows.len(), "dimension mismatch in vec_mul");
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .zip(&self.rows)
                    .map(|(vi, row)| vi * &row[j])
                    .sum()
            })
            .collect()
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len(), "dimension mismatch in dot");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], k: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * k).collect()
}

/// Infinity-norm distance between two points.
pub fn inf_dist(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len(), "dimension mismatch in inf_dist");
    let mut best = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        let d = if x >= y { x - y } else { y - x };
        if d > best {
            best = d;
        }
    }
    best
}

/// Solves the square system `A x = b` by Gaussian elimination.
/// Returns `None` when `A` is singular.
#[allow(clippy::needless_range_loop)] // pivoting reads and writes across rows
pub fn solve_square(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    let delta = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
