//! Dense matrices over the rationals: rank and canonical nullspace bases by
//! exact Gaussian elimination.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{primitive_integer_vector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be at least 1x1 (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("row {row} has {actual} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, actual: usize },
}

/// Row-major dense rational matrix with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount { expected: rows * cols, actual: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: i, expected: cols, actual: row.len() });
            }
            data.extend(row);
        }
        Self::new(n_rows, cols, data)
    }

    pub fn from_integer_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Keeps the listed columns, in the given order. `None` if the selection is empty.
    pub fn select_columns(&self, columns: &[usize]) -> Option<Self> {
        let data = (0..self.rows).flat_map(|r| columns.iter().map(move |&c| self.get(r, c).clone())).collect();
        Self::new(self.rows, columns.len(), data).ok()
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`), in place.
/// Returns the pivot column of each nonzero row.
fn rref(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    rank_of_rows(&m.row_vecs(), m.cols())
}

pub(crate) fn rank_of_rows(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, cols).len()
}

/// A basis of `{x : m x = 0}`. Each vector has integer entries with content 1
/// and a positive first nonzero entry; the list is empty for a trivial kernel.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    nullspace_of_rows(&m.row_vecs(), m.cols())
}

pub(crate) fn nullspace_of_rows(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::from_integer(1.into());
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -work[row][free].clone();
            }
            primitive_integer_vector(&v).into_iter().map(Rational::from_integer).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        let id = RatMatrix::identity(3).unwrap();
        assert_eq!(rank(&id), 3);
        assert!(nullspace(&RatMatrix::identity(2).unwrap()).is_empty());
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(RatMatrix::zeros(0, 3).is_err());
        assert!(RatMatrix::from_integer_rows(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn herzog_matrix_for_t3_t4_t5() {
        // x^3 - yz, y^2 - xz, z^2 - x^2 y
        let a = RatMatrix::from_integer_rows(&[
            [3, 0, 0, 0, 1, 2],
            [0, 2, 0, 1, 0, 1],
            [0, 0, 2, 1, 1, 0],
            [1, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(rank(&a), 5);
        assert_eq!(nullspace(&a), vec![ints(&[1, 1, 1, -1, -1, -1])]);
    }

    #[test]
    fn complete_intersection_matrix_rank() {
        // x^2 - y^3, z^2 - xy
        let a = RatMatrix::from_integer_rows(&[[2, 0, 0, 1], [0, 0, 3, 1], [0, 2, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1]])
            .unwrap();
        assert_eq!(rank(&a), 4);
        assert!(nullspace(&a).is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = RatMatrix::from_integer_rows(&[[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]]).unwrap();
        let kernel = nullspace(&a);
        assert_eq!(kernel.len(), 2);
        for k in &kernel {
            assert!(a.mul_vec(k).iter().all(Zero::is_zero));
        }
    }
}
