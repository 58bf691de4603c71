//! Exact dense matrices over Q.
//!
//! Supports exactly what the intersection-matrix computations need: Gaussian
//! elimination with partial pivoting over exact rationals, yielding the
//! inverse, the determinant, and the rank in one pass, plus the alternating
//! principal-minor test for negative definiteness.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::cyclo::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    /// Row-major entries.
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(rows * cols, data.len());
        QMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Build from i64 entries, row-major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&e| crate::cyclo::rat_i(e)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Submatrix keeping the given rows and columns, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone()))
            .collect();
        QMatrix::new(rows.len(), cols.len(), data)
    }

    /// Gaussian elimination with partial pivoting (largest |pivot|).
    /// Returns (inverse if nonsingular, determinant, rank).
    fn eliminate(&self) -> (Option<QMatrix>, Rational, usize) {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        let mut det = Rational::one();
        let mut rank = 0;
        for col in 0..n {
            let pivot_row = (rank..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&r, &s| a[(r, col)].abs().cmp(&a[(s, col)].abs()));
            let Some(p) = pivot_row else {
                det = Rational::zero();
                continue;
            };
            if p != rank {
                a.swap_rows(p, rank);
                inv.swap_rows(p, rank);
                det = -det;
            }
            let pivot = a[(rank, col)].clone();
            det *= &pivot;
            let pinv = Rational::one() / pivot;
            for j in 0..n {
                a[(rank, j)] *= &pinv;
                inv[(rank, j)] *= &pinv;
            }
            for r in 0..n {
                if r != rank && !a[(r, col)].is_zero() {
                    let factor = a[(r, col)].clone();
                    for j in 0..n {
                        let s = &factor * &a[(rank, j)];
                        a[(r, j)] -= s;
                        let s = &factor * &inv[(rank, j)];
                        inv[(r, j)] -= s;
                    }
                }
            }
            rank += 1;
        }
        if rank == n {
            (Some(inv), det, rank)
        } else {
            (None, Rational::zero(), rank)
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Exact inverse; errors with the rank when singular.
    pub fn invert(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::precondition("matrix must be square to invert"));
        }
        let (inv, _, rank) = self.eliminate();
        inv.ok_or(Error::SingularMatrix { rank })
    }

    pub fn det(&self) -> Rational {
        self.eliminate().1
    }

    /// Alternating-sign test on leading principal minors:
    /// negative definite iff (-1)^i * minor_i > 0 for i = 1..n.
    pub fn is_negative_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::precondition(
                "negative-definiteness test requires a symmetric matrix",
            ));
        }
        for i in 1..=self.rows {
            let idx: Vec<usize> = (0..i).collect();
            let minor = self.submatrix(&idx, &idx).det();
            let sign_ok = if i % 2 == 1 {
                minor.is_negative()
            } else {
                minor.is_positive()
            };
            if !sign_ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Determinant that must be an integer (used for matrices with integer entries).
    pub fn det_as_integer(&self) -> Result<BigInt> {
        let d = self.det();
        if !d.denom().is_one() {
            return Err(Error::inconsistency(format!(
                "expected integer determinant, got {}",
                d
            )));
        }
        Ok(d.numer().clone())
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, rat_i};
    use proptest::prelude::*;

    #[test]
    fn identity_inverts_to_identity() {
        let id = QMatrix::identity(3);
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn two_by_two_inverse() {
        let m = QMatrix::from_i64(2, 2, &[1, 2, 2, -6]);
        let inv = m.invert().unwrap();
        let expected = QMatrix::new(
            2,
            2,
            vec![rat(3, 5), rat(1, 5), rat(1, 5), rat(-1, 10)],
        );
        assert_eq!(inv, expected);
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_reports_rank() {
        let m = QMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 0, 0, 1]);
        match m.invert() {
            Err(Error::SingularMatrix { rank }) => assert_eq!(rank, 2),
            other => panic!("expected singular error, got {:?}", other),
        }
    }

    #[test]
    fn negative_definite_basics() {
        assert!(QMatrix::from_i64(1, 1, &[-1]).is_negative_definite().unwrap());
        assert!(!QMatrix::from_i64(1, 1, &[0]).is_negative_definite().unwrap());
        let err = QMatrix::from_i64(2, 2, &[1, 2, 3, 4]).is_negative_definite();
        assert!(err.is_err());
    }

    #[test]
    fn negative_definite_paper_block() {
        // Lower-right 3x3 block of the inverse matrix for the p=2, q=3, k=3
        // family: diag(-1/10) exactly.
        let block = QMatrix::new(
            3,
            3,
            vec![
                rat(-1, 10), rat_i(0), rat_i(0),
                rat_i(0), rat(-1, 10), rat_i(0),
                rat_i(0), rat_i(0), rat(-1, 10),
            ],
        );
        assert!(block.is_negative_definite().unwrap());
    }

    proptest! {
        #[test]
        fn inverse_round_trip(n in 1usize..=8, seed in proptest::collection::vec(-9i64..=9, 64)) {
            let data: Vec<Rational> = seed.iter().take(n * n).map(|&e| rat_i(e)).collect();
            let m = QMatrix::new(n, n, data);
            if let Ok(inv) = m.invert() {
                prop_assert_eq!(inv.mul(&m), QMatrix::identity(n));
                prop_assert_eq!(m.mul(&inv), QMatrix::identity(n));
            }
        }
    }
}
