//! Exact rational matrices with fraction-free (Bareiss) rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exterior::{Blade, Form, Q};

/// Dense row-major matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Matrix of a linear map given by the images of domain basis vectors,
    /// each image expressed in `codomain` coordinates.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Matrix of a linear map on forms, using blade coordinates.
    pub fn of_form_map(domain: &[Blade], codomain: &[Blade], f: impl Fn(&Form<Q>) -> Form<Q>) -> Self {
        let cols: Vec<Vec<Q>> = domain
            .iter()
            .map(|b| {
                let img = f(&Form::term(*b, Q::one()));
                debug_assert!(img.blades().all(|c| codomain.contains(&c)), "image leaves the codomain");
                img.coords(codomain)
            })
            .collect();
        QMatrix::from_columns(codomain.len(), &cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Row-scaled integer copy: each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..m {
                for c in col + 1..n {
                    let v = &a[r][c] * &a[rank][col] - &a[r][col] * &a[rank][c];
                    let (quot, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    a[r][c] = quot;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Solves a square system exactly; `None` if singular.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let n = self.rows;
        assert_eq!(n, self.cols, "solve needs a square matrix");
        assert_eq!(b.len(), n);
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            let piv = a[col][col].clone();
            for c in col..=n {
                a[col][c] = &a[col][c] / &piv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=n {
                        let v = &a[r][c] - &f * &a[col][c];
                        a[r][c] = v;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n].clone()).collect())
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Rank data for one map in a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRank {
    pub domain: usize,
    pub codomain: usize,
    pub rank: usize,
    pub kernel: usize,
}

impl StageRank {
    pub fn of(m: &QMatrix) -> Self {
        let rank = m.rank();
        StageRank { domain: m.cols(), codomain: m.rows(), rank, kernel: m.cols() - rank }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{q, qi};

    fn m(rows: usize, cols: usize, v: &[i64]) -> QMatrix {
        let mut out = QMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, qi(v[i * cols + j]));
            }
        }
        out
    }

    #[test]
    fn ranks_of_small_matrices() {
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(m(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 10]).rank(), 3);
        assert_eq!(m(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).rank(), 2);
        assert_eq!(m(2, 3, &[0, 0, 0, 0, 0, 0]).rank(), 0);
        assert_eq!(m(3, 2, &[0, 1, 0, 2, 0, 3]).rank(), 1);
        assert_eq!(QMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn rational_entries_are_cleared_exactly() {
        let mut a = QMatrix::zeros(2, 2);
        a.set(0, 0, q(1, 3));
        a.set(0, 1, q(1, 6));
        a.set(1, 0, q(2, 7));
        a.set(1, 1, q(1, 7));
        assert_eq!(a.rank(), 1);
        a.set(1, 1, q(1, 8));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn rank_matches_transpose_on_pseudorandom_matrices() {
        let mut state = 12345u64;
        for _ in 0..50 {
            let mut a = QMatrix::zeros(5, 7);
            for i in 0..5 {
                for j in 0..7 {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    a.set(i, j, qi(((state >> 33) % 5) as i64 - 2));
                }
            }
            // force a dependency
            for j in 0..7 {
                let v = a.get(0, j) + a.get(1, j);
                a.set(4, j, v);
            }
            assert_eq!(a.rank(), a.transpose().rank());
            assert!(a.rank() <= 4);
        }
    }
}
