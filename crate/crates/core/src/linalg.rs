//! Exact linear algebra over the rationals.
//!
//! The constraint systems behind the harmonic and monogenic bases are very
//! sparse (a handful of entries per row), so they are reduced to echelon form
//! in a sparse representation. Gram matrices are small and dense.

use std::collections::BTreeMap;

use crate::error::{HscaError, Result};
use crate::rational::Rational;

/// Sparse row: strictly increasing column indices with nonzero values.
pub type SparseRow = Vec<(usize, Rational)>;

fn axpy(row: &SparseRow, factor: &Rational, pivot: &SparseRow) -> SparseRow {
    // row - factor * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(factor.clone() * pivot[j].1.clone())));
            j += 1;
        } else {
            let v = row[i].1.clone() - factor.clone() * pivot[j].1.clone();
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form of a sparse system `A x = 0`, with every pivot the
/// leftmost entry of its row and scaled to 1.
pub struct SparseEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for mut row in rows {
            row.retain(|e| !e.1.is_zero());
            row.sort_by_key(|e| e.0);
            debug_assert!(row.iter().all(|e| e.0 < ncols));
            while let Some((lead, val)) = row.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => row = axpy(&row, &val, p),
                    None => {
                        let inv = val.recip();
                        for e in row.iter_mut() {
                            e.1 = e.1.clone() * inv.clone();
                        }
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        SparseEchelon { ncols, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// The nullspace vector with `x_free = 1` and every other free variable
    /// zero, as a sparse map.
    pub fn null_vector(&self, free: usize) -> BTreeMap<usize, Rational> {
        assert!(!self.is_pivot(free), "column {free} is a pivot");
        let mut x: BTreeMap<usize, Rational> = BTreeMap::new();
        x.insert(free, Rational::one());
        // Pivot rows only reference columns to their right, so solving from
        // the rightmost pivot leftwards sees every dependency resolved.
        for (&p, row) in self.pivots.range(..free).rev() {
            let mut acc = Rational::zero();
            for (c, a) in &row[1..] {
                if let Some(v) = x.get(c) {
                    acc -= a.clone() * v.clone();
                }
            }
            if !acc.is_zero() {
                x.insert(p, acc);
            }
        }
        x
    }
}

/// Dense square matrix of rationals.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix { n, data: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Gauss-Jordan inverse; `Singular` if the matrix is not invertible.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(HscaError::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip();
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() * p.clone());
                inv.set(col, j, inv.get(col, j).clone() * p.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, av);
                    let iv = inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone();
                    inv.set(r, j, iv);
                }
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn nullspace_of_small_system() {
        // x0 + x1 + x2 = 0, x1 - x2 = 0
        let rows = vec![vec![(0, q(1)), (1, q(1)), (2, q(1))], vec![(1, q(1)), (2, q(-1))]];
        let e = SparseEchelon::new(3, rows);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![2]);
        let v = e.null_vector(2);
        assert_eq!(v[&2], q(1));
        assert_eq!(v[&1], q(1));
        assert_eq!(v[&0], q(-2));
    }

    #[test]
    fn dependent_rows_reduce_away() {
        let rows = vec![vec![(0, q(1)), (1, q(2))], vec![(0, q(2)), (1, q(4))], vec![(1, q(3)), (2, q(3))]];
        let e = SparseEchelon::new(3, rows);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.nullity(), 1);
        let v = e.null_vector(2);
        // x1 = -x2, x0 = -2 x1
        assert_eq!(v[&1], q(-1));
        assert_eq!(v[&0], q(2));
    }

    #[test]
    fn inverse_round_trip() {
        let mut a = RationalMatrix::zeros(3);
        let vals = [[2, 1, 0], [1, 3, 1], [0, 1, 4]];
        for i in 0..3 {
            for j in 0..3 {
                a.set(i, j, q(vals[i][j]));
            }
        }
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(3));
        let mut s = RationalMatrix::zeros(2);
        s.set(0, 0, q(1));
        s.set(0, 1, q(2));
        s.set(1, 0, q(2));
        s.set(1, 1, q(4));
        assert_eq!(s.inverse(), Err(HscaError::Singular));
    }
}
