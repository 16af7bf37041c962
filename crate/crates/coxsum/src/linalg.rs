//! Dense exact linear algebra over any [`Field`].
//!
//! Everything is plain Gaussian elimination with the deterministic
//! first-nonzero pivot rule, so canonical forms (and therefore subspace
//! identity tests and report output) are reproducible byte for byte.

use crate::field::Field;

/// A dense rows × cols matrix with entries in a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = field.zero();
            for k in 0..self.cols {
                acc = field.add(&acc, &field.mul(self.at(i, k), other.at(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for k in 0..self.cols {
                    acc = field.add(&acc, &field.mul(self.at(i, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// nonzero row, in order.
    pub fn rref<F: Field<Elem = E>>(&mut self, field: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !field.is_zero(self.at(i, c))) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self.at(r, c));
            for j in c..self.cols {
                let v = field.mul(self.at(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || field.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = field.sub(self.at(i, j), &field.mul(&factor, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    pub fn det<F: Field<Elem = E>>(&self, field: &F) -> E {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| !field.is_zero(m.at(i, c))) else {
                return field.zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = field.neg(&det);
            }
            det = field.mul(&det, m.at(c, c));
            let inv = field.inv(m.at(c, c));
            for i in c + 1..m.rows {
                if field.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = field.mul(m.at(i, c), &inv);
                for j in c..m.cols {
                    let v = field.sub(m.at(i, j), &field.mul(&factor, m.at(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Basis of the right null space {v : A·v = 0}, via RREF; one vector per free
/// column, in increasing column order.
pub fn kernel_basis<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut m = a.clone();
    let pivots = m.rref(field);
    let pivot_row: std::collections::HashMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let mut basis = Vec::new();
    for j in 0..a.ncols() {
        if pivot_row.contains_key(&j) {
            continue;
        }
        let mut v = vec![field.zero(); a.ncols()];
        v[j] = field.one();
        for (&c, &r) in &pivot_row {
            v[c] = field.neg(m.at(r, j));
        }
        basis.push(v);
    }
    basis
}

/// Canonical basis of the row space: RREF rows with zero rows dropped. Two
/// row sets span the same subspace iff their canonical bases are equal.
pub fn row_space_canonical<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(rows.to_vec());
    let pivots = m.rref(field);
    (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
}

/// Expresses v in a row-reduced basis (as produced by
/// [`row_space_canonical`]); returns the coefficients, or `None` when v is
/// outside the span.
pub fn coords_in_row_basis<F: Field>(
    field: &F,
    basis: &[Vec<F::Elem>],
    pivots: &[usize],
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for (row, &c) in basis.iter().zip(pivots) {
        let coeff = rest[c].clone();
        for j in 0..rest.len() {
            rest[j] = field.sub(&rest[j], &field.mul(&coeff, &row[j]));
        }
        coords.push(coeff);
    }
    if rest.iter().all(|x| field.is_zero(x)) {
        Some(coords)
    } else {
        None
    }
}

/// Pivot columns of an already-canonical row basis.
pub fn basis_pivots<F: Field>(field: &F, basis: &[Vec<F::Elem>]) -> Vec<usize> {
    basis
        .iter()
        .map(|row| row.iter().position(|x| !field.is_zero(x)).expect("nonzero basis row"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, PrimeField, Rationals};
    use num_rational::BigRational;

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = PrimeField::new(5).unwrap();
        let id = Matrix::identity(&f, 3);
        assert!(kernel_basis(&f, &id).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        let f = PrimeField::new(5).unwrap();
        let z = Matrix::from_fn(2, 2, |_, _| 0u64);
        let basis = kernel_basis(&f, &z);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn frobenius_plus_one_kernel_on_f9() {
        // {x ∈ F_9 : x³ = −x} is one-dimensional over F_3.
        let f3 = PrimeField::new(3).unwrap();
        let ext = ExtField::new(&f3, 2);
        let phi = ext.frobenius_matrix();
        let m = Matrix::from_fn(2, 2, |i, j| {
            let id = if i == j { 1u64 } else { 0 };
            f3.add(&phi[i][j], &id)
        });
        assert_eq!(kernel_basis(&f3, &m).len(), 1);
    }

    #[test]
    fn kernel_vectors_are_solutions_and_independent() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_rows(vec![vec![1u64, 2, 3, 4], vec![2, 4, 6, 1], vec![3, 6, 2, 5]]);
        let basis = kernel_basis(&f, &a);
        for v in &basis {
            assert!(a.mul_vec(&f, v).iter().all(|&x| x == 0));
        }
        if !basis.is_empty() {
            let b = Matrix::from_rows(basis.clone());
            assert_eq!(b.rank(&f), basis.len());
        }
        assert_eq!(a.rank(&f) + basis.len(), a.ncols());
    }

    #[test]
    fn row_space_canonical_identifies_equal_subspaces() {
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let b1 = vec![vec![r(1), r(2), r(3)], vec![r(0), r(1), r(1)]];
        let b2 = vec![vec![r(2), r(5), r(7)], vec![r(1), r(3), r(4)]];
        assert_eq!(row_space_canonical(&q, &b1), row_space_canonical(&q, &b2));
        let b3 = vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(1)]];
        assert_ne!(row_space_canonical(&q, &b1), row_space_canonical(&q, &b3));
    }

    #[test]
    fn coords_round_trip() {
        let f = PrimeField::new(11).unwrap();
        let basis = row_space_canonical(&f, &[vec![2u64, 4, 1], vec![3, 1, 0]]);
        let pivots = basis_pivots(&f, &basis);
        let v = vec![5u64, 9, 2];
        if let Some(coords) = coords_in_row_basis(&f, &basis, &pivots, &v) {
            let mut rebuilt = vec![0u64; 3];
            for (c, row) in coords.iter().zip(&basis) {
                for j in 0..3 {
                    rebuilt[j] = f.add(&rebuilt[j], &f.mul(c, &row[j]));
                }
            }
            assert_eq!(rebuilt, v);
        }
        let outside = coords_in_row_basis(&f, &basis[..1], &pivots[..1], &v);
        assert!(outside.is_none() || basis.len() == 1);
    }

    #[test]
    fn det_matches_hand_values() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]);
        // 1·4 − 2·3 = −2 ≡ 5 mod 7.
        assert_eq!(m.det(&f), 5);
        let singular = Matrix::from_rows(vec![vec![1u64, 2], vec![2, 4]]);
        assert_eq!(singular.det(&f), 0);
    }
}
