//! Dense square complex matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used when checking unitarity and trace preservation.
pub const UNITARY_TOL: f64 = 1e-8;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    /// Outer product |a><b|.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        debug_assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            let out_row = &mut out.data[r * d..(r + 1) * d];
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Computes `self * other * self^dagger`.
    pub fn conjugate(&self, other: &Matrix) -> Matrix {
        self.mul(other).mul(&self.adjoint())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Tr[self * other] without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> Complex64 {
        let d = self.dim;
        let mut acc = ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += self.data[r * d + c] * other.data[c * d + r];
            }
        }
        acc
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |r, c| self[(r / b, c / b)] * other[(r % b, c % b)])
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitary_deviation(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Matrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        if self.dim.is_power_of_two() {
            Some(self.dim.trailing_zeros() as usize)
        } else {
            None
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// A unitary on `n` qubits, checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    n_qubits: usize,
    matrix: Matrix,
}

impl Unitary {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n_qubits = matrix.qubits().ok_or(Error::DimensionMismatch {
            expected: matrix.dim().next_power_of_two(),
            actual: matrix.dim(),
        })?;
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_qubits > crate::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "dense unitary",
                max: crate::MAX_DENSE_QUBITS,
                requested: n_qubits,
            });
        }
        let deviation = matrix.unitary_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary { n_qubits, matrix })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Unitary {
            n_qubits,
            matrix: Matrix::identity(1 << n_qubits),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &Unitary) -> Unitary {
        Unitary {
            n_qubits: self.n_qubits,
            matrix: other.matrix.mul(&self.matrix),
        }
    }

    pub fn kron(&self, other: &Unitary) -> Unitary {
        Unitary {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns unsorted eigenvalues and the matrix whose columns are
/// the corresponding eigenvectors.
pub(crate) fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let d = m.dim();
    let mut a = m.clone();
    let mut v = Matrix::identity(d);
    let scale = a.data.iter().map(|x| x.norm_sqr()).sum::<f64>().max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..d {
            for q in p + 1..d {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g < 1e-300 {
                    continue;
                }
                let phase = apq / g;
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let theta = 0.5 * libm::atan2(2.0 * g, alpha - beta);
                let (s, c) = libm::sincos(theta);
                // J = D R with D = diag(1, conj(phase)) on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(-s, 0.0);
                let jqp = phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    let values = (0..d).map(|i| a[(i, i)].re).collect();
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_places_first_factor_on_high_bits() {
        let x = Matrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let id = Matrix::identity(2);
        let xi = x.kron(&id);
        // X on qubit 0 flips the high bit: |00> -> |10>
        assert_eq!(xi[(2, 0)], ONE);
        assert_eq!(xi[(1, 0)], ZERO);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = Matrix::from_rows(&[vec![ONE, ONE], vec![ZERO, ONE]]).unwrap();
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
        let m = Matrix::identity(3);
        assert!(matches!(
            Unitary::new(m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_reconstructs_hermitian_matrix() {
        let m = Matrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, -0.3), c(0.1, 0.2)],
            vec![c(0.5, 0.3), c(1.0, 0.0), c(-0.4, 0.0)],
            vec![c(0.1, -0.2), c(-0.4, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let (vals, vecs) = hermitian_eigen(&m);
        let diag = Matrix::from_fn(3, |r, cc| if r == cc { c(vals[r], 0.0) } else { ZERO });
        let rebuilt = vecs.mul(&diag).mul(&vecs.adjoint());
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
        assert!(vecs.is_unitary(1e-12));
    }
}
