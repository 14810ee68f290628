//! Pure states, density matrices, state fidelity and spectral decomposition.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, Matrix, ONE, ZERO};

pub const NORM_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

fn check_dense_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    if n > crate::MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            what: "dense state",
            max: crate::MAX_DENSE_QUBITS,
            requested: n,
        });
    }
    Ok(())
}

/// Amplitudes `c_i` of an n-qubit pure state in the canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let d = amps.len();
        if !d.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: d.next_power_of_two(),
                actual: d,
            });
        }
        let n = d.trailing_zeros() as usize;
        check_dense_qubits(n)?;
        let s = StateVector { n_qubits: n, amps };
        s.check_normalized()?;
        Ok(s)
    }

    pub(crate) fn from_amplitudes_unchecked(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        StateVector { n_qubits, amps }
    }

    /// Canonical basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        StateVector { n_qubits, amps }
    }

    /// `|+>^{⊗n}`.
    pub fn plus(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let a = Complex64::new(1.0 / libm::sqrt(d as f64), 0.0);
        StateVector {
            n_qubits,
            amps: vec![a; d],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rescales to unit norm and fixes the global phase so that the first
    /// amplitude with modulus above `1e-12` is real and positive.
    pub(crate) fn normalized_canonical(mut amps: Vec<Complex64>, n_qubits: usize) -> Self {
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        let pivot = amps
            .iter()
            .find(|a| a.norm() > 1e-12)
            .copied()
            .unwrap_or(ONE);
        let fix = pivot.conj() / (pivot.norm() * norm);
        for a in amps.iter_mut() {
            *a *= fix;
        }
        StateVector { n_qubits, amps }
    }
}

/// Mixed state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: Matrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix) -> Result<Self> {
        let n = m.qubits().ok_or(Error::DimensionMismatch {
            expected: m.dim().next_power_of_two(),
            actual: m.dim(),
        })?;
        check_dense_qubits(n)?;
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let rho = DensityMatrix { n_qubits: n, m };
        rho.check_trace()?;
        let (values, _) = hermitian_eigen(&rho.m);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, m: Matrix) -> Self {
        DensityMatrix { n_qubits, m }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        DensityMatrix {
            n_qubits: psi.n_qubits,
            m: Matrix::outer(&psi.amps, &psi.amps),
        }
    }

    /// `1/d`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        DensityMatrix {
            n_qubits,
            m: Matrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub(crate) fn check_trace(&self) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        Ok(())
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.m.trace_product(&self.m).re
    }
}

/// `Tr[ρσ]`, clamped to `[0, 1]` when within `1e-9` of the boundary.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    rho.check_trace()?;
    sigma.check_trace()?;
    let f = rho.m.trace_product(&sigma.m);
    if f.im.abs() > 1e-9 {
        return Err(Error::SelfCheck("state fidelity has imaginary part"));
    }
    let f = f.re;
    if (-1e-9..0.0).contains(&f) {
        Ok(0.0)
    } else if f > 1.0 && f <= 1.0 + 1e-9 {
        Ok(1.0)
    } else {
        Ok(f)
    }
}

/// Eigenpairs of `ρ` with eigenvalues in descending order.
///
/// Near-degenerate eigenvalues (within `1e-10`) are ordered by the
/// amplitudes of their phase-normalized eigenvectors, compared
/// lexicographically by real then imaginary part, larger first.
pub fn eigendecompose(rho: &DensityMatrix) -> Result<Vec<(f64, StateVector)>> {
    let deviation = rho.m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let d = rho.dim();
    let (values, vecs) = hermitian_eigen(&rho.m);
    let mut pairs: Vec<(f64, StateVector)> = (0..d)
        .map(|c| {
            let col: Vec<Complex64> = (0..d).map(|r| vecs[(r, c)]).collect();
            (
                values[c],
                StateVector::normalized_canonical(col, rho.n_qubits),
            )
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end - 1].0 - pairs[end].0).abs() < 1e-10 {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| compare_vectors(&b.1, &a.1));
        start = end;
    }
    Ok(pairs)
}

fn compare_vectors(a: &StateVector, b: &StateVector) -> Ordering {
    for (x, y) in a.amps.iter().zip(&b.amps) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(entries: &[f64]) -> DensityMatrix {
        let d = entries.len();
        DensityMatrix::new(Matrix::from_fn(d, |r, c| {
            if r == c {
                Complex64::new(entries[r], 0.0)
            } else {
                ZERO
            }
        }))
        .unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let zero = DensityMatrix::from_pure(&StateVector::basis(1, 0));
        let one = DensityMatrix::from_pure(&StateVector::basis(1, 1));
        assert_eq!(state_fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(state_fidelity(&zero, &one).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((state_fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-15);
        let two = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            state_fidelity(&zero, &two),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eigendecompose_examples() {
        let pairs = eigendecompose(&DensityMatrix::maximally_mixed(1)).unwrap();
        assert!((pairs[0].0 - 0.5).abs() < 1e-14 && (pairs[1].0 - 0.5).abs() < 1e-14);

        let plus = StateVector::plus(1);
        let pairs = eigendecompose(&DensityMatrix::from_pure(&plus)).unwrap();
        assert!((pairs[0].0 - 1.0).abs() < 1e-14);
        assert!(pairs[1].0.abs() < 1e-14);
        assert!((pairs[0].1.inner(&plus).norm() - 1.0).abs() < 1e-12);

        // depolarized |0><0| at p = 0.2: (1 - p) + p/2, p/2
        let pairs = eigendecompose(&diag(&[0.9, 0.1])).unwrap();
        assert!((pairs[0].0 - 0.9).abs() < 1e-14);
        assert!((pairs[1].0 - 0.1).abs() < 1e-14);
    }

    #[test]
    fn eigendecompose_reconstructs_and_is_deterministic() {
        // mixture of two non-orthogonal pure states on two qubits
        let a = StateVector::plus(2);
        let b = StateVector::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ])
        .unwrap();
        let m = DensityMatrix::from_pure(&a)
            .matrix()
            .scale(Complex64::new(0.3, 0.0))
            .add(
                &DensityMatrix::from_pure(&b)
                    .matrix()
                    .scale(Complex64::new(0.7, 0.0)),
            );
        let rho = DensityMatrix::new(m).unwrap();
        let pairs = eigendecompose(&rho).unwrap();
        let total: f64 = pairs.iter().map(|p| p.0).sum();
        assert!((total - 1.0).abs() < 1e-8);
        let mut rebuilt = Matrix::zeros(4);
        for (lambda, phi) in &pairs {
            let proj = Matrix::outer(phi.amplitudes(), phi.amplitudes());
            rebuilt = rebuilt.add(&proj.scale(Complex64::new(*lambda, 0.0)));
        }
        assert!(rebuilt.max_abs_diff(rho.matrix()) < 1e-8);
        assert!(pairs.windows(2).all(|w| w[0].0 >= w[1].0));
        assert_eq!(pairs, eigendecompose(&rho).unwrap());
        let purity: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
        assert!((purity - rho.purity()).abs() < 1e-10 && purity <= 1.0 + 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        let nonherm = Matrix::from_fn(2, |r, c| match (r, c) {
            (0, 0) => Complex64::new(0.5, 0.0),
            (1, 1) => Complex64::new(0.5, 0.0),
            (0, 1) => Complex64::new(0.1, 0.0),
            _ => ZERO,
        });
        assert!(matches!(
            DensityMatrix::new(nonherm),
            Err(Error::NotHermitian { .. })
        ));
        let badtrace = Matrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(badtrace),
            Err(Error::BadTrace { .. })
        ));
        let negative = Matrix::from_fn(2, |r, c| match (r, c) {
            (0, 0) => Complex64::new(1.5, 0.0),
            (1, 1) => Complex64::new(-0.5, 0.0),
            _ => ZERO,
        });
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::NotPositive { .. })
        ));
        assert!(StateVector::new(vec![ONE, ONE]).is_err());
    }

    #[test]
    fn fidelity_is_symmetric() {
        let a = DensityMatrix::from_pure(&StateVector::plus(1));
        let b = diag(&[0.7, 0.3]);
        let ab = state_fidelity(&a, &b).unwrap();
        let ba = state_fidelity(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-15);
        assert!((ab - 0.5).abs() < 1e-15);
    }
}
