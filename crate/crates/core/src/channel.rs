//! CPTP maps as explicit Kraus sets, standard noise models, and Clifford
//! detection by generator conjugation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Unitary, ONE, UNITARY_TOL, ZERO};
use crate::pauli::PauliString;
use crate::state::DensityMatrix;

/// Largest qubit count accepted by [`is_clifford`].
pub const MAX_CLIFFORD_CHECK_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    n_qubits: usize,
    kraus: Vec<Matrix>,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::ParameterOutOfRange { name, value });
    }
    Ok(())
}

impl QuantumChannel {
    /// Validates that the Kraus set is nonempty, square, and trace
    /// preserving to within `1e-8`.
    pub fn new(kraus: Vec<Matrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyDistribution)?;
        let d = first.dim();
        let n = first.qubits().ok_or(Error::DimensionMismatch {
            expected: d.next_power_of_two(),
            actual: d,
        })?;
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        if n > crate::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "channel",
                max: crate::MAX_DENSE_QUBITS,
                requested: n,
            });
        }
        if let Some(bad) = kraus.iter().find(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: bad.dim(),
            });
        }
        let ch = QuantumChannel { n_qubits: n, kraus };
        let deviation = ch.trace_preservation_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    fn trace_preservation_deviation(&self) -> f64 {
        let d = 1 << self.n_qubits;
        let mut acc = Matrix::zeros(d);
        for k in &self.kraus {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.max_abs_diff(&Matrix::identity(d))
    }

    pub fn identity(n_qubits: usize) -> Self {
        QuantumChannel {
            n_qubits,
            kraus: vec![Matrix::identity(1 << n_qubits)],
        }
    }

    pub fn unitary_channel(u: &Unitary) -> Self {
        QuantumChannel {
            n_qubits: u.n_qubits(),
            kraus: vec![u.matrix().clone()],
        }
    }

    /// Global depolarizing map `ρ → (1-p)ρ + p·1/d`.
    pub fn depolarizing(n_qubits: usize, p: f64) -> Result<Self> {
        check_probability("depolarizing p", p)?;
        let d2 = (1usize << (2 * n_qubits)) as f64;
        if p == 0.0 {
            return Ok(Self::identity(n_qubits));
        }
        let kraus = PauliString::all(n_qubits)
            .map(|w| {
                let weight = if w.is_identity() {
                    1.0 - p + p / d2
                } else {
                    p / d2
                };
                w.to_matrix().map(|m| m.scale(real(libm::sqrt(weight))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kraus)
    }

    /// Independent phase flips on every qubit; single-qubit coherences are
    /// multiplied by `1 - γ`.
    pub fn dephasing(n_qubits: usize, gamma: f64) -> Result<Self> {
        check_probability("dephasing gamma", gamma)?;
        let z = Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]])?;
        let single = [
            Matrix::identity(2).scale(real(libm::sqrt(1.0 - gamma / 2.0))),
            z.scale(real(libm::sqrt(gamma / 2.0))),
        ];
        Self::new(tensor_power(&single, n_qubits))
    }

    /// Independent amplitude damping `|1> → |0>` with probability `γ` on
    /// every qubit.
    pub fn amplitude_damping(n_qubits: usize, gamma: f64) -> Result<Self> {
        check_probability("amplitude damping gamma", gamma)?;
        let single = [
            Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, real(libm::sqrt(1.0 - gamma))]])?,
            Matrix::from_rows(&[vec![ZERO, real(libm::sqrt(gamma))], vec![ZERO, ZERO]])?,
        ];
        Self::new(tensor_power(&single, n_qubits))
    }

    /// Coherent error `exp(-iθW/2)` about the Pauli axis `W`.
    pub fn coherent_overrotation(axis: &PauliString, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "overrotation angle",
                value: angle,
            });
        }
        let d = axis.dim();
        let (s, c) = libm::sincos(angle / 2.0);
        let m = Matrix::identity(d)
            .scale(real(c))
            .add(&axis.to_matrix()?.scale(Complex64::new(0.0, -s)));
        Ok(Self::unitary_channel(&Unitary::new(m)?))
    }

    /// `b` applied after `a`.
    pub fn compose(a: &QuantumChannel, b: &QuantumChannel) -> Result<Self> {
        if a.n_qubits != b.n_qubits {
            return Err(Error::QubitMismatch {
                left: a.n_qubits,
                right: b.n_qubits,
            });
        }
        let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
        for kb in &b.kraus {
            for ka in &a.kraus {
                kraus.push(kb.mul(ka));
            }
        }
        Ok(QuantumChannel {
            n_qubits: a.n_qubits,
            kraus,
        })
    }

    /// Convex mixture `(1 - q)·a + q·b`.
    pub fn mixture(a: &QuantumChannel, b: &QuantumChannel, q: f64) -> Result<Self> {
        check_probability("mixture weight", q)?;
        if a.n_qubits != b.n_qubits {
            return Err(Error::QubitMismatch {
                left: a.n_qubits,
                right: b.n_qubits,
            });
        }
        let wa = real(libm::sqrt(1.0 - q));
        let wb = real(libm::sqrt(q));
        let kraus = a
            .kraus
            .iter()
            .map(|k| k.scale(wa))
            .chain(b.kraus.iter().map(|k| k.scale(wb)))
            .collect();
        Ok(QuantumChannel {
            n_qubits: a.n_qubits,
            kraus,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn kraus_ops(&self) -> &[Matrix] {
        &self.kraus
    }

    /// `Σ K ρ K†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: rho.dim(),
            });
        }
        Ok(DensityMatrix::from_matrix_unchecked(
            self.n_qubits,
            self.apply_operator(rho.matrix()),
        ))
    }

    /// Linear extension of the map to an arbitrary operator.
    pub fn apply_operator(&self, m: &Matrix) -> Matrix {
        let mut acc = Matrix::zeros(m.dim());
        for k in &self.kraus {
            acc = acc.add(&k.conjugate(m));
        }
        acc
    }
}

fn tensor_power(single: &[Matrix], n: usize) -> Vec<Matrix> {
    let mut ops = vec![Matrix::identity(1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(ops.len() * single.len());
        for op in &ops {
            for s in single {
                next.push(op.kron(s));
            }
        }
        ops = next;
    }
    ops
}

/// If `U P U†` equals `±W` for a single Pauli string `W` (within `1e-8`
/// entrywise), returns the signed string.
pub fn conjugate_pauli(u: &Unitary, p: &PauliString) -> Result<Option<PauliString>> {
    if p.n_qubits() != u.n_qubits() {
        return Err(Error::QubitMismatch {
            left: u.n_qubits(),
            right: p.n_qubits(),
        });
    }
    let d = u.dim();
    let image = u.matrix().conjugate(&p.to_matrix()?);
    // the only candidate is the string with the largest coefficient
    let (best, coeff) = PauliString::all(u.n_qubits())
        .map(|w| (w, w.trace_with(&image) / d as f64))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("at least one Pauli string");
    if (coeff.norm() - 1.0).abs() > UNITARY_TOL || coeff.im.abs() > UNITARY_TOL {
        return Ok(None);
    }
    let signed = if coeff.re < 0.0 { best.negated() } else { best };
    if signed.to_matrix()?.max_abs_diff(&image) > UNITARY_TOL {
        return Ok(None);
    }
    Ok(Some(signed))
}

/// True iff `U` maps each generator `X_q`, `Z_q` to a signed Pauli string.
pub fn is_clifford(u: &Unitary) -> Result<bool> {
    let n = u.n_qubits();
    if n > MAX_CLIFFORD_CHECK_QUBITS {
        return Err(Error::TooManyQubits {
            what: "Clifford check",
            max: MAX_CLIFFORD_CHECK_QUBITS,
            requested: n,
        });
    }
    for q in 0..n {
        for letter in ['X', 'Z'] {
            let p = PauliString::single(n, q, letter)?;
            if conjugate_pauli(u, &p)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
