//! Exact algebra of n-qubit Pauli strings in the symplectic (x, z) mask
//! representation.
//!
//! Qubit `q` of an `n`-qubit string lives at mask bit `n - 1 - q`, which is
//! the same bit that qubit `q` occupies in a canonical basis index. Qubit 0
//! is therefore the leftmost factor of the tensor product and the leftmost
//! character of the text label.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, I, ONE, ZERO};
use crate::state::{DensityMatrix, StateVector};

/// Largest qubit count representable by the masks.
pub const MAX_PAULI_QUBITS: usize = 32;

/// Tolerance on the imaginary residue of an expectation value.
const IMAG_TOL: f64 = 1e-10;

/// A power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(k: u32) -> Phase {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u32 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        i_pow(self.power())
    }
}

impl core::ops::Mul for Phase {
    type Output = Phase;

    // powers of i add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Phase) -> Phase {
        Phase::from_power(self.power() + other.power())
    }
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Hermitian n-qubit Pauli string `±ω¹⊗…⊗ωⁿ` with `ω ∈ {1, X, Y, Z}`.
///
/// Per qubit the letter is decoded from the two masks:
/// `(x, z) = (0,0) → 1`, `(1,0) → X`, `(1,1) → Y`, `(0,1) → Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: u8,
    x: u32,
    z: u32,
    negative: bool,
}

impl PauliString {
    pub fn new(n_qubits: usize, x_mask: u32, z_mask: u32) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let full = full_mask(n_qubits);
        if x_mask & !full != 0 || z_mask & !full != 0 {
            return Err(Error::ParameterOutOfRange {
                name: "pauli mask",
                value: (x_mask | z_mask) as f64,
            });
        }
        Ok(PauliString {
            n_qubits: n_qubits as u8,
            x: x_mask,
            z: z_mask,
            negative: false,
        })
    }

    fn check_n(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_qubits > MAX_PAULI_QUBITS {
            return Err(Error::TooManyQubits {
                what: "Pauli string",
                max: MAX_PAULI_QUBITS,
                requested: n_qubits,
            });
        }
        Ok(())
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            n_qubits: n_qubits as u8,
            x: 0,
            z: 0,
            negative: false,
        }
    }

    /// Single-letter string acting on `qubit`. `letter` is one of `XYZ`.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        Self::check_n(n_qubits)?;
        if qubit >= n_qubits {
            return Err(Error::ParameterOutOfRange {
                name: "qubit",
                value: qubit as f64,
            });
        }
        let bit = 1u32 << (n_qubits - 1 - qubit);
        let (x, z) = match letter {
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            _ => return Err(Error::InvalidPauliLabel(String::from(letter))),
        };
        Self::new(n_qubits, x, z)
    }

    /// The string with enumeration index `k ∈ [0, 4^n)`: base-4 digits in
    /// qubit order, qubit 0 most significant, digit order `1, X, Y, Z`.
    pub fn from_index(n_qubits: usize, k: usize) -> Self {
        let mut x = 0u32;
        let mut z = 0u32;
        for pos in 0..n_qubits {
            // pos counts from the least significant digit, i.e. qubit n-1-pos
            let digit = (k >> (2 * pos)) & 3;
            let bit = 1u32 << pos;
            match digit {
                1 => x |= bit,
                2 => {
                    x |= bit;
                    z |= bit
                }
                3 => z |= bit,
                _ => {}
            }
        }
        PauliString {
            n_qubits: n_qubits as u8,
            x,
            z,
            negative: false,
        }
    }

    /// Inverse of [`PauliString::from_index`]; the sign is ignored.
    pub fn index(&self) -> usize {
        let mut k = 0usize;
        for pos in 0..self.n_qubits as usize {
            let digit = match ((self.x >> pos) & 1, (self.z >> pos) & 1) {
                (0, 0) => 0,
                (1, 0) => 1,
                (1, 1) => 2,
                _ => 3,
            };
            k |= digit << (2 * pos);
        }
        k
    }

    /// All `4^n` unsigned strings in index order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n_qubits)).map(move |k| PauliString::from_index(n_qubits, k))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn unsigned(mut self) -> Self {
        self.negative = false;
        self
    }

    pub fn letter(&self, qubit: usize) -> char {
        let pos = self.n_qubits as usize - 1 - qubit;
        match ((self.x >> pos) & 1, (self.z >> pos) & 1) {
            (0, 0) => '1',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// Applies the string to canonical basis state `y`:
    /// returns `(c, y')` with `W|y> = c|y'>`.
    #[inline]
    pub fn apply_basis(&self, y: usize) -> (Complex64, usize) {
        let y32 = y as u32;
        let mut k = (self.x & self.z).count_ones() + 2 * (self.z & y32).count_ones();
        if self.negative {
            k += 2;
        }
        (i_pow(k), (y32 ^ self.x) as usize)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        for (y, amp) in v.iter().enumerate() {
            let (c, y2) = self.apply_basis(y);
            out[y2] += c * amp;
        }
        out
    }

    /// Dense `2^n × 2^n` realization, for tests and reference computations.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.n_qubits() > crate::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "dense Pauli matrix",
                max: crate::MAX_DENSE_QUBITS,
                requested: self.n_qubits(),
            });
        }
        let d = self.dim();
        let mut m = Matrix::zeros(d);
        for y in 0..d {
            let (c, y2) = self.apply_basis(y);
            m[(y2, y)] = c;
        }
        Ok(m)
    }

    /// `<ψ|W|ψ>` without validation; callers guarantee matching dimension.
    #[inline]
    pub(crate) fn expectation_raw(&self, amps: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for (y, amp) in amps.iter().enumerate() {
            let (c, y2) = self.apply_basis(y);
            acc += amps[y2].conj() * c * amp;
        }
        acc
    }

    /// `Tr[W M]` for an arbitrary square matrix `M` of matching dimension.
    pub(crate) fn trace_with(&self, m: &Matrix) -> Complex64 {
        let mut acc = ZERO;
        for y in 0..m.dim() {
            let (c, y2) = self.apply_basis(y);
            acc += c * m[(y, y2)];
        }
        acc
    }

    /// `d`-th canonical eigenstate of the string: the tensor product of
    /// single-qubit eigenvectors of the local letters, selected by the bits
    /// of `a` (qubit 0 on the high bit). Returns the state and its eigenvalue.
    pub fn eigenstate(&self, a: usize) -> (StateVector, i8) {
        let n = self.n_qubits();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ONE];
        let mut eigenvalue: i8 = if self.negative { -1 } else { 1 };
        for q in 0..n {
            let bit = (a >> (n - 1 - q)) & 1;
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            let local: [Complex64; 2] = match self.letter(q) {
                '1' => {
                    if bit == 0 {
                        [ONE, ZERO]
                    } else {
                        [ZERO, ONE]
                    }
                }
                'Z' => {
                    eigenvalue *= sign as i8;
                    if bit == 0 {
                        [ONE, ZERO]
                    } else {
                        [ZERO, ONE]
                    }
                }
                'X' => {
                    eigenvalue *= sign as i8;
                    [Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0)]
                }
                _ => {
                    eigenvalue *= sign as i8;
                    [Complex64::new(h, 0.0), Complex64::new(0.0, sign * h)]
                }
            };
            let mut next = Vec::with_capacity(amps.len() * 2);
            for amp in &amps {
                next.push(amp * local[0]);
                next.push(amp * local[1]);
            }
            amps = next;
        }
        (StateVector::from_amplitudes_unchecked(n, amps), eigenvalue)
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn check_same(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::QubitMismatch {
            left: a.n_qubits(),
            right: b.n_qubits(),
        });
    }
    Ok(())
}

/// Returns `(c, φ)` with `a·b = φ·c`, where `c` carries no sign.
pub fn pauli_product(a: &PauliString, b: &PauliString) -> Result<(PauliString, Phase)> {
    check_same(a, b)?;
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    let mut k = (a.x & a.z).count_ones() + (b.x & b.z).count_ones() + 2 * (a.z & b.x).count_ones();
    k += 4 * 32 - (x & z).count_ones();
    if a.negative {
        k += 2;
    }
    if b.negative {
        k += 2;
    }
    let c = PauliString {
        n_qubits: a.n_qubits,
        x,
        z,
        negative: false,
    };
    Ok((c, Phase::from_power(k)))
}

/// True iff the symplectic product of the two strings is even.
pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    check_same(a, b)?;
    Ok(((a.x & b.z).count_ones() + (a.z & b.x).count_ones()).is_multiple_of(2))
}

/// `<ψ|W|ψ>` for a normalized state.
pub fn expectation(w: &PauliString, psi: &StateVector) -> Result<f64> {
    if psi.n_qubits() != w.n_qubits() {
        return Err(Error::QubitMismatch {
            left: w.n_qubits(),
            right: psi.n_qubits(),
        });
    }
    psi.check_normalized()?;
    let e = w.expectation_raw(psi.amplitudes());
    debug_assert!(e.im.abs() < IMAG_TOL, "imaginary residue {}", e.im);
    if e.im.abs() >= IMAG_TOL {
        return Err(Error::SelfCheck("Pauli expectation has imaginary part"));
    }
    Ok(e.re)
}

/// `Tr[W ρ]`.
pub fn expectation_dm(w: &PauliString, rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != w.n_qubits() {
        return Err(Error::QubitMismatch {
            left: w.n_qubits(),
            right: rho.n_qubits(),
        });
    }
    rho.check_trace()?;
    let e = w.trace_with(rho.matrix());
    if e.im.abs() >= IMAG_TOL {
        return Err(Error::SelfCheck("Pauli expectation has imaginary part"));
    }
    Ok(e.re)
}

/// A uniformly random member of the canonical eigenbasis of `w`.
pub fn sample_eigenstate<R: Rng + ?Sized>(w: &PauliString, rng: &mut R) -> (StateVector, i8) {
    let a = rng.random_range(0..w.dim());
    w.eigenstate(a)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_PAULI_QUBITS {
            return Err(Error::InvalidPauliLabel(String::from(s)));
        }
        let mut x = 0u32;
        let mut z = 0u32;
        for (q, ch) in body.chars().enumerate() {
            let bit = 1u32 << (n - 1 - q);
            match ch {
                '1' | 'I' => {}
                'X' => x |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit
                }
                'Z' => z |= bit,
                _ => return Err(Error::InvalidPauliLabel(String::from(s))),
            }
        }
        let mut p = PauliString::new(n, x, z)?;
        p.negative = negative;
        Ok(p)
    }
}
