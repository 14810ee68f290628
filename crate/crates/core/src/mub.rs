//! The `d + 1` mutually unbiased bases of `d = 2^n`, built from the
//! finite-field partition of the nontrivial Pauli strings into maximal
//! commuting classes.
//!
//! Basis `0` is the eigenbasis of the Z-type class (the canonical basis),
//! basis `1` the eigenbasis of the X-type class (the Hadamard basis), and
//! basis `a + 1` for field element `a = 1, …, d-1` the eigenbasis of the
//! class `{ X(u) Z(a·u) }`. Within a basis, state `s` is the common
//! eigenvector whose generator eigenvalues are `(-1)^{s_m}`, with generator
//! `m` on bit `n - 1 - m` of `s`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::pauli::{commutes, pauli_product, PauliString};
use crate::state::StateVector;

pub const MUB_TOL: f64 = 1e-9;

/// Irreducible polynomials over GF(2), indexed by degree.
const IRREDUCIBLE: [u32; 11] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10000011,
    0b100011011,
    0b1000010001,
    0b10000001001,
];

/// Arithmetic in GF(2^n) with elements as polynomial-basis bit patterns.
#[derive(Debug, Clone, Copy)]
struct Gf2n {
    n: usize,
    modulus: u32,
}

impl Gf2n {
    fn new(n: usize) -> Self {
        Gf2n {
            n,
            modulus: IRREDUCIBLE[n],
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let mut acc: u64 = 0;
        for i in 0..self.n {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u64) << i;
            }
        }
        for bit in (self.n..2 * self.n).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= (self.modulus as u64) << (bit - self.n);
            }
        }
        acc as u32
    }

    /// Absolute trace `y + y² + y⁴ + … + y^{2^{n-1}}`, an element of GF(2).
    fn trace(&self, y: u32) -> u32 {
        let mut acc = 0;
        let mut power = y;
        for _ in 0..self.n {
            acc ^= power;
            power = self.mul(power, power);
        }
        debug_assert!(acc <= 1);
        acc & 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    n_qubits: usize,
    bases: Vec<Vec<StateVector>>,
    classes: Vec<Vec<PauliString>>,
    generators: Vec<Vec<PauliString>>,
}

impl MubFamily {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn bases(&self) -> &[Vec<StateVector>] {
        &self.bases
    }

    pub fn basis(&self, index: usize) -> &[StateVector] {
        &self.bases[index]
    }

    /// The `d - 1` nontrivial strings of each class, same order as the bases.
    pub fn classes(&self) -> &[Vec<PauliString>] {
        &self.classes
    }

    /// The `n` independent generators of each class.
    pub fn generators(&self) -> &[Vec<PauliString>] {
        &self.generators
    }

    /// All `d(d+1)` states, basis-major.
    pub fn states(&self) -> impl Iterator<Item = &StateVector> {
        self.bases.iter().flatten()
    }

    /// Any two distinct bases of the family.
    pub fn basis_pair(
        &self,
        first: usize,
        second: usize,
    ) -> Result<(&[StateVector], &[StateVector])> {
        let count = self.bases.len();
        if first >= count || second >= count || first == second {
            return Err(Error::ParameterOutOfRange {
                name: "basis index",
                value: if first >= count { first } else { second } as f64,
            });
        }
        Ok((&self.bases[first], &self.bases[second]))
    }

    #[cfg(test)]
    pub(crate) fn bases_mut(&mut self) -> &mut Vec<Vec<StateVector>> {
        &mut self.bases
    }
}

fn qubit_bit(n: usize, qubit: usize) -> u32 {
    1u32 << (n - 1 - qubit)
}

/// Maps field coordinates (bit `i` = coefficient of `x^i`) to a qubit mask.
fn coords_to_mask(n: usize, coords: u32) -> u32 {
    (0..n)
        .filter(|i| (coords >> i) & 1 == 1)
        .fold(0, |m, i| m | qubit_bit(n, i))
}

/// Class member for field elements `a` (slope) and `u` (nonzero).
fn field_member(field: &Gf2n, a: u32, u: u32) -> PauliString {
    let n = field.n;
    let au = field.mul(a, u);
    let z_coords = (0..n)
        .filter(|&i| field.trace(field.mul(1 << i, au)) == 1)
        .fold(0u32, |m, i| m | (1 << i));
    PauliString::new(n, coords_to_mask(n, u), coords_to_mask(n, z_coords))
        .expect("masks fit qubit count")
}

fn eigenbasis(n: usize, generators: &[PauliString], z_type: bool) -> Result<Vec<StateVector>> {
    let d = 1usize << n;
    let reference = if z_type {
        StateVector::plus(n)
    } else {
        StateVector::basis(n, 0)
    };
    let mut states = Vec::with_capacity(d);
    for s in 0..d {
        let project = |start: &[Complex64]| {
            let mut v = start.to_vec();
            for (m, g) in generators.iter().enumerate() {
                let sign = if (s >> (n - 1 - m)) & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let gv = g.apply(&v);
                for (a, b) in v.iter_mut().zip(gv) {
                    *a = (*a + b * sign) * 0.5;
                }
            }
            v
        };
        let mut v = project(reference.amplitudes());
        let mut fallback = 0;
        while v.iter().map(|a| a.norm_sqr()).sum::<f64>() < 0.5 / d as f64 {
            if fallback == d {
                return Err(Error::SelfCheck("no eigenvector found for MUB class"));
            }
            v = project(StateVector::basis(n, fallback).amplitudes());
            fallback += 1;
        }
        states.push(StateVector::normalized_canonical(v, n));
    }
    Ok(states)
}

/// Builds and self-verifies the MUB family for `1 ≤ n ≤ 10`.
///
/// Memory and time grow as `d³`; beyond `n ≈ 7` this is expensive.
pub fn build_mub_family(n: usize) -> Result<MubFamily> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    if n > crate::MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            what: "MUB family",
            max: crate::MAX_DENSE_QUBITS,
            requested: n,
        });
    }
    let d = 1u32 << n;
    let field = Gf2n::new(n);

    let mut classes = Vec::with_capacity(d as usize + 1);
    let mut generators = Vec::with_capacity(d as usize + 1);

    let z_gens: Vec<PauliString> = (0..n)
        .map(|q| PauliString::new(n, 0, qubit_bit(n, q)).unwrap())
        .collect();
    let z_class: Vec<PauliString> = (1..d)
        .map(|w| PauliString::new(n, 0, coords_to_mask(n, w)).unwrap())
        .collect();
    classes.push(z_class);
    generators.push(z_gens);

    for a in 0..d {
        classes.push((1..d).map(|u| field_member(&field, a, u)).collect());
        generators.push((0..n).map(|m| field_member(&field, a, 1 << m)).collect());
    }

    let bases = generators
        .iter()
        .enumerate()
        .map(|(idx, gens)| eigenbasis(n, gens, idx == 0))
        .collect::<Result<Vec<_>>>()?;

    let family = MubFamily {
        n_qubits: n,
        bases,
        classes,
        generators,
    };
    if !verify_mub(&family) {
        return Err(Error::SelfCheck("MUB family failed verification"));
    }
    if !eigenstructure_holds(&family) {
        return Err(Error::SelfCheck(
            "MUB basis is not an eigenbasis of its class",
        ));
    }
    Ok(family)
}

/// Orthonormality within bases, unbiasedness across bases, and the class
/// partition with closure under products, all at tolerance `1e-9`.
pub fn verify_mub(f: &MubFamily) -> bool {
    let n = f.n_qubits;
    let d = 1usize << n;
    if f.bases.len() != d + 1 || f.classes.len() != d + 1 {
        return false;
    }
    if f.bases
        .iter()
        .any(|b| b.len() != d || b.iter().any(|s| s.dim() != d))
    {
        return false;
    }

    for (a, basis_a) in f.bases.iter().enumerate() {
        for (i, psi) in basis_a.iter().enumerate() {
            for (k, phi) in basis_a.iter().enumerate().skip(i) {
                let overlap = psi.inner(phi);
                let expected = if i == k { 1.0 } else { 0.0 };
                if (overlap - Complex64::new(expected, 0.0)).norm() > MUB_TOL {
                    return false;
                }
            }
            for basis_b in f.bases.iter().skip(a + 1) {
                for phi in basis_b {
                    if (psi.inner(phi).norm_sqr() - 1.0 / d as f64).abs() > MUB_TOL {
                        return false;
                    }
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    for class in &f.classes {
        if class.len() != d - 1 {
            return false;
        }
        let members: BTreeSet<(u32, u32)> =
            class.iter().map(|w| (w.x_mask(), w.z_mask())).collect();
        if members.len() != d - 1 || members.contains(&(0, 0)) {
            return false;
        }
        for a in class {
            for b in class {
                match (commutes(a, b), pauli_product(a, b)) {
                    (Ok(true), Ok((c, _))) => {
                        if !c.is_identity() && !members.contains(&(c.x_mask(), c.z_mask())) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        for m in members {
            if !seen.insert(m) {
                return false;
            }
        }
    }
    seen.len() == d * d - 1
}

/// Every class member has every state of its basis as a ±1 eigenvector
/// (residual norm below `1e-9`).
pub fn eigenstructure_holds(f: &MubFamily) -> bool {
    for (basis, class) in f.bases.iter().zip(&f.classes) {
        for psi in basis {
            for w in class {
                let wpsi = w.apply(psi.amplitudes());
                let ev = w.expectation_raw(psi.amplitudes()).re;
                if (ev.abs() - 1.0).abs() > MUB_TOL {
                    return false;
                }
                let residual: f64 = wpsi
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| (a - b * ev).norm_sqr())
                    .sum();
                if libm::sqrt(residual) > MUB_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// The canonical and Hadamard bases: two of the three separable MUBs.
pub fn classical_bases(f: &MubFamily) -> (&[StateVector], &[StateVector]) {
    (&f.bases[0], &f.bases[1])
}

/// Canonical basis `{|s>}` without building a family.
pub fn computational_basis(n: usize) -> Vec<StateVector> {
    (0..1usize << n).map(|s| StateVector::basis(n, s)).collect()
}

/// `{H^{⊗n}|s>}` without building a family.
pub fn hadamard_basis(n: usize) -> Vec<StateVector> {
    let d = 1usize << n;
    let norm = 1.0 / libm::sqrt(d as f64);
    (0..d)
        .map(|s| {
            let mut amps = vec![ZERO; d];
            for (y, a) in amps.iter_mut().enumerate() {
                let sign = if (s & y).count_ones() % 2 == 0 {
                    norm
                } else {
                    -norm
                };
                *a = Complex64::new(sign, 0.0);
            }
            StateVector::from_amplitudes_unchecked(n, amps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn polynomials_are_irreducible() {
        for (n, &p) in IRREDUCIBLE.iter().enumerate().skip(1) {
            let p = p as u64;
            assert_eq!(63 - p.leading_zeros() as usize, n);
            // no factor of degree 1..=n/2
            for q in 2u64..(1 << (n / 2 + 1)) {
                let mut r = p;
                let dq = 63 - q.leading_zeros();
                while r != 0 && 63 - r.leading_zeros() >= dq {
                    r ^= q << (63 - r.leading_zeros() - dq);
                }
                assert!(r != 0 || q == p, "n = {n}, factor {q:b}");
            }
        }
    }

    #[test]
    fn trace_form_is_nondegenerate() {
        for n in 1..=6 {
            let f = Gf2n::new(n);
            let ones = (1..1u32 << n).filter(|&y| f.trace(y) == 1).count();
            assert_eq!(ones, 1 << (n - 1));
        }
    }

    #[test]
    fn single_qubit_family_is_z_x_y() {
        let f = build_mub_family(1).unwrap();
        let labels: Vec<_> = f.classes().iter().map(|c| c[0].to_string()).collect();
        assert_eq!(labels, ["Z", "X", "Y"]);
        assert_eq!(f.basis(0), computational_basis(1).as_slice());
        assert_eq!(f.basis(1), hadamard_basis(1).as_slice());
        for a in 0..3 {
            for b in a + 1..3 {
                for psi in f.basis(a) {
                    for phi in f.basis(b) {
                        assert!((psi.inner(phi).norm_sqr() - 0.5).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn two_qubit_classes_partition_nontrivial_strings() {
        let f = build_mub_family(2).unwrap();
        assert_eq!(f.bases().len(), 5);
        let mut all = BTreeSet::new();
        for class in f.classes() {
            assert_eq!(class.len(), 3);
            for w in class {
                assert!(all.insert(w.index()));
            }
        }
        assert_eq!(all.len(), 15);
        assert!(!all.contains(&0));
    }

    #[test]
    fn families_verify_up_to_four_qubits() {
        for n in 1..=4 {
            let f = build_mub_family(n).unwrap();
            assert!(verify_mub(&f));
            assert!(eigenstructure_holds(&f));
            let (b1, b2) = classical_bases(&f);
            assert_eq!(b1, computational_basis(n).as_slice());
            assert_eq!(b2, hadamard_basis(n).as_slice());
        }
    }

    #[test]
    fn state_order_follows_generator_eigenvalues() {
        let f = build_mub_family(3).unwrap();
        for (basis, gens) in f.bases().iter().zip(f.generators()) {
            for (s, psi) in basis.iter().enumerate() {
                for (m, g) in gens.iter().enumerate() {
                    let expected = if (s >> (3 - 1 - m)) & 1 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    let ev = g.expectation_raw(psi.amplitudes()).re;
                    assert!((ev - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn corrupted_family_fails_verification() {
        let mut f = build_mub_family(1).unwrap();
        f.bases_mut()[1][0] = StateVector::basis(1, 0);
        assert!(!verify_mub(&f));
    }

    #[test]
    fn out_of_range_sizes_rejected() {
        assert!(matches!(build_mub_family(0), Err(Error::ZeroQubits)));
        assert!(matches!(
            build_mub_family(11),
            Err(Error::TooManyQubits { .. })
        ));
        let f = build_mub_family(2).unwrap();
        assert!(f.basis_pair(0, 0).is_err());
        assert!(f.basis_pair(0, 5).is_err());
        assert!(f.basis_pair(2, 4).is_ok());
    }
}
