//! Named gates and random ensembles (Haar unitaries, stabilizer circuits,
//! Stinespring channels, mixed states).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::channel::QuantumChannel;
use crate::linalg::{Matrix, Unitary, I, ONE, ZERO};
use crate::state::{DensityMatrix, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unitary(m: Matrix) -> Unitary {
    Unitary::new(m).expect("built-in gate is unitary")
}

pub fn hadamard() -> Unitary {
    let h = FRAC_1_SQRT_2;
    unitary(Matrix::from_rows(&[vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]).unwrap())
}

pub fn phase_s() -> Unitary {
    unitary(Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, I]]).unwrap())
}

pub fn t_gate() -> Unitary {
    let (s, co) = libm::sincos(PI / 4.0);
    unitary(Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, c(co, s)]]).unwrap())
}

pub fn pauli_x() -> Unitary {
    unitary(Matrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap())
}

pub fn pauli_y() -> Unitary {
    unitary(Matrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap())
}

pub fn pauli_z() -> Unitary {
    unitary(Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]).unwrap())
}

/// Two-qubit CNOT, control on qubit 0.
pub fn cnot() -> Unitary {
    cnot_on(2, 0, 1)
}

/// CNOT on `n` qubits with the given control and target.
pub fn cnot_on(n: usize, control: usize, target: usize) -> Unitary {
    assert!(control < n && target < n && control != target);
    let d = 1usize << n;
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    unitary(Matrix::from_fn(d, |r, col| {
        let image = if col & cbit != 0 { col ^ tbit } else { col };
        if r == image {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Single-qubit gate acting on `qubit` of an `n`-qubit register.
pub fn on_qubit(gate: &Unitary, n: usize, qubit: usize) -> Unitary {
    assert_eq!(gate.n_qubits(), 1);
    assert!(qubit < n);
    let mut acc = Unitary::identity(0);
    for q in 0..n {
        let factor = if q == qubit {
            gate.clone()
        } else {
            Unitary::identity(1)
        };
        acc = if q == 0 { factor } else { acc.kron(&factor) };
    }
    acc
}

/// `gate^{⊗n}` for a single-qubit gate.
pub fn tensor_power(gate: &Unitary, n: usize) -> Unitary {
    assert_eq!(gate.n_qubits(), 1);
    let mut acc = gate.clone();
    for _ in 1..n {
        acc = acc.kron(gate);
    }
    acc
}

/// Quantum Fourier transform on `n` qubits.
pub fn qft(n: usize) -> Unitary {
    let d = 1usize << n;
    let norm = 1.0 / libm::sqrt(d as f64);
    unitary(Matrix::from_fn(d, |r, col| {
        let angle = 2.0 * PI * ((r * col) % d) as f64 / d as f64;
        let (s, co) = libm::sincos(angle);
        c(norm * co, norm * s)
    }))
}

/// Standard normal deviate by Box-Muller.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
}

fn ginibre_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    (0..cols)
        .map(|_| (0..rows).map(|_| c(gaussian(rng), gaussian(rng))).collect())
        .collect()
}

/// Modified Gram-Schmidt; on Ginibre input this yields Haar-distributed
/// orthonormal columns.
fn orthonormalize(mut cols: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    for k in 0..cols.len() {
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let proj: Complex64 = done[j]
                .iter()
                .zip(&rest[0])
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (x, q) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * q;
            }
        }
        let norm = libm::sqrt(cols[k].iter().map(|a| a.norm_sqr()).sum::<f64>());
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    cols
}

/// Haar-random unitary on `n` qubits.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Unitary {
    let d = 1usize << n;
    let cols = orthonormalize(ginibre_columns(d, d, rng));
    unitary(Matrix::from_fn(d, |r, col| cols[col][r]))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    let d = 1usize << n;
    let amps = orthonormalize(ginibre_columns(d, 1, rng)).remove(0);
    StateVector::new(amps).expect("normalized")
}

/// Random full-rank mixed state `G G† / Tr[G G†]`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let d = 1usize << n;
    let g = Matrix::from_fn(d, |_, _| c(gaussian(rng), gaussian(rng)));
    let m = g.mul(&g.adjoint());
    let t = m.trace().re;
    DensityMatrix::new(m.scale(c(1.0 / t, 0.0))).expect("valid density matrix")
}

/// Random channel with `rank` Kraus operators obtained from a Haar-random
/// isometry `C^d → C^{rank·d}`.
pub fn random_channel<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> QuantumChannel {
    let d = 1usize << n;
    let cols = orthonormalize(ginibre_columns(rank * d, d, rng));
    let kraus = (0..rank)
        .map(|m| Matrix::from_fn(d, |r, col| cols[col][m * d + r]))
        .collect();
    QuantumChannel::new(kraus).expect("isometry gives trace-preserving map")
}

/// Random noisy implementation of `u`: the ideal gate followed by a random
/// channel mixed in with weight `strength`.
pub fn random_noisy_gate<R: Rng + ?Sized>(
    u: &Unitary,
    strength: f64,
    rng: &mut R,
) -> QuantumChannel {
    let n = u.n_qubits();
    let noise = QuantumChannel::mixture(
        &QuantumChannel::identity(n),
        &random_channel(n, 2, rng),
        strength,
    )
    .expect("strength in [0, 1]");
    QuantumChannel::compose(&QuantumChannel::unitary_channel(u), &noise).expect("matching sizes")
}

/// Random circuit of `depth` gates drawn from {H, S, CNOT}.
pub fn random_stabilizer_circuit<R: Rng + ?Sized>(n: usize, depth: usize, rng: &mut R) -> Unitary {
    let mut acc = Unitary::identity(n);
    for _ in 0..depth {
        let choice = if n > 1 {
            rng.random_range(0..3)
        } else {
            rng.random_range(0..2)
        };
        let gate = match choice {
            0 => on_qubit(&hadamard(), n, rng.random_range(0..n)),
            1 => on_qubit(&phase_s(), n, rng.random_range(0..n)),
            _ => {
                let control = rng.random_range(0..n);
                let mut target = rng.random_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                cnot_on(n, control, target)
            }
        };
        acc = acc.then(&gate);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let u = random_unitary(n, &mut rng);
            assert!(u.matrix().is_unitary(1e-12));
            let psi = random_state(n, &mut rng);
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
            let ch = random_channel(n, 3, &mut rng);
            assert_eq!(ch.kraus_ops().len(), 3);
        }
    }

    #[test]
    fn embedded_gates_match_kronecker_layout() {
        let x0 = on_qubit(&pauli_x(), 2, 0);
        assert_eq!(x0.matrix()[(2, 0)], ONE);
        let c = cnot();
        // |10> -> |11>
        assert_eq!(c.matrix()[(3, 2)], ONE);
        assert_eq!(c.matrix()[(1, 1)], ONE);
        assert!(qft(2).matrix().is_unitary(1e-12));
    }
}
