use rand::Rng;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::state::{DensityMatrix, StateVector};

const PROBABILITY_TOL: f64 = 1e-8;

/// One ±1 outcome with `Pr(+1) = (1 + expectation)/2`.
pub fn shot_from_expectation<R: Rng + ?Sized>(expectation: f64, rng: &mut R) -> Result<i8> {
    let p_plus = (1.0 + expectation) / 2.0;
    if !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&p_plus) || p_plus.is_nan() {
        return Err(Error::InvalidProbability(p_plus));
    }
    let u: f64 = rng.random();
    Ok(if u < p_plus { 1 } else { -1 })
}

/// Prepares `input`, applies the channel and measures `w` once.
/// Identity measurements return +1 without consuming randomness.
pub fn simulate_shot<R: Rng + ?Sized>(
    channel: &QuantumChannel,
    input: &StateVector,
    w: &PauliString,
    rng: &mut R,
) -> Result<i8> {
    if w.n_qubits() != channel.n_qubits() {
        return Err(Error::QubitMismatch {
            left: channel.n_qubits(),
            right: w.n_qubits(),
        });
    }
    if w.is_identity() && !w.is_negative() {
        return Ok(1);
    }
    let out = channel.apply(&DensityMatrix::from_pure(input))?;
    let expectation = w.trace_with(out.matrix()).re;
    shot_from_expectation(expectation, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_channel_shots() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let id = QuantumChannel::identity(1);
        let zero = StateVector::basis(1, 0);
        let z: PauliString = "Z".parse().unwrap();
        let x: PauliString = "X".parse().unwrap();
        for _ in 0..200 {
            assert_eq!(simulate_shot(&id, &zero, &z, &mut rng).unwrap(), 1);
        }
        let plus = (0..4000)
            .filter(|_| simulate_shot(&id, &zero, &x, &mut rng).unwrap() == 1)
            .count();
        // Binomial(4000, 1/2), 4σ ≈ 126
        assert!((plus as f64 - 2000.0).abs() < 126.0);
        assert_eq!(
            simulate_shot(&id, &zero, &PauliString::identity(1), &mut rng).unwrap(),
            1
        );
    }

    #[test]
    fn depolarized_mean_within_three_sigma() {
        // p = 0.2: Pr(+1) = 0.9, mean 0.8, σ of the mean = sqrt(0.36/1e5) ≈ 0.0019
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let ch = QuantumChannel::depolarizing(1, 0.2).unwrap();
        let zero = StateVector::basis(1, 0);
        let z: PauliString = "Z".parse().unwrap();
        let out = ch.apply(&DensityMatrix::from_pure(&zero)).unwrap();
        let e = z.trace_with(out.matrix()).re;
        assert!((e - 0.8).abs() < 1e-14);
        let shots = 100_000;
        let sum: i64 = (0..shots)
            .map(|_| shot_from_expectation(e, &mut rng).unwrap() as i64)
            .sum();
        let mean = sum as f64 / shots as f64;
        assert!((mean - 0.8).abs() <= 0.012);
    }

    #[test]
    fn invalid_probability_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            shot_from_expectation(1.5, &mut rng),
            Err(Error::InvalidProbability(_))
        ));
    }
}
