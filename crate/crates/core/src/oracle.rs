//! Exact reference values by dense evaluation.
//!
//! Nothing here goes through the sampling machinery: fidelities are summed
//! directly from channel outputs, using only the state and Pauli primitives.

use alloc::vec::Vec;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::estimators::RelevanceDistribution;
use crate::linalg::{Matrix, Unitary};
use crate::mub::MubFamily;
use crate::state::{DensityMatrix, StateVector};

pub const MAX_CLASSICAL_QUBITS: usize = 8;
pub const MAX_TWO_DESIGN_QUBITS: usize = 6;
pub const MAX_ENTANGLEMENT_QUBITS: usize = 6;
pub const MAX_MOMENT_QUBITS: usize = 3;

fn check_pair(u: &Unitary, channel: &QuantumChannel, what: &'static str, max: usize) -> Result<()> {
    if u.n_qubits() != channel.n_qubits() {
        return Err(Error::QubitMismatch {
            left: u.n_qubits(),
            right: channel.n_qubits(),
        });
    }
    if u.n_qubits() > max {
        return Err(Error::TooManyQubits {
            what,
            max,
            requested: u.n_qubits(),
        });
    }
    Ok(())
}

/// `<Uψ| D(|ψ><ψ|) |Uψ>`.
fn output_overlap(u: &Unitary, channel: &QuantumChannel, psi: &StateVector) -> Result<f64> {
    if psi.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: psi.dim(),
        });
    }
    let out = channel.apply(&DensityMatrix::from_pure(psi))?;
    let ideal = u.apply(psi.amplitudes());
    let rho_ideal = out.matrix().mul_vec(&ideal);
    Ok(ideal
        .iter()
        .zip(&rho_ideal)
        .map(|(a, b)| (a.conj() * b).re)
        .sum())
}

fn mean_overlap<'s>(
    u: &Unitary,
    channel: &QuantumChannel,
    states: impl Iterator<Item = &'s StateVector>,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for psi in states {
        sum += output_overlap(u, channel, psi)?;
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(sum / count as f64)
}

/// `F_j = (1/d) Σ_i <UΨ_i| D(|Ψ_i><Ψ_i|) |UΨ_i>` over one basis.
pub fn exact_classical_fidelity(
    u: &Unitary,
    channel: &QuantumChannel,
    basis: &[StateVector],
) -> Result<f64> {
    check_pair(u, channel, "exact classical fidelity", MAX_CLASSICAL_QUBITS)?;
    if basis.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: basis.len(),
        });
    }
    mean_overlap(u, channel, basis.iter())
}

/// Average output fidelity over all `d(d+1)` states of the family.
pub fn exact_two_design_favg(
    u: &Unitary,
    channel: &QuantumChannel,
    family: &MubFamily,
) -> Result<f64> {
    check_pair(
        u,
        channel,
        "exact two-design fidelity",
        MAX_TWO_DESIGN_QUBITS,
    )?;
    if family.n_qubits() != u.n_qubits() {
        return Err(Error::QubitMismatch {
            left: u.n_qubits(),
            right: family.n_qubits(),
        });
    }
    mean_overlap(u, channel, family.states())
}

/// `F_e = (1/d³) Σ_i Tr[(U W_i U†)† D(W_i)]` over all `d²` Pauli strings.
pub fn exact_entanglement_fidelity(u: &Unitary, channel: &QuantumChannel) -> Result<f64> {
    check_pair(
        u,
        channel,
        "exact entanglement fidelity",
        MAX_ENTANGLEMENT_QUBITS,
    )?;
    let d = u.dim() as f64;
    let mut sum = 0.0;
    for w in crate::pauli::PauliString::all(u.n_qubits()) {
        let wm = w.to_matrix()?;
        let ideal = u.matrix().conjugate(&wm);
        let actual = channel.apply_operator(&wm);
        sum += ideal.adjoint().trace_product(&actual).re;
    }
    Ok(sum / (d * d * d))
}

/// `F_e = (1/d²) Σ_k |Tr[U† K_k]|²` from the Kraus operators.
pub fn entanglement_fidelity_kraus(u: &Unitary, channel: &QuantumChannel) -> Result<f64> {
    check_pair(
        u,
        channel,
        "Kraus entanglement fidelity",
        crate::MAX_DENSE_QUBITS,
    )?;
    let d = u.dim() as f64;
    let ud = u.matrix().adjoint();
    Ok(channel
        .kraus_ops()
        .iter()
        .map(|k| ud.trace_product(k).norm_sqr())
        .sum::<f64>()
        / (d * d))
}

/// `F_av = (d F_e + 1)/(d + 1)`.
pub fn favg_from_fe(fe: f64, d: usize) -> f64 {
    let d = d as f64;
    (d * fe + 1.0) / (d + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Exact mean and variance of `X = χ_D/χ_U` over the distribution, with
/// `χ_D` recomputed densely from the channel.
pub fn exact_moments(dist: &RelevanceDistribution, channel: &QuantumChannel) -> Result<Moments> {
    let n = dist.n_qubits();
    if channel.n_qubits() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: channel.n_qubits(),
        });
    }
    if n > MAX_MOMENT_QUBITS {
        return Err(Error::TooManyQubits {
            what: "exact moments",
            max: MAX_MOMENT_QUBITS,
            requested: n,
        });
    }
    let d = dist.dim() as f64;
    let mut outputs: Vec<Option<Matrix>> = alloc::vec![None; dist.input_count()];
    let mut first = 0.0;
    let mut second = 0.0;
    for e in dist.entries() {
        if outputs[e.input].is_none() {
            let out = match dist.input_operator(e.input) {
                Some(w) => channel
                    .apply_operator(&w.to_matrix()?)
                    .scale((1.0 / d).into()),
                None => {
                    let psi = dist.input_state(e.input).ok_or(Error::EmptyDistribution)?;
                    channel
                        .apply(&DensityMatrix::from_pure(psi))?
                        .matrix()
                        .clone()
                }
            };
            outputs[e.input] = Some(out);
        }
        let out = outputs[e.input].as_ref().ok_or(Error::EmptyDistribution)?;
        let chi_d = e.measurement.to_matrix()?.trace_product(out).re;
        let x = chi_d / e.chi;
        first += e.probability * x;
        second += e.probability * x * x;
    }
    Ok(Moments {
        mean: first,
        variance: second - first * first,
    })
}

/// Exact values attached to estimate reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactReference {
    pub fe: f64,
    pub favg: f64,
    /// Classical fidelities over the two bases when requested.
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    /// `F_av` interval implied by the exact classical fidelities.
    pub classical_bounds: Option<(f64, f64)>,
}

pub fn exact_reference(
    u: &Unitary,
    channel: &QuantumChannel,
    classical: Option<(&[StateVector], &[StateVector])>,
) -> Result<ExactReference> {
    let fe = entanglement_fidelity_kraus(u, channel)?;
    let d = u.dim();
    let mut reference = ExactReference {
        fe,
        favg: favg_from_fe(fe, d),
        f1: None,
        f2: None,
        classical_bounds: None,
    };
    if let Some((b1, b2)) = classical {
        let f1 = exact_classical_fidelity(u, channel, b1)?;
        let f2 = exact_classical_fidelity(u, channel, b2)?;
        let lower = favg_from_fe((f1 + f2 - 1.0).max(0.0), d);
        let upper = favg_from_fe(f1.min(f2), d);
        reference.f1 = Some(f1);
        reference.f2 = Some(f2);
        reference.classical_bounds = Some((lower, upper));
    }
    Ok(reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{
        relevance_classical, relevance_process, relevance_two_design, DistributionTag,
    };
    use crate::gates;
    use crate::mub::{build_mub_family, computational_basis, hadamard_basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-10
    }

    #[test]
    fn ideal_gate_is_perfect() {
        let u = gates::qft(2);
        let ch = QuantumChannel::unitary_channel(&u);
        let f = build_mub_family(2).unwrap();
        assert!(close(
            exact_classical_fidelity(&u, &ch, &computational_basis(2)).unwrap(),
            1.0
        ));
        assert!(close(exact_two_design_favg(&u, &ch, &f).unwrap(), 1.0));
        assert!(close(exact_entanglement_fidelity(&u, &ch).unwrap(), 1.0));
        let dist = relevance_two_design(&u, &f).unwrap();
        let m = exact_moments(&dist, &ch).unwrap();
        assert!(close(m.mean, 1.0) && m.variance.abs() < 1e-10);
    }

    #[test]
    fn depolarizing_closed_forms() {
        let u = Unitary::identity(1);
        let ch = QuantumChannel::depolarizing(1, 0.2).unwrap();
        assert!(close(
            exact_classical_fidelity(&u, &ch, &computational_basis(1)).unwrap(),
            0.9
        ));
        assert!(close(exact_entanglement_fidelity(&u, &ch).unwrap(), 0.85));
        assert!(close(favg_from_fe(0.85, 2), 0.9));
        for n in 1..=3 {
            let d = (1usize << n) as f64;
            let u = Unitary::identity(n);
            let ch = QuantumChannel::depolarizing(n, 0.3).unwrap();
            let f = build_mub_family(n).unwrap();
            assert!(close(
                exact_two_design_favg(&u, &ch, &f).unwrap(),
                1.0 - 0.3 * (1.0 - 1.0 / d)
            ));
        }
        let dist = relevance_classical(&u, &hadamard_basis(1), DistributionTag::C2).unwrap();
        assert!(close(exact_moments(&dist, &ch).unwrap().mean, 0.9));
    }

    #[test]
    fn dephasing_invisible_in_its_basis() {
        let u = Unitary::identity(2);
        let ch = QuantumChannel::dephasing(2, 0.7).unwrap();
        assert!(close(
            exact_classical_fidelity(&u, &ch, &computational_basis(2)).unwrap(),
            1.0
        ));
        assert!(exact_classical_fidelity(&u, &ch, &hadamard_basis(2)).unwrap() < 0.9);
    }

    #[test]
    fn entanglement_fidelity_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=2 {
            for _ in 0..10 {
                let u = gates::random_unitary(n, &mut rng);
                let ch = gates::random_noisy_gate(&u, 0.3, &mut rng);
                let a = exact_entanglement_fidelity(&u, &ch).unwrap();
                let b = entanglement_fidelity_kraus(&u, &ch).unwrap();
                assert!(close(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn process_moments_match_entanglement_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = gates::random_unitary(2, &mut rng);
        let ch = gates::random_noisy_gate(&u, 0.5, &mut rng);
        let m = exact_moments(&relevance_process(&u).unwrap(), &ch).unwrap();
        assert!(close(m.mean, exact_entanglement_fidelity(&u, &ch).unwrap()));
        assert!(m.variance <= 1.0 + 1e-9);
    }

    #[test]
    fn caps_and_mismatches() {
        let u = Unitary::identity(2);
        let ch = QuantumChannel::identity(1);
        assert!(matches!(
            exact_entanglement_fidelity(&u, &ch),
            Err(Error::QubitMismatch { .. })
        ));
        let ch = QuantumChannel::identity(2);
        assert!(exact_classical_fidelity(&u, &ch, &computational_basis(1)).is_err());
    }
}
