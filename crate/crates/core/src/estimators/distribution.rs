use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Unitary;
use crate::mub::MubFamily;
use crate::pauli::PauliString;
use crate::state::StateVector;

/// Settings with `|χ_U| ≤ CHI_ZERO_TOL` are treated as zero-probability
/// events and omitted.
pub const CHI_ZERO_TOL: f64 = 1e-12;

/// Largest qubit count for the operator-pair enumeration of protocol A.
pub const MAX_PROCESS_QUBITS: usize = 5;

/// Which fidelity a distribution samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistributionTag {
    /// Operator pairs `(W_i, W_k)`, mean is the entanglement fidelity.
    A,
    /// States of all `d + 1` MUBs, mean is the average fidelity.
    B,
    /// First classical fidelity.
    C1,
    /// Second classical fidelity.
    C2,
}

impl DistributionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DistributionTag::A => "A",
            DistributionTag::B => "B",
            DistributionTag::C1 => "C1",
            DistributionTag::C2 => "C2",
        }
    }

    /// Label of input `i` on `n` qubits: the Pauli label for protocol A,
    /// `b<basis>s<state>` for MUB states.
    pub fn input_label(self, n_qubits: usize, i: usize) -> alloc::string::String {
        use alloc::format;
        use alloc::string::ToString;
        let d = 1usize << n_qubits;
        match self {
            DistributionTag::A => PauliString::from_index(n_qubits, i).to_string(),
            DistributionTag::B => format!("b{}s{}", i / d, i % d),
            DistributionTag::C1 => format!("b0s{}", i),
            DistributionTag::C2 => format!("b1s{}", i),
        }
    }

    /// Key component for random substreams.
    pub(crate) fn domain(self) -> u64 {
        match self {
            DistributionTag::A => 1,
            DistributionTag::B => 2,
            DistributionTag::C1 => 3,
            DistributionTag::C2 => 4,
        }
    }
}

impl fmt::Display for DistributionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the input index `i` of a setting refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum Inputs {
    /// `i` is the enumeration index of an input Pauli operator.
    Operators,
    /// `i` indexes this list of input states.
    States(Vec<StateVector>),
}

/// One setting `κ = (i, k)` with nonzero probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    pub input: usize,
    pub measurement: PauliString,
    pub probability: f64,
    /// Ideal characteristic function `χ_U(i, k)`.
    pub chi: f64,
}

/// Relevance distribution `Pr(κ) ∝ χ_U(κ)²` over the settings of one
/// protocol, in `(i, k)` enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceDistribution {
    tag: DistributionTag,
    n_qubits: usize,
    event_space: u128,
    inputs: Inputs,
    entries: Vec<Setting>,
    cumulative: Vec<f64>,
}

impl RelevanceDistribution {
    pub(crate) fn from_entries(
        tag: DistributionTag,
        n_qubits: usize,
        event_space: u128,
        inputs: Inputs,
        entries: Vec<Setting>,
    ) -> Self {
        let mut acc = 0.0;
        let cumulative = entries
            .iter()
            .map(|e| {
                acc += e.probability;
                acc
            })
            .collect();
        RelevanceDistribution {
            tag,
            n_qubits,
            event_space,
            inputs,
            entries,
            cumulative,
        }
    }

    pub fn tag(&self) -> DistributionTag {
        self.tag
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Size `T` of the full event space, including zero-probability settings.
    pub fn event_space_size(&self) -> u128 {
        self.event_space
    }

    pub fn inputs(&self) -> &Inputs {
        &self.inputs
    }

    pub fn entries(&self) -> &[Setting] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_probability(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub(crate) fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Input state of setting input `i`, or `None` for operator inputs.
    pub fn input_state(&self, i: usize) -> Option<&StateVector> {
        match &self.inputs {
            Inputs::States(states) => states.get(i),
            Inputs::Operators => None,
        }
    }

    /// Input operator of setting input `i` for protocol A.
    pub fn input_operator(&self, i: usize) -> Option<PauliString> {
        match self.inputs {
            Inputs::Operators => Some(PauliString::from_index(self.n_qubits, i)),
            Inputs::States(_) => None,
        }
    }

    /// Number of distinct input indices.
    pub fn input_count(&self) -> usize {
        match &self.inputs {
            Inputs::States(states) => states.len(),
            Inputs::Operators => 1 << (2 * self.n_qubits),
        }
    }

    /// See [`DistributionTag::input_label`].
    pub fn input_label(&self, i: usize) -> alloc::string::String {
        self.tag.input_label(self.n_qubits, i)
    }
}

fn state_distribution(
    tag: DistributionTag,
    u: &Unitary,
    states: Vec<StateVector>,
    normalizer: f64,
) -> RelevanceDistribution {
    let n = u.n_qubits();
    let d2 = 1usize << (2 * n);
    let mut entries = Vec::new();
    for (i, psi) in states.iter().enumerate() {
        let evolved = u.apply(psi.amplitudes());
        for w in PauliString::all(n) {
            let chi = w.expectation_raw(&evolved).re;
            if chi.abs() > CHI_ZERO_TOL {
                entries.push(Setting {
                    input: i,
                    measurement: w,
                    probability: chi * chi / normalizer,
                    chi,
                });
            }
        }
    }
    let event_space = (states.len() * d2) as u128;
    RelevanceDistribution::from_entries(tag, n, event_space, Inputs::States(states), entries)
}

fn check_basis(u: &Unitary, basis: &[StateVector]) -> Result<()> {
    let d = u.dim();
    if basis.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: basis.len(),
        });
    }
    if let Some(bad) = basis.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: bad.dim(),
        });
    }
    Ok(())
}

/// `Pr^j(i, k) = χ^j_U(i, k)² / d²` over one orthonormal basis.
/// `tag` must be [`DistributionTag::C1`] or [`DistributionTag::C2`].
pub fn relevance_classical(
    u: &Unitary,
    basis: &[StateVector],
    tag: DistributionTag,
) -> Result<RelevanceDistribution> {
    if !matches!(tag, DistributionTag::C1 | DistributionTag::C2) {
        return Err(Error::ParameterOutOfRange {
            name: "classical distribution tag",
            value: tag.domain() as f64,
        });
    }
    check_basis(u, basis)?;
    let d = u.dim() as f64;
    Ok(state_distribution(tag, u, basis.to_vec(), d * d))
}

/// `Pr^2des(i, k) = χ_U(i, k)² / (d²(d+1))` over all MUB states.
pub fn relevance_two_design(u: &Unitary, family: &MubFamily) -> Result<RelevanceDistribution> {
    if family.n_qubits() != u.n_qubits() {
        return Err(Error::QubitMismatch {
            left: u.n_qubits(),
            right: family.n_qubits(),
        });
    }
    let d = u.dim() as f64;
    let states = family.states().cloned().collect();
    Ok(state_distribution(
        DistributionTag::B,
        u,
        states,
        d * d * (d + 1.0),
    ))
}

/// Operator-pair distribution with `χ_U(i, k) = Tr[W_k U W_i U†] / d` and
/// `Pr(i, k) = χ_U(i, k)² / d²`.
pub fn relevance_process(u: &Unitary) -> Result<RelevanceDistribution> {
    let n = u.n_qubits();
    if n > MAX_PROCESS_QUBITS {
        return Err(Error::TooManyQubits {
            what: "operator-pair distribution",
            max: MAX_PROCESS_QUBITS,
            requested: n,
        });
    }
    let d = u.dim() as f64;
    let mut entries = Vec::new();
    for (i, wi) in PauliString::all(n).enumerate() {
        let image = u.matrix().conjugate(&wi.to_matrix()?);
        for wk in PauliString::all(n) {
            let chi = wk.trace_with(&image).re / d;
            if chi.abs() > CHI_ZERO_TOL {
                entries.push(Setting {
                    input: i,
                    measurement: wk,
                    probability: chi * chi / (d * d),
                    chi,
                });
            }
        }
    }
    let event_space = 1u128 << (4 * n);
    Ok(RelevanceDistribution::from_entries(
        DistributionTag::A,
        n,
        event_space,
        Inputs::Operators,
        entries,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::mub::{build_mub_family, computational_basis, hadamard_basis};
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classical_identity_single_qubit() {
        // χ for all 8 settings (2 states × {1,X,Y,Z}) is nonzero only for 1 and Z.
        let u = Unitary::identity(1);
        let dist = relevance_classical(&u, &computational_basis(1), DistributionTag::C1).unwrap();
        assert_eq!(dist.len(), 4);
        assert_eq!(dist.event_space_size(), 8);
        for e in dist.entries() {
            assert!(matches!(e.measurement.to_string().as_str(), "1" | "Z"));
            assert!((e.probability - 0.25).abs() < 1e-15);
        }
        let chis: Vec<f64> = dist.entries().iter().map(|e| e.chi).collect();
        assert_eq!(chis, [1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn two_design_identity_single_qubit() {
        let f = build_mub_family(1).unwrap();
        let dist = relevance_two_design(&Unitary::identity(1), &f).unwrap();
        assert_eq!(dist.len(), 12);
        assert_eq!(dist.event_space_size(), 24);
        for e in dist.entries() {
            assert!((e.probability - 1.0 / 12.0).abs() < 1e-15);
        }
        assert!((dist.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn process_identity_and_hadamard() {
        let dist = relevance_process(&Unitary::identity(1)).unwrap();
        assert_eq!(dist.len(), 4);
        for e in dist.entries() {
            assert_eq!(e.input, e.measurement.index());
            assert!((e.probability - 0.25).abs() < 1e-15);
        }
        let dist = relevance_process(&gates::hadamard()).unwrap();
        let pairs: Vec<(alloc::string::String, alloc::string::String, f64)> = dist
            .entries()
            .iter()
            .map(|e| {
                (
                    dist.input_label(e.input),
                    e.measurement.to_string(),
                    libm::round(e.chi),
                )
            })
            .collect();
        let expect = |a: &str, b: &str, c: f64| (a.to_string(), b.to_string(), c);
        assert_eq!(
            pairs,
            [
                expect("1", "1", 1.0),
                expect("X", "Z", 1.0),
                expect("Y", "Y", -1.0),
                expect("Z", "X", 1.0)
            ]
        );
        assert_eq!(dist.event_space_size(), 16);
    }

    #[test]
    fn random_unitaries_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = build_mub_family(2).unwrap();
        for _ in 0..10 {
            let u = gates::random_unitary(2, &mut rng);
            for dist in [
                relevance_process(&u).unwrap(),
                relevance_two_design(&u, &f).unwrap(),
                relevance_classical(&u, &computational_basis(2), DistributionTag::C1).unwrap(),
                relevance_classical(&u, &hadamard_basis(2), DistributionTag::C2).unwrap(),
            ] {
                assert!((dist.total_probability() - 1.0).abs() < 1e-9);
                assert!(dist.entries().iter().all(|e| e.chi.abs() > CHI_ZERO_TOL));
            }
        }
    }

    #[test]
    fn clifford_distributions_are_uniform_with_support_d() {
        for (u, n) in [
            (gates::hadamard(), 1),
            (gates::phase_s(), 1),
            (gates::cnot(), 2),
        ] {
            let d = 1usize << n;
            let f = build_mub_family(n).unwrap();
            let dist = relevance_classical(&u, f.basis(0), DistributionTag::C1).unwrap();
            assert_eq!(dist.len(), d * d);
            for e in dist.entries() {
                assert!((e.probability - 1.0 / (d * d) as f64).abs() < 1e-12);
            }
            let dist = relevance_two_design(&u, &f).unwrap();
            assert_eq!(dist.len(), d * d * (d + 1));
            let w = 1.0 / (d * d * (d + 1)) as f64;
            assert!(dist
                .entries()
                .iter()
                .all(|e| (e.probability - w).abs() < 1e-12));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let u = Unitary::identity(2);
        assert!(relevance_classical(&u, &computational_basis(1), DistributionTag::C1).is_err());
        assert!(relevance_classical(&u, &computational_basis(2), DistributionTag::B).is_err());
        let f = build_mub_family(1).unwrap();
        assert!(relevance_two_design(&u, &f).is_err());
        assert!(matches!(
            relevance_process(&Unitary::identity(6)),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
