//! Monte Carlo estimation of the average fidelity of n-qubit gates.
//!
//! The crate is `no_std` (with `alloc`) and contains only the numerical
//! machinery: exact Pauli-string algebra, dense states and Kraus channels,
//! construction of the `d + 1` mutually unbiased bases for `d = 2^n`,
//! relevance distributions and sample sizing for the three estimation
//! protocols, brute-force reference values, and resource accounting.
//!
//! Protocols:
//!
//! - [`Protocol::ChannelState`] (A): operator-basis sampling of the
//!   entanglement fidelity, with inputs realized as random eigenstates.
//! - [`Protocol::TwoDesign`] (B): sampling over the states of all `d + 1`
//!   mutually unbiased bases, giving the average fidelity directly.
//! - [`Protocol::Classical`] (C): sampling two classical fidelities over a
//!   pair of unbiased bases, giving lower and upper bounds.
//!
//! IO, configuration files and parallel plan execution live in the
//! `gatefid` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod error;
pub mod estimators;
pub mod gates;
pub mod linalg;
pub mod mub;
pub mod oracle;
pub mod pauli;
pub mod resources;
pub mod rng;
pub mod state;

pub use channel::QuantumChannel;
pub use error::{Error, Result};
pub use estimators::{
    DistributionTag, EstimateReport, Estimator, Protocol, RelevanceDistribution, SamplePlan,
    ShotMode,
};
pub use linalg::{Matrix, Unitary};
pub use mub::MubFamily;
pub use num_complex::Complex64;
pub use pauli::{PauliString, Phase};
pub use resources::ResourceTable;
pub use state::{DensityMatrix, StateVector};

/// Largest qubit count for any dense (2^n-dimensional) representation.
pub const MAX_DENSE_QUBITS: usize = 10;
