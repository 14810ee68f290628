//! Resource accounting for the three protocols, for general and Clifford
//! gates.

use crate::error::{Error, Result};
use crate::estimators::Protocol;

/// Largest `n` for which all counts are represented exactly.
pub const MAX_RESOURCE_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceTable {
    pub protocol: Protocol,
    pub n_qubits: usize,
    pub clifford: bool,
    /// Number of distinct input states that must be preparable.
    pub n_input: u128,
    /// Number of measurement operators.
    pub n_meas: u128,
    /// `N_input × N_meas`.
    pub n_setting: u128,
    /// Upper bound on the expected number of experiments `<N_exp>`.
    pub n_exp_bound: f64,
    /// Asymptotic scaling of `<N_exp>` in `n`.
    pub n_exp_label: &'static str,
    /// Scaling label of the classical cost of drawing settings.
    pub class_cost_label: &'static str,
    /// The label's expression evaluated at `n`, without constants.
    pub class_cost_value: u128,
}

fn overflow(n: usize) -> Error {
    Error::TooManyQubits {
        what: "resource table",
        max: MAX_RESOURCE_QUBITS,
        requested: n,
    }
}

fn pow(base: u128, exp: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

pub fn resource_table(
    protocol: Protocol,
    n: usize,
    epsilon: f64,
    delta: f64,
    clifford: bool,
) -> Result<ResourceTable> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    if n > MAX_RESOURCE_QUBITS {
        return Err(overflow(n));
    }
    crate::estimators::chebyshev_sample_count(epsilon, delta)?;
    let d = 1u128 << n;
    let n_input = match protocol {
        Protocol::ChannelState => pow(6, n),
        Protocol::TwoDesign => d.checked_mul(d + 1),
        Protocol::Classical => Some(2 * d),
    }
    .ok_or_else(|| overflow(n))?;
    let n_meas = if clifford { d } else { d * d };
    let n_setting = n_input.checked_mul(n_meas).ok_or_else(|| overflow(n))?;

    let base = 1.0 + 1.0 / (epsilon * epsilon * delta);
    let log_term = 2.0 * libm::log(2.0 / delta) / (epsilon * epsilon);
    let df = d as f64;
    let (factor, n_exp_label) = match (clifford, protocol) {
        (true, _) => (1.0, "1"),
        (false, Protocol::ChannelState) => (df * df, "2^{2n}"),
        (false, _) => (df, "2^n"),
    };

    let n2 = (n * n) as u128;
    let (class_cost_label, class_cost_value) = match (clifford, protocol) {
        (true, _) => ("1", Some(1)),
        (false, Protocol::Classical) => {
            ("n^2·2^{3n}", pow(2, 3 * n).and_then(|p| p.checked_mul(n2)))
        }
        (false, _) => ("n^2·2^{4n}", pow(2, 4 * n).and_then(|p| p.checked_mul(n2))),
    };

    Ok(ResourceTable {
        protocol,
        n_qubits: n,
        clifford,
        n_input,
        n_meas,
        n_setting,
        n_exp_bound: base + factor * log_term,
        n_exp_label,
        class_cost_label,
        class_cost_value: class_cost_value.ok_or_else(|| overflow(n))?,
    })
}
