//! Sample sizes from Chebyshev's and Hoeffding's inequalities.

use crate::error::{Error, Result};

/// `ceil(x)`, except that values within a relative `1e-12` of an integer
/// snap to it, so that e.g. `1/(0.05²·0.01)` yields exactly 40000.
pub(crate) fn snapped_ceil(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        libm::ceil(x)
    }
}

pub(crate) fn check_accuracy(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta,
        });
    }
    Ok(())
}

/// Number of Monte Carlo samples `L = ceil(1/(ε²δ))`, which bounds the
/// probability of `|F_L - F| ≥ ε` by `δ` when `Var(X) ≤ 1`.
pub fn chebyshev_sample_count(epsilon: f64, delta: f64) -> Result<u64> {
    check_accuracy(epsilon, delta)?;
    Ok(snapped_ceil(1.0 / (epsilon * epsilon * delta)) as u64)
}

/// Shots for one setting, `N_l = ceil(2·ln(2/δ) / (L·ε²·χ²))`, at least 1.
///
/// With this choice the Hoeffding bound on `|F̃_L - F_L| ≥ ε` evaluates to
/// at most `δ`.
pub fn hoeffding_shots(chi: f64, sample_count: u64, epsilon: f64, delta: f64) -> Result<u64> {
    check_accuracy(epsilon, delta)?;
    if chi == 0.0 || chi.is_nan() {
        return Err(Error::ZeroCharacteristic);
    }
    if chi.abs() > 1.0 + 1e-9 {
        return Err(Error::ParameterOutOfRange {
            name: "chi",
            value: chi,
        });
    }
    if sample_count == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "sample count",
            value: 0.0,
        });
    }
    let raw = hoeffding_shots_raw(chi, sample_count, epsilon, delta);
    Ok((snapped_ceil(raw) as u64).max(1))
}

/// The pre-ceiling value of [`hoeffding_shots`].
pub fn hoeffding_shots_raw(chi: f64, sample_count: u64, epsilon: f64, delta: f64) -> f64 {
    2.0 * libm::log(2.0 / delta) / (sample_count as f64 * epsilon * epsilon * chi * chi)
}
