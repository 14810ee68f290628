use alloc::vec::Vec;

use rand::Rng;

use super::distribution::RelevanceDistribution;
use super::sizing::{chebyshev_sample_count, hoeffding_shots};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::rng::draw_stream;

/// One drawn setting `(i_l, k_l)` with its shot budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRecord {
    /// Position of the setting in the distribution's entry list.
    pub entry: usize,
    pub input: usize,
    pub measurement: PauliString,
    pub chi: f64,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    records: Vec<PlanRecord>,
}

impl SamplePlan {
    /// `L`.
    pub fn sample_count(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[PlanRecord] {
        &self.records
    }

    pub fn planned_shots(&self) -> u64 {
        self.records.iter().map(|r| r.shots).sum()
    }
}

/// Inverse-CDF lookup of `u ∈ [0, 1)` over the distribution's entries in
/// enumeration order.
pub fn sample_entry(dist: &RelevanceDistribution, u: f64) -> Result<usize> {
    let cumulative = dist.cumulative();
    let total = *cumulative.last().ok_or(Error::EmptyDistribution)?;
    let target = u * total;
    let idx = cumulative.partition_point(|&c| c <= target);
    Ok(idx.min(cumulative.len() - 1))
}

/// Draws `L = ceil(1/(ε²δ))` settings i.i.d. with replacement. Entry `l`
/// uses the substream `(seed, tag, l)`.
pub fn draw_plan(
    dist: &RelevanceDistribution,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<SamplePlan> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let l = chebyshev_sample_count(epsilon, delta)?;
    let domain = dist.tag().domain();
    let mut records = Vec::with_capacity(l as usize);
    for idx in 0..l {
        let u: f64 = draw_stream(seed, domain, idx).random();
        let entry = sample_entry(dist, u)?;
        let setting = dist.entries()[entry];
        records.push(PlanRecord {
            entry,
            input: setting.input,
            measurement: setting.measurement,
            chi: setting.chi,
            shots: hoeffding_shots(setting.chi, l, epsilon, delta)?,
        });
    }
    Ok(SamplePlan {
        epsilon,
        delta,
        seed,
        records,
    })
}
