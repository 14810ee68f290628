//! Relevance distributions, sample sizing, simulated shots and the Monte
//! Carlo estimators built from them.

mod distribution;
mod estimate;
mod plan;
mod shots;
mod sizing;

pub use distribution::{
    relevance_classical, relevance_process, relevance_two_design, DistributionTag, Inputs,
    RelevanceDistribution, Setting, CHI_ZERO_TOL, MAX_PROCESS_QUBITS,
};
pub use estimate::{
    estimate, hofmann_bounds, run_distribution, ClassicalSummary, EstimateReport, Estimator,
    HofmannBounds, PlanExecutor, PlanJob, Protocol, RunReport, SequentialExecutor, SettingResult,
    ShotMode, FIDELITY_RANGE_TOL,
};
pub use plan::{draw_plan, sample_entry, PlanRecord, SamplePlan};
pub use shots::{shot_from_expectation, simulate_shot};
pub use sizing::{chebyshev_sample_count, hoeffding_shots, hoeffding_shots_raw};
