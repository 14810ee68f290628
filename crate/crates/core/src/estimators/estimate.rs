use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use super::distribution::{
    relevance_classical, relevance_process, relevance_two_design, DistributionTag,
    RelevanceDistribution,
};
use super::plan::{draw_plan, SamplePlan};
use super::shots::shot_from_expectation;
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::Unitary;
use crate::mub::{build_mub_family, computational_basis, hadamard_basis, MubFamily};
use crate::oracle::{exact_reference, ExactReference};
use crate::pauli::PauliString;
use crate::rng::shot_stream;
use crate::state::{DensityMatrix, StateVector};

/// Inputs outside `[0, 1]` by more than this are flagged by [`hofmann_bounds`].
pub const FIDELITY_RANGE_TOL: f64 = 1e-9;

/// The three estimation protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    /// A: operator pairs via the channel-state isomorphism.
    ChannelState,
    /// B: states of all `d + 1` mutually unbiased bases.
    TwoDesign,
    /// C: two classical fidelities and the bounds they imply.
    Classical,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [
        Protocol::ChannelState,
        Protocol::TwoDesign,
        Protocol::Classical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::ChannelState => "A",
            Protocol::TwoDesign => "B",
            Protocol::Classical => "C",
        }
    }

    /// Distributions sampled by the protocol, in execution order.
    pub fn tags(self) -> &'static [DistributionTag] {
        match self {
            Protocol::ChannelState => &[DistributionTag::A],
            Protocol::TwoDesign => &[DistributionTag::B],
            Protocol::Classical => &[DistributionTag::C1, DistributionTag::C2],
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" | "channel-state" => Ok(Protocol::ChannelState),
            "B" | "b" | "two-design" => Ok(Protocol::TwoDesign),
            "C" | "c" | "classical" => Ok(Protocol::Classical),
            _ => Err(Error::UnknownProtocol(s.into())),
        }
    }
}

/// How the second sampling level is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShotMode {
    /// `N_l` simulated ±1 outcomes per setting.
    #[default]
    Sampled,
    /// Shot averages replaced by exact expectations; `N_l` is still planned
    /// and reported.
    Exact,
}

impl ShotMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ShotMode::Sampled => "sampled",
            ShotMode::Exact => "exact",
        }
    }
}

/// Runs `f(0..len)` and returns the results in index order.
pub trait PlanExecutor {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialExecutor;

impl PlanExecutor for SequentialExecutor {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// Outcome of one plan entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingResult {
    pub input: usize,
    pub measurement: PauliString,
    pub chi: f64,
    pub shots: u64,
    /// `Σ_j w_lj`; `None` in exact-shot mode.
    pub outcome_sum: Option<i64>,
    pub x_tilde: f64,
}

/// One distribution's Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub tag: DistributionTag,
    /// `F̃_L = (1/L) Σ X̃_l`.
    pub estimate: f64,
    pub sample_count: usize,
    /// Realized `N_exp = Σ N_l`, identity measurements included.
    pub total_shots: u64,
    pub records: Vec<SettingResult>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HofmannBounds {
    /// Bounds on `F_av`.
    pub lower: f64,
    pub upper: f64,
    /// Bounds on `F_e`.
    pub fe_lower: f64,
    pub fe_upper: f64,
    /// Some input was outside `[0, 1]` and was clamped.
    pub flagged: bool,
}

impl HofmannBounds {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, favg: f64, slack: f64) -> bool {
        favg >= self.lower - slack && favg <= self.upper + slack
    }
}

fn favg_of_fe(fe: f64, d: f64) -> f64 {
    (d * fe + 1.0) / (d + 1.0)
}

/// `F_e ∈ [max(0, F1 + F2 - 1), min(F1, F2)]`, mapped to `F_av` through
/// `(d F_e + 1)/(d + 1)`. Inputs are clamped to `[0, 1]`.
pub fn hofmann_bounds(f1: f64, f2: f64, d: usize) -> HofmannBounds {
    let out_of_range =
        |f: f64| f.is_nan() || !(-FIDELITY_RANGE_TOL..=1.0 + FIDELITY_RANGE_TOL).contains(&f);
    let flagged = out_of_range(f1) || out_of_range(f2);
    let c1 = f1.clamp(0.0, 1.0);
    let c2 = f2.clamp(0.0, 1.0);
    let fe_lower = (c1 + c2 - 1.0).max(0.0);
    let fe_upper = c1.min(c2);
    let d = d as f64;
    HofmannBounds {
        lower: favg_of_fe(fe_lower, d),
        upper: favg_of_fe(fe_upper, d),
        fe_lower,
        fe_upper,
        flagged,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSummary {
    pub f1: f64,
    pub f2: f64,
    pub bounds: HofmannBounds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub protocol: Protocol,
    pub n_qubits: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub shot_mode: ShotMode,
    pub runs: Vec<RunReport>,
    /// Raw estimate of `F_av`. For protocol C this is the midpoint of the
    /// bound interval.
    pub favg: f64,
    /// Raw estimate of `F_e` (protocol A only).
    pub fe: Option<f64>,
    pub classical: Option<ClassicalSummary>,
    pub total_shots: u64,
    pub exact: Option<ExactReference>,
}

impl EstimateReport {
    /// `favg` restricted to `[0, 1]`, for display.
    pub fn favg_clamped(&self) -> f64 {
        self.favg.clamp(0.0, 1.0)
    }

    pub fn sample_count(&self) -> usize {
        self.runs.iter().map(|r| r.sample_count).sum()
    }
}

/// Per-setting `(λ_a, <W_k>)` pairs: one pair with `λ = 1` for state
/// inputs, `d` eigenstate pairs for operator inputs.
type ExpectationTable = Vec<(i8, f64)>;

/// Prepared execution of one plan: channel outputs are evaluated once per
/// distinct setting, then shots are simulated per plan entry.
pub struct PlanJob<'a> {
    dist: &'a RelevanceDistribution,
    plan: &'a SamplePlan,
    mode: ShotMode,
    tables: BTreeMap<usize, ExpectationTable>,
}

impl<'a> PlanJob<'a> {
    pub fn prepare<E: PlanExecutor>(
        dist: &'a RelevanceDistribution,
        plan: &'a SamplePlan,
        channel: &QuantumChannel,
        mode: ShotMode,
        executor: &E,
    ) -> Result<Self> {
        if channel.n_qubits() != dist.n_qubits() {
            return Err(Error::QubitMismatch {
                left: dist.n_qubits(),
                right: channel.n_qubits(),
            });
        }
        // entries grouped by input, so each input state is evolved once
        let mut by_input: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for r in plan.records() {
            let entries = by_input.entry(r.input).or_default();
            if !entries.contains(&r.entry) {
                entries.push(r.entry);
            }
        }
        let groups: Vec<(usize, Vec<usize>)> = by_input.into_iter().collect();
        let evaluated = first_error(executor.map(groups.len(), |g| {
            let (input, entries) = &groups[g];
            evaluate_input(dist, channel, *input, entries)
        }))?;
        let tables = groups
            .iter()
            .zip(evaluated)
            .flat_map(|((_, entries), tables)| entries.iter().copied().zip(tables))
            .collect();
        Ok(PlanJob {
            dist,
            plan,
            mode,
            tables,
        })
    }

    pub fn len(&self) -> usize {
        self.plan.sample_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Executes plan entry `l`.
    pub fn run(&self, l: usize) -> Result<SettingResult> {
        let record = &self.plan.records()[l];
        let table = &self.tables[&record.entry];
        let chi = record.chi;
        let (outcome_sum, mean) = match self.mode {
            ShotMode::Exact => {
                let mean = table
                    .iter()
                    .map(|&(lambda, e)| lambda as f64 * e)
                    .sum::<f64>()
                    / table.len() as f64;
                (None, mean)
            }
            ShotMode::Sampled => {
                let domain = self.dist.tag().domain();
                let deterministic = record.measurement.is_identity();
                let mut sum: i64 = 0;
                for j in 0..record.shots {
                    let mut rng = shot_stream(self.plan.seed, domain, l as u64, j);
                    let (lambda, e) = if table.len() == 1 {
                        table[0]
                    } else {
                        table[rng.random_range(0..table.len())]
                    };
                    let m = if deterministic {
                        1
                    } else {
                        shot_from_expectation(e, &mut rng)?
                    };
                    sum += (lambda * m) as i64;
                }
                (Some(sum), sum as f64 / record.shots as f64)
            }
        };
        Ok(SettingResult {
            input: record.input,
            measurement: record.measurement,
            chi,
            shots: record.shots,
            outcome_sum,
            x_tilde: mean / chi,
        })
    }
}

fn evaluate_input(
    dist: &RelevanceDistribution,
    channel: &QuantumChannel,
    input: usize,
    entries: &[usize],
) -> Result<Vec<ExpectationTable>> {
    let measurements: Vec<PauliString> = entries
        .iter()
        .map(|&e| dist.entries()[e].measurement)
        .collect();
    let outputs: Vec<(i8, DensityMatrix)> = match dist.input_operator(input) {
        Some(w) => (0..dist.dim())
            .map(|a| {
                let (state, lambda) = w.eigenstate(a);
                Ok((lambda, channel.apply(&DensityMatrix::from_pure(&state))?))
            })
            .collect::<Result<_>>()?,
        None => {
            let state: &StateVector = dist.input_state(input).ok_or(Error::DimensionMismatch {
                expected: dist.input_count(),
                actual: input,
            })?;
            alloc::vec![(1, channel.apply(&DensityMatrix::from_pure(state))?)]
        }
    };
    Ok(measurements
        .iter()
        .map(|w| {
            outputs
                .iter()
                .map(|(lambda, rho)| (*lambda, w.trace_with(rho.matrix()).re))
                .collect()
        })
        .collect())
}

/// Draws a plan for `dist` and executes it.
pub fn run_distribution<E: PlanExecutor>(
    dist: &RelevanceDistribution,
    channel: &QuantumChannel,
    epsilon: f64,
    delta: f64,
    seed: u64,
    mode: ShotMode,
    executor: &E,
) -> Result<RunReport> {
    let plan = draw_plan(dist, epsilon, delta, seed)?;
    let job = PlanJob::prepare(dist, &plan, channel, mode, executor)?;
    let records = first_error(executor.map(job.len(), |l| job.run(l)))?;
    let mut sum = 0.0;
    for r in &records {
        sum += r.x_tilde;
    }
    Ok(RunReport {
        tag: dist.tag(),
        estimate: sum / records.len() as f64,
        sample_count: records.len(),
        total_shots: plan.planned_shots(),
        records,
    })
}

/// Builder for a complete protocol run.
#[derive(Debug, Clone)]
pub struct Estimator<'a> {
    protocol: Protocol,
    unitary: &'a Unitary,
    channel: &'a QuantumChannel,
    epsilon: f64,
    delta: f64,
    seed: u64,
    shot_mode: ShotMode,
    family: Option<&'a MubFamily>,
    classical_bases: Option<(usize, usize)>,
    oracle: bool,
}

impl<'a> Estimator<'a> {
    pub fn new(protocol: Protocol, unitary: &'a Unitary, channel: &'a QuantumChannel) -> Self {
        Estimator {
            protocol,
            unitary,
            channel,
            epsilon: 0.1,
            delta: 0.1,
            seed: 0,
            shot_mode: ShotMode::Sampled,
            family: None,
            classical_bases: None,
            oracle: false,
        }
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn shot_mode(mut self, mode: ShotMode) -> Self {
        self.shot_mode = mode;
        self
    }

    /// Reuses an already built MUB family.
    pub fn family(mut self, family: &'a MubFamily) -> Self {
        self.family = Some(family);
        self
    }

    /// Picks the two bases of protocol C from the family. The default is
    /// the canonical basis and its Hadamard transform.
    pub fn classical_bases(mut self, first: usize, second: usize) -> Self {
        self.classical_bases = Some((first, second));
        self
    }

    /// Also computes the exact reference values.
    pub fn oracle(mut self, enabled: bool) -> Self {
        self.oracle = enabled;
        self
    }

    fn check(&self) -> Result<()> {
        if self.unitary.n_qubits() != self.channel.n_qubits() {
            return Err(Error::QubitMismatch {
                left: self.unitary.n_qubits(),
                right: self.channel.n_qubits(),
            });
        }
        super::sizing::check_accuracy(self.epsilon, self.delta)
    }

    fn with_family<T>(&self, f: impl FnOnce(&MubFamily) -> Result<T>) -> Result<T> {
        match self.family {
            Some(family) => f(family),
            None => f(&build_mub_family(self.unitary.n_qubits())?),
        }
    }

    fn classical_pair(&self) -> Result<(Vec<StateVector>, Vec<StateVector>)> {
        let n = self.unitary.n_qubits();
        match self.classical_bases {
            None => Ok((computational_basis(n), hadamard_basis(n))),
            Some((a, b)) => self.with_family(|f| {
                let (x, y) = f.basis_pair(a, b)?;
                Ok((x.to_vec(), y.to_vec()))
            }),
        }
    }

    /// The protocol's relevance distributions, in execution order.
    pub fn distributions(&self) -> Result<Vec<RelevanceDistribution>> {
        self.check()?;
        let u = self.unitary;
        match self.protocol {
            Protocol::ChannelState => Ok(alloc::vec![relevance_process(u)?]),
            Protocol::TwoDesign => {
                self.with_family(|f| Ok(alloc::vec![relevance_two_design(u, f)?]))
            }
            Protocol::Classical => {
                let (b1, b2) = self.classical_pair()?;
                Ok(alloc::vec![
                    relevance_classical(u, &b1, DistributionTag::C1)?,
                    relevance_classical(u, &b2, DistributionTag::C2)?,
                ])
            }
        }
    }

    pub fn run(&self) -> Result<EstimateReport> {
        self.run_with(&SequentialExecutor)
    }

    pub fn run_with<E: PlanExecutor>(&self, executor: &E) -> Result<EstimateReport> {
        let dists = self.distributions()?;
        self.run_prepared(&dists, executor)
    }

    /// Runs on distributions previously obtained from
    /// [`Estimator::distributions`].
    pub fn run_prepared<E: PlanExecutor>(
        &self,
        dists: &[RelevanceDistribution],
        executor: &E,
    ) -> Result<EstimateReport> {
        self.check()?;
        let tags: Vec<DistributionTag> = dists.iter().map(|d| d.tag()).collect();
        if tags != self.protocol.tags()
            || dists
                .iter()
                .any(|d| d.n_qubits() != self.unitary.n_qubits())
        {
            return Err(Error::ParameterOutOfRange {
                name: "distribution list",
                value: dists.len() as f64,
            });
        }
        let mut runs = Vec::with_capacity(dists.len());
        for dist in dists {
            runs.push(run_distribution(
                dist,
                self.channel,
                self.epsilon,
                self.delta,
                self.seed,
                self.shot_mode,
                executor,
            )?);
        }
        let d = self.unitary.dim();
        let (favg, fe, classical) = match self.protocol {
            Protocol::ChannelState => {
                let fe = runs[0].estimate;
                (favg_of_fe(fe, d as f64), Some(fe), None)
            }
            Protocol::TwoDesign => (runs[0].estimate, None, None),
            Protocol::Classical => {
                let (f1, f2) = (runs[0].estimate, runs[1].estimate);
                let bounds = hofmann_bounds(f1, f2, d);
                (
                    bounds.midpoint(),
                    None,
                    Some(ClassicalSummary { f1, f2, bounds }),
                )
            }
        };
        let exact = if self.oracle {
            let pair = match self.protocol {
                Protocol::Classical => Some(self.classical_pair()?),
                _ => None,
            };
            let pair_ref = pair.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()));
            Some(exact_reference(self.unitary, self.channel, pair_ref)?)
        } else {
            None
        };
        Ok(EstimateReport {
            protocol: self.protocol,
            n_qubits: self.unitary.n_qubits(),
            epsilon: self.epsilon,
            delta: self.delta,
            seed: self.seed,
            shot_mode: self.shot_mode,
            total_shots: runs.iter().map(|r| r.total_shots).sum(),
            runs,
            favg,
            fe,
            classical,
            exact,
        })
    }
}

/// Runs `protocol` with default options and sampled shots.
pub fn estimate(
    protocol: Protocol,
    unitary: &Unitary,
    channel: &QuantumChannel,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport> {
    Estimator::new(protocol, unitary, channel)
        .epsilon(epsilon)
        .delta(delta)
        .seed(seed)
        .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hofmann_examples() {
        let b = hofmann_bounds(1.0, 1.0, 2);
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let b = hofmann_bounds(0.9, 0.9, 2);
        assert!(close(b.lower, 2.6 / 3.0, 1e-12) && close(b.upper, 2.8 / 3.0, 1e-12));
        assert!(!b.flagged);
        let b = hofmann_bounds(0.4, 0.5, 2);
        assert!(close(b.lower, 1.0 / 3.0, 1e-12) && close(b.upper, 0.6, 1e-12));
        assert_eq!(b.fe_lower, 0.0);
        let b = hofmann_bounds(1.03, 0.95, 2);
        assert!(b.flagged && b.lower <= b.upper);
        assert!(close(b.fe_upper, 0.95, 1e-15));
    }

    #[test]
    fn ideal_clifford_gates_estimate_one() {
        for (u, n) in [
            (gates::hadamard(), 1),
            (gates::phase_s(), 1),
            (gates::cnot(), 2),
        ] {
            let ch = QuantumChannel::unitary_channel(&u);
            for p in Protocol::ALL {
                let report = estimate(p, &u, &ch, 0.2, 0.2, 11).unwrap();
                assert_eq!(report.n_qubits, n);
                for run in &report.runs {
                    assert!(run.records.iter().all(|r| close(r.x_tilde, 1.0, 1e-12)));
                    assert!(close(run.estimate, 1.0, 1e-12));
                }
                assert!(close(report.favg, 1.0, 1e-12), "{p} {}", report.favg);
            }
        }
    }

    #[test]
    fn exact_mode_is_one_for_any_ideal_gate() {
        let u = gates::t_gate();
        let ch = QuantumChannel::unitary_channel(&u);
        for p in Protocol::ALL {
            let r = Estimator::new(p, &u, &ch)
                .shot_mode(ShotMode::Exact)
                .seed(3)
                .run()
                .unwrap();
            assert!(close(r.favg, 1.0, 1e-9), "{p}");
        }
    }

    #[test]
    fn classical_depolarized_bounds_bracket_truth() {
        let u = Unitary::identity(1);
        let ch = QuantumChannel::depolarizing(1, 0.2).unwrap();
        let r = Estimator::new(Protocol::Classical, &u, &ch)
            .shot_mode(ShotMode::Exact)
            .oracle(true)
            .run()
            .unwrap();
        // X is 1 on identity settings and 0.8 otherwise, so only the
        // first sampling level remains
        let c = r.classical.unwrap();
        assert!(close(c.f1, 0.9, 0.1) && close(c.f2, 0.9, 0.1));
        assert!(c.bounds.contains(0.9, 0.2));
        let exact = r.exact.unwrap();
        assert!(close(exact.favg, 0.9, 1e-12));
        let (lower, upper) = exact.classical_bounds.unwrap();
        assert!(close(lower, 2.6 / 3.0, 1e-12) && close(upper, 2.8 / 3.0, 1e-12));
    }

    #[test]
    fn shot_totals_match_plan() {
        let u = gates::hadamard();
        let ch = QuantumChannel::depolarizing(1, 0.1).unwrap();
        let ch = QuantumChannel::compose(&QuantumChannel::unitary_channel(&u), &ch).unwrap();
        let r = estimate(Protocol::ChannelState, &u, &ch, 0.2, 0.2, 1).unwrap();
        let run = &r.runs[0];
        assert_eq!(run.sample_count, 125);
        assert_eq!(
            run.total_shots,
            run.records.iter().map(|s| s.shots).sum::<u64>()
        );
        for s in &run.records {
            let sum = s.outcome_sum.unwrap();
            assert!(sum.unsigned_abs() <= s.shots);
            assert!(close(
                s.x_tilde,
                sum as f64 / (s.shots as f64 * s.chi),
                1e-15
            ));
        }
    }

    #[test]
    fn reproducible_per_seed() {
        let u = gates::t_gate();
        let ch = QuantumChannel::compose(
            &QuantumChannel::unitary_channel(&u),
            &QuantumChannel::dephasing(1, 0.3).unwrap(),
        )
        .unwrap();
        let a = estimate(Protocol::TwoDesign, &u, &ch, 0.2, 0.2, 9).unwrap();
        let b = estimate(Protocol::TwoDesign, &u, &ch, 0.2, 0.2, 9).unwrap();
        let c = estimate(Protocol::TwoDesign, &u, &ch, 0.2, 0.2, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.favg, c.favg);
    }

    #[test]
    fn mismatched_qubits_rejected() {
        let u = Unitary::identity(2);
        let ch = QuantumChannel::identity(1);
        assert!(matches!(
            estimate(Protocol::TwoDesign, &u, &ch, 0.1, 0.1, 0),
            Err(Error::QubitMismatch { .. })
        ));
    }

    #[test]
    fn protocol_names_parse() {
        for p in Protocol::ALL {
            assert_eq!(p.as_str().parse::<Protocol>().unwrap(), p);
        }
        assert!("D".parse::<Protocol>().is_err());
    }
}
