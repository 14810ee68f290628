use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gatefid_core::estimators::{Estimator, Protocol, RelevanceDistribution, SettingResult};
use gatefid_core::mub::{build_mub_family, MubFamily};
use gatefid_core::resources::resource_table;
use gatefid_core::EstimateReport;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{Config, Mode, NoiseSpec};
use crate::error::CliError;
use crate::executor::RayonExecutor;
use crate::report::*;

/// Largest `n` accepted by distribution-dump mode.
pub const MAX_DUMP_QUBITS: usize = 3;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub threads: usize,
}

/// Files written by a run plus a short human-readable summary.
#[derive(Debug)]
pub struct Outcome {
    pub report: PathBuf,
    pub csv: Option<PathBuf>,
    pub summary: String,
}

pub fn run_file(
    config_path: &Path,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<Outcome, CliError> {
    let bytes = fs::read(config_path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    run_text(&text, &hash, out_dir, overrides)
}

/// Runs a config given as text; `config_hash` is recorded in the report.
pub fn run_text(
    text: &str,
    config_hash: &str,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<Outcome, CliError> {
    let mut config = Config::parse(text)?;
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(mode) = overrides.mode {
        config.mode = mode;
    }
    let executor = RayonExecutor::new(overrides.threads)
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut report = Report {
        schema: SCHEMA_VERSION,
        mode: config.mode.as_str(),
        config_sha256: config_hash.to_string(),
        seed: config.seed,
        experiment: None,
        results: None,
        resources: None,
        distributions: None,
    };
    let (csv_name, csv, summary) = match config.mode {
        Mode::Estimate => estimate_mode(&config, &executor, &mut report)?,
        Mode::Resources => resources_mode(&config, &mut report)?,
        Mode::DistributionDump => dump_mode(&config, &mut report)?,
    };
    fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join("report.json");
    fs::write(&report_path, report.to_json())?;
    let csv_path = if config.csv {
        let path = out_dir.join(csv_name);
        fs::write(&path, csv)?;
        Some(path)
    } else {
        None
    };
    Ok(Outcome {
        report: report_path,
        csv: csv_path,
        summary,
    })
}

fn experiment(config: &Config) -> Result<Experiment, CliError> {
    let noise = match &config.noise {
        None => Value::Null,
        Some(NoiseSpec::Single(map)) => Value::Object(map.clone()),
        Some(NoiseSpec::Sequence(list)) => {
            Value::Array(list.iter().cloned().map(Value::Object).collect())
        }
    };
    Ok(Experiment {
        n: config.qubits()?,
        gate: config.gate_label(),
        noise,
        epsilon: config.epsilon,
        delta: config.delta,
        shots: config.shot_mode().as_str(),
        oracle: config.oracle,
    })
}

fn needs_family(config: &Config, protocols: &[Protocol]) -> bool {
    protocols.contains(&Protocol::TwoDesign)
        || (config.classical_bases.is_some() && protocols.contains(&Protocol::Classical))
}

fn configured<'a>(
    config: &Config,
    protocol: Protocol,
    u: &'a gatefid_core::Unitary,
    channel: &'a gatefid_core::QuantumChannel,
    family: Option<&'a MubFamily>,
) -> Estimator<'a> {
    let mut est = Estimator::new(protocol, u, channel)
        .epsilon(config.epsilon)
        .delta(config.delta)
        .seed(config.seed)
        .shot_mode(config.shot_mode())
        .oracle(config.oracle);
    if let Some(f) = family {
        est = est.family(f);
    }
    if let Some([a, b]) = config.classical_bases {
        est = est.classical_bases(a, b);
    }
    est
}

fn estimate_mode(
    config: &Config,
    executor: &RayonExecutor,
    report: &mut Report,
) -> Result<(&'static str, String, String), CliError> {
    let protocols = config.protocols()?;
    let u = config.unitary()?;
    let channel = config.channel(&u)?;
    let family = if needs_family(config, &protocols) {
        Some(build_mub_family(u.n_qubits()).map_err(CliError::from_core_run)?)
    } else {
        None
    };
    let mut results = Vec::new();
    let mut csv = String::from(SETTINGS_COLUMNS);
    csv.push('\n');
    let mut summary = String::new();
    for protocol in protocols {
        let est = configured(config, protocol, &u, &channel, family.as_ref());
        let dists = est.distributions().map_err(CliError::from_core_run)?;
        let r = est
            .run_prepared(&dists, executor)
            .map_err(CliError::from_core_run)?;
        for (dist, run) in dists.iter().zip(&r.runs) {
            write_settings(&mut csv, dist, &run.records);
        }
        summarize(&mut summary, &r);
        results.push(protocol_result(&r, &dists));
    }
    report.experiment = Some(experiment(config)?);
    report.results = Some(results);
    Ok(("settings.csv", csv, summary))
}

fn write_settings(csv: &mut String, dist: &RelevanceDistribution, records: &[SettingResult]) {
    for (l, r) in records.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            dist.tag(),
            l,
            dist.input_label(r.input),
            r.measurement,
            r.chi,
            r.shots,
            r.x_tilde
        );
    }
}

fn summarize(out: &mut String, r: &EstimateReport) {
    let _ = write!(out, "protocol {}: F_av = {:.6}", r.protocol, r.favg);
    if let Some(c) = &r.classical {
        let _ = write!(
            out,
            " in [{:.6}, {:.6}] (F1 = {:.6}, F2 = {:.6})",
            c.bounds.lower, c.bounds.upper, c.f1, c.f2
        );
    }
    if let Some(fe) = r.fe {
        let _ = write!(out, " (F_e = {fe:.6})");
    }
    let _ = write!(out, ", L = {}, N_exp = {}", r.sample_count(), r.total_shots);
    if let Some(x) = &r.exact {
        let _ = write!(out, ", exact F_av = {:.6}", x.favg);
    }
    out.push('\n');
}

fn protocol_result(r: &EstimateReport, dists: &[RelevanceDistribution]) -> ProtocolResult {
    let runs = r
        .runs
        .iter()
        .zip(dists)
        .map(|(run, dist)| {
            let mut distinct: Vec<(usize, usize)> = run
                .records
                .iter()
                .map(|s| (s.input, s.measurement.index()))
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            RunRow {
                distribution: run.tag.as_str(),
                estimate: run.estimate,
                sample_count: run.sample_count,
                total_shots: run.total_shots,
                distinct_settings: distinct.len(),
                support: dist.len(),
                event_space: dist.event_space_size(),
            }
        })
        .collect();
    ProtocolResult {
        protocol: r.protocol.as_str(),
        favg: r.favg,
        favg_clamped: r.favg_clamped(),
        fe: r.fe,
        sample_count: r.sample_count(),
        total_shots: r.total_shots,
        classical: r.classical.map(|c| ClassicalRow {
            f1: c.f1,
            f2: c.f2,
            lower: c.bounds.lower,
            upper: c.bounds.upper,
            flagged: c.bounds.flagged,
        }),
        runs,
        exact: r.exact.map(|x| ExactRow {
            fe: x.fe,
            favg: x.favg,
            f1: x.f1,
            f2: x.f2,
            lower: x.classical_bounds.map(|b| b.0),
            upper: x.classical_bounds.map(|b| b.1),
        }),
    }
}

fn resources_mode(
    config: &Config,
    report: &mut Report,
) -> Result<(&'static str, String, String), CliError> {
    let protocols = config.protocols()?;
    let [lo, hi] = match (config.n_range, config.n) {
        (Some(range), _) => range,
        (None, Some(n)) => [n, n],
        (None, None) => return Err(CliError::Config("resources mode needs n or n_range".into())),
    };
    if lo == 0 || lo > hi {
        return Err(CliError::Config(format!("invalid n_range [{lo}, {hi}]")));
    }
    let variants: Vec<bool> = match config.clifford {
        Some(c) => vec![c],
        None => vec![false, true],
    };
    let mut rows = Vec::new();
    let mut csv = String::from(RESOURCE_COLUMNS);
    csv.push('\n');
    for &clifford in &variants {
        for &protocol in &protocols {
            for n in lo..=hi {
                let t = resource_table(protocol, n, config.epsilon, config.delta, clifford)
                    .map_err(CliError::from_core_run)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{},{}",
                    protocol,
                    n,
                    clifford,
                    t.n_input,
                    t.n_meas,
                    t.n_setting,
                    t.n_exp_bound,
                    t.n_exp_label,
                    t.class_cost_label,
                    t.class_cost_value
                );
                rows.push(ResourceRow {
                    protocol: protocol.as_str(),
                    n,
                    clifford,
                    n_input: t.n_input,
                    n_meas: t.n_meas,
                    n_setting: t.n_setting,
                    n_exp_bound: t.n_exp_bound,
                    n_exp_scaling: t.n_exp_label,
                    c_class_scaling: t.class_cost_label,
                    c_class_value: t.class_cost_value,
                });
            }
        }
    }
    let summary = format!("{} resource rows for n in [{lo}, {hi}]\n", rows.len());
    report.resources = Some(rows);
    Ok(("resources.csv", csv, summary))
}

fn dump_mode(
    config: &Config,
    report: &mut Report,
) -> Result<(&'static str, String, String), CliError> {
    let n = config.qubits()?;
    if n > MAX_DUMP_QUBITS {
        return Err(CliError::Infeasible(format!(
            "distribution-dump supports n <= {MAX_DUMP_QUBITS}, got {n}"
        )));
    }
    let protocols = config.protocols()?;
    let u = config.unitary()?;
    let channel = config.channel(&u)?;
    let family = if needs_family(config, &protocols) {
        Some(build_mub_family(n).map_err(CliError::from_core_run)?)
    } else {
        None
    };
    let mut dumps = Vec::new();
    let mut csv = String::from(DISTRIBUTION_COLUMNS);
    csv.push('\n');
    let mut summary = String::new();
    for protocol in protocols {
        let est = configured(config, protocol, &u, &channel, family.as_ref());
        for dist in est.distributions().map_err(CliError::from_core_run)? {
            let entries: Vec<DumpEntry> = dist
                .entries()
                .iter()
                .map(|e| DumpEntry {
                    input: dist.input_label(e.input),
                    measurement: e.measurement.to_string(),
                    chi: e.chi,
                    probability: e.probability,
                })
                .collect();
            for e in &entries {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    dist.tag(),
                    e.input,
                    e.measurement,
                    e.chi,
                    e.probability
                );
            }
            let _ = writeln!(
                summary,
                "distribution {}: {} of {} settings, total probability {}",
                dist.tag(),
                dist.len(),
                dist.event_space_size(),
                dist.total_probability()
            );
            dumps.push(DistributionDump {
                distribution: dist.tag().as_str(),
                n,
                event_space: dist.event_space_size(),
                support: dist.len(),
                total_probability: dist.total_probability(),
                entries,
            });
        }
    }
    report.experiment = Some(experiment(config)?);
    report.distributions = Some(dumps);
    Ok(("distribution.csv", csv, summary))
}
