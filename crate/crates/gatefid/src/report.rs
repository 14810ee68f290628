//! Serialized report layout. `schema` is bumped on incompatible changes.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of `settings.csv`.
pub const SETTINGS_COLUMNS: &str = "distribution,l,input,measurement,chi_ideal,shots,x_tilde";
pub const RESOURCE_COLUMNS: &str =
    "protocol,n,clifford,n_input,n_meas,n_setting,n_exp_bound,n_exp_scaling,c_class_scaling,c_class_value";
pub const DISTRIBUTION_COLUMNS: &str = "distribution,input,measurement,chi_ideal,probability";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub mode: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Vec<ProtocolResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<Vec<ResourceRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<DistributionDump>>,
}

#[derive(Debug, Serialize)]
pub struct Experiment {
    pub n: usize,
    pub gate: String,
    pub noise: Value,
    pub epsilon: f64,
    pub delta: f64,
    pub shots: &'static str,
    pub oracle: bool,
}

#[derive(Debug, Serialize)]
pub struct ProtocolResult {
    pub protocol: &'static str,
    /// Raw estimate; may leave `[0, 1]`.
    pub favg: f64,
    pub favg_clamped: f64,
    pub fe: Option<f64>,
    pub sample_count: usize,
    pub total_shots: u64,
    pub classical: Option<ClassicalRow>,
    pub runs: Vec<RunRow>,
    pub exact: Option<ExactRow>,
}

#[derive(Debug, Serialize)]
pub struct ClassicalRow {
    pub f1: f64,
    pub f2: f64,
    pub lower: f64,
    pub upper: f64,
    pub flagged: bool,
}

#[derive(Debug, Serialize)]
pub struct RunRow {
    pub distribution: &'static str,
    pub estimate: f64,
    pub sample_count: usize,
    pub total_shots: u64,
    pub distinct_settings: usize,
    pub support: usize,
    pub event_space: u128,
}

#[derive(Debug, Serialize)]
pub struct ExactRow {
    pub fe: f64,
    pub favg: f64,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ResourceRow {
    pub protocol: &'static str,
    pub n: usize,
    pub clifford: bool,
    pub n_input: u128,
    pub n_meas: u128,
    pub n_setting: u128,
    pub n_exp_bound: f64,
    pub n_exp_scaling: &'static str,
    pub c_class_scaling: &'static str,
    pub c_class_value: u128,
}

#[derive(Debug, Serialize)]
pub struct DistributionDump {
    pub distribution: &'static str,
    pub n: usize,
    pub event_space: u128,
    pub support: usize,
    pub total_probability: f64,
    pub entries: Vec<DumpEntry>,
}

#[derive(Debug, Serialize)]
pub struct DumpEntry {
    pub input: String,
    pub measurement: String,
    pub chi: f64,
    pub probability: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}
