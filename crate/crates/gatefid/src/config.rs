//! JSON experiment configuration.

use serde::Deserialize;
use serde_json::{Map, Value};

use gatefid_core::channel::QuantumChannel;
use gatefid_core::estimators::{Protocol, ShotMode};
use gatefid_core::linalg::{Matrix, Unitary};
use gatefid_core::pauli::PauliString;
use gatefid_core::{gates, Complex64, Error as CoreError};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Estimate,
    Resources,
    DistributionDump,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Estimate => "estimate",
            Mode::Resources => "resources",
            Mode::DistributionDump => "distribution-dump",
        }
    }

    pub fn parse(s: &str) -> Result<Mode, CliError> {
        match s {
            "estimate" => Ok(Mode::Estimate),
            "resources" => Ok(Mode::Resources),
            "distribution-dump" => Ok(Mode::DistributionDump),
            _ => Err(CliError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GateSpec {
    Named(String),
    /// Rows of `[re, im]` pairs.
    Grid(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ProtocolSpec {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Single(Map<String, Value>),
    Sequence(Vec<Map<String, Value>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ShotSpec {
    #[default]
    Sampled,
    Exact,
}

fn default_accuracy() -> f64 {
    0.1
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub mode: Mode,
    pub n: Option<usize>,
    pub gate: Option<GateSpec>,
    pub noise: Option<NoiseSpec>,
    #[serde(alias = "protocols")]
    pub protocol: Option<ProtocolSpec>,
    #[serde(default = "default_accuracy")]
    pub epsilon: f64,
    #[serde(default = "default_accuracy")]
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub shots: ShotSpec,
    /// Inclusive qubit range for resource tables.
    pub n_range: Option<[usize; 2]>,
    /// Restricts resource tables to general (`false`) or Clifford (`true`)
    /// rows; both when absent.
    pub clifford: Option<bool>,
    /// Indices into the MUB family for protocol C.
    pub classical_bases: Option<[usize; 2]>,
    #[serde(default = "default_true")]
    pub csv: bool,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn shot_mode(&self) -> ShotMode {
        match self.shots {
            ShotSpec::Sampled => ShotMode::Sampled,
            ShotSpec::Exact => ShotMode::Exact,
        }
    }

    pub fn qubits(&self) -> Result<usize, CliError> {
        match self.n {
            Some(0) => Err(CliError::Config("n must be positive".into())),
            Some(n) => Ok(n),
            None => match &self.gate {
                Some(GateSpec::Grid(rows)) => rows
                    .len()
                    .checked_ilog2()
                    .map(|n| n as usize)
                    .filter(|&n| n > 0)
                    .ok_or_else(|| CliError::Config("gate grid must be at least 2x2".into())),
                _ => Err(CliError::Config("missing key n".into())),
            },
        }
    }

    /// Requested protocols in canonical order, without duplicates.
    pub fn protocols(&self) -> Result<Vec<Protocol>, CliError> {
        let names: Vec<&str> = match &self.protocol {
            None => return Ok(Protocol::ALL.to_vec()),
            Some(ProtocolSpec::One(s)) if s == "all" => return Ok(Protocol::ALL.to_vec()),
            Some(ProtocolSpec::One(s)) => vec![s.as_str()],
            Some(ProtocolSpec::Many(v)) => v.iter().map(String::as_str).collect(),
        };
        if names.is_empty() {
            return Err(CliError::Config("protocol list is empty".into()));
        }
        let mut out = Vec::new();
        for name in names {
            let p: Protocol = name
                .parse()
                .map_err(|e: CoreError| CliError::Config(e.to_string()))?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn gate_label(&self) -> String {
        match &self.gate {
            None => "I".into(),
            Some(GateSpec::Named(s)) => s.clone(),
            Some(GateSpec::Grid(_)) => "explicit".into(),
        }
    }

    pub fn unitary(&self) -> Result<Unitary, CliError> {
        let n = self.qubits()?;
        check_dense(n)?;
        match &self.gate {
            None => Ok(Unitary::identity(n)),
            Some(GateSpec::Named(name)) => named_gate(name, n),
            Some(GateSpec::Grid(rows)) => {
                let d = 1usize << n;
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(CliError::Config(format!(
                        "gate grid must be {d}x{d} for n = {n}"
                    )));
                }
                let rows: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .collect();
                let m = Matrix::from_rows(&rows).map_err(CliError::from_core_config)?;
                Unitary::new(m).map_err(CliError::from_core_config)
            }
        }
    }

    /// Noise map applied after the ideal gate; identity when absent.
    pub fn noise(&self) -> Result<QuantumChannel, CliError> {
        let n = self.qubits()?;
        check_dense(n)?;
        let stages: Vec<(&String, &Value)> = match &self.noise {
            None => Vec::new(),
            Some(NoiseSpec::Single(map)) => {
                if map.len() > 1 {
                    return Err(CliError::Config(
                        "noise map has several entries; use a list to fix their order".into(),
                    ));
                }
                map.iter().collect()
            }
            Some(NoiseSpec::Sequence(list)) => {
                let mut out = Vec::new();
                for map in list {
                    if map.len() != 1 {
                        return Err(CliError::Config(
                            "each noise stage needs exactly one entry".into(),
                        ));
                    }
                    out.extend(map.iter());
                }
                out
            }
        };
        let mut channel = QuantumChannel::identity(n);
        for (name, params) in stages {
            let stage = noise_stage(name, params, n)?;
            channel =
                QuantumChannel::compose(&channel, &stage).map_err(CliError::from_core_config)?;
        }
        Ok(channel)
    }

    /// The implemented gate: the noise map after the ideal unitary.
    pub fn channel(&self, u: &Unitary) -> Result<QuantumChannel, CliError> {
        QuantumChannel::compose(&QuantumChannel::unitary_channel(u), &self.noise()?)
            .map_err(CliError::from_core_config)
    }
}

fn check_dense(n: usize) -> Result<(), CliError> {
    if n > gatefid_core::MAX_DENSE_QUBITS {
        return Err(CliError::Infeasible(format!(
            "n = {n} exceeds the dense limit of {} qubits",
            gatefid_core::MAX_DENSE_QUBITS
        )));
    }
    Ok(())
}

fn named_gate(name: &str, n: usize) -> Result<Unitary, CliError> {
    let single = match name {
        "I" | "1" => return Ok(Unitary::identity(n)),
        "H" => gates::hadamard(),
        "S" => gates::phase_s(),
        "T" => gates::t_gate(),
        "X" => gates::pauli_x(),
        "Y" => gates::pauli_y(),
        "Z" => gates::pauli_z(),
        "QFT" => return Ok(gates::qft(n)),
        "CNOT" => {
            if n < 2 {
                return Err(CliError::Config("CNOT needs n >= 2".into()));
            }
            return Ok(gates::cnot_on(n, 0, 1));
        }
        _ => return Err(CliError::Config(format!("unknown gate {name:?}"))),
    };
    Ok(gates::tensor_power(&single, n))
}

fn number(v: &Value, stage: &str, key: &str) -> Result<f64, CliError> {
    let v = match v {
        Value::Object(map) => map
            .get(key)
            .ok_or_else(|| CliError::Config(format!("{stage}: missing {key}")))?,
        other => other,
    };
    v.as_f64()
        .ok_or_else(|| CliError::Config(format!("{stage}: {key} must be a number")))
}

fn noise_stage(name: &str, params: &Value, n: usize) -> Result<QuantumChannel, CliError> {
    let built = match name {
        "depolarizing" => QuantumChannel::depolarizing(n, number(params, name, "p")?),
        "dephasing" => QuantumChannel::dephasing(n, number(params, name, "gamma")?),
        "amplitude_damping" => QuantumChannel::amplitude_damping(n, number(params, name, "gamma")?),
        "overrotation" => {
            let axis = match params.get("axis") {
                Some(Value::String(s)) => s.clone(),
                Some(_) => {
                    return Err(CliError::Config(
                        "overrotation: axis must be a Pauli label".into(),
                    ))
                }
                None => "Z".repeat(n),
            };
            let axis: PauliString = axis.parse().map_err(CliError::from_core_config)?;
            if axis.n_qubits() != n {
                return Err(CliError::Config(format!(
                    "overrotation: axis must have {n} letters"
                )));
            }
            QuantumChannel::coherent_overrotation(&axis, number(params, name, "angle")?)
        }
        _ => return Err(CliError::Config(format!("unknown noise stage {name:?}"))),
    };
    built.map_err(CliError::from_core_config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = Config::parse(
            r#"{"n": 1, "gate": "H", "noise": {"depolarizing": 0.2}, "protocol": "C"}"#,
        )
        .unwrap();
        assert_eq!(c.mode, Mode::Estimate);
        assert_eq!(c.protocols().unwrap(), vec![Protocol::Classical]);
        assert_eq!(c.unitary().unwrap().n_qubits(), 1);
        assert_eq!(c.noise().unwrap().kraus_ops().len(), 4);
        assert!(c.csv);
    }

    #[test]
    fn protocol_lists() {
        let c = Config::parse(
            r#"{"mode": "resources", "protocols": ["C", "A", "C"], "n_range": [1, 5]}"#,
        )
        .unwrap();
        assert_eq!(
            c.protocols().unwrap(),
            vec![Protocol::ChannelState, Protocol::Classical]
        );
        let c = Config::parse(r#"{"n": 2, "protocol": "all"}"#).unwrap();
        assert_eq!(c.protocols().unwrap().len(), 3);
        let c = Config::parse(r#"{"n": 2, "protocol": "D"}"#).unwrap();
        assert!(c.protocols().is_err());
    }

    #[test]
    fn noise_sequences_and_errors() {
        let c = Config::parse(
            r#"{"n": 2, "noise": [{"dephasing": {"gamma": 0.1}}, {"overrotation": {"axis": "XZ", "angle": 0.05}}]}"#,
        )
        .unwrap();
        assert!(c.noise().is_ok());
        let c =
            Config::parse(r#"{"n": 1, "noise": {"depolarizing": 0.1, "dephasing": 0.1}}"#).unwrap();
        assert!(c.noise().is_err());
        let c = Config::parse(r#"{"n": 1, "noise": {"melting": 0.1}}"#).unwrap();
        assert!(c.noise().is_err());
        let c = Config::parse(r#"{"n": 1, "noise": {"depolarizing": 1.5}}"#).unwrap();
        assert!(c.noise().is_err());
        assert!(Config::parse(r#"{"n": 1, "colour": "red"}"#).is_err());
    }

    #[test]
    fn explicit_grid() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(r#"{{"gate": [[[{h}, 0], [{h}, 0]], [[{h}, 0], [-{h}, 0]]]}}"#);
        let c = Config::parse(&text).unwrap();
        assert_eq!(c.qubits().unwrap(), 1);
        let u = c.unitary().unwrap();
        assert!(u.matrix().max_abs_diff(gates::hadamard().matrix()) < 1e-12);
        let c = Config::parse(r#"{"gate": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}"#).unwrap();
        assert!(c.unitary().is_err());
    }

    #[test]
    fn named_gates() {
        for name in ["H", "S", "T", "X", "Y", "Z", "I", "QFT"] {
            let c = Config::parse(&format!(r#"{{"n": 2, "gate": "{name}"}}"#)).unwrap();
            assert_eq!(c.unitary().unwrap().n_qubits(), 2);
        }
        let c = Config::parse(r#"{"n": 1, "gate": "CNOT"}"#).unwrap();
        assert!(c.unitary().is_err());
        let c = Config::parse(r#"{"n": 11, "gate": "H"}"#).unwrap();
        assert!(matches!(c.unitary(), Err(CliError::Infeasible(_))));
    }
}
