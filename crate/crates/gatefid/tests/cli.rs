use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gatefid(config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatefid"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn estimate_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n": 1, "gate": "H", "noise": {"depolarizing": 0.2}, "protocol": "C",
            "epsilon": 0.1, "delta": 0.1, "seed": 7, "oracle": true}"#,
    );
    let out = dir.path().join("out");
    let run = gatefid(&config, &out, &[]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("protocol C"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["config_sha256"].as_str().unwrap().len(), 64);
    let result = &report["results"][0];
    let lower = result["classical"]["lower"].as_f64().unwrap();
    let upper = result["classical"]["upper"].as_f64().unwrap();
    assert!(lower <= upper);
    assert!((result["exact"]["favg"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    let csv = fs::read_to_string(out.join("settings.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "distribution,l,input,measurement,chi_ideal,shots,x_tilde"
    );
}

#[test]
fn seed_override_changes_only_seeded_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n": 1, "gate": "T", "noise": {"dephasing": 0.2}, "protocol": "B", "seed": 1}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(gatefid(&config, &a, &[]).status.success());
    assert!(gatefid(&config, &b, &["--seed", "2"]).status.success());
    let ra: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    let rb: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(b.join("report.json")).unwrap()).unwrap();
    assert_eq!(ra["seed"], 1);
    assert_eq!(rb["seed"], 2);
    assert_eq!(ra["config_sha256"], rb["config_sha256"]);
    assert_ne!(ra["results"], rb["results"]);
}

#[test]
fn mode_override_runs_resources() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"n": 3, "protocol": ["A", "C"]}"#);
    let out = dir.path().join("out");
    let run = gatefid(&config, &out, &["--mode", "resources"]);
    assert!(run.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["mode"], "resources");
    assert_eq!(report["resources"].as_array().unwrap().len(), 4);
    assert!(out.join("resources.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let code = |text: &str| {
        let config = write_config(dir.path(), text);
        gatefid(&config, &out, &[]).status.code()
    };
    assert_eq!(code("{\"n\": 1,"), Some(1));
    assert_eq!(
        code(r#"{"n": 1, "noise": {"depolarizing": -0.5}}"#),
        Some(1)
    );
    assert_eq!(code(r#"{"n": 6, "protocol": "A"}"#), Some(2));
    assert_eq!(code(r#"{"n": 4, "mode": "distribution-dump"}"#), Some(2));
    let missing = gatefid(&dir.path().join("absent.json"), &out, &[]);
    assert_eq!(missing.status.code(), Some(4));
    let config = write_config(dir.path(), r#"{"n": 1}"#);
    assert_eq!(
        gatefid(&config, &out, &["--mode", "plot"]).status.code(),
        Some(1)
    );
}
