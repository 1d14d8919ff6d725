//! End-to-end checks of the binary: exit codes, reproducibility, thread
//! independence, and the validate diagnostics.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bbm-lab"))
}

fn write_config(dir: &Path, contents: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, contents).unwrap();
    path
}

fn tmp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("bbm-lab-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Quick configuration for the cheap solver checks.
const SOLVER_CFG: &str = r#"{
  "experiment": "solver-validate",
  "seed": 11,
  "solver": { "dt": 0.002, "t_final": 0.2, "m_grid": 32 }
}"#;

#[test]
fn solver_validate_passes_and_writes_outputs() {
    let dir = tmp_dir("solve");
    let cfg = write_config(&dir, SOLVER_CFG);
    let out = dir.join("out");
    let status = bin()
        .args(["solver-validate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["manifest.json", "summary.txt", "config.json", "norms.csv"] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    for key in ["master_seed", "member_seed_rule", "config_hash", "tool_version", "\"pass\": true"] {
        assert!(manifest.contains(key), "manifest lacks {key}: {manifest}");
    }
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("claim under test"));
    assert!(summary.contains("overall: PASS"));
}

#[test]
fn reruns_and_thread_counts_are_byte_identical() {
    let dir = tmp_dir("determinism");
    let cfg = write_config(
        &dir,
        r#"{
  "experiment": "ck-divergence",
  "seed": 99,
  "nonlinearity": { "ck_scales": [16, 32, 64, 128, 256, 512, 1024], "ck_mc_samples": 1500 }
}"#,
    );
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "1", "4"].iter().enumerate() {
        let out = dir.join(format!("out{i}"));
        let status = bin()
            .args(["ck-divergence", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .args(["--threads", threads])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(out.join("ck.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "identical reruns must be byte-identical");
    assert_eq!(outputs[0], outputs[2], "thread count must not change the numbers");
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tmp_dir("seed");
    let cfg = write_config(&dir, SOLVER_CFG);
    let out = dir.join("out");
    let status = bin()
        .args(["solver-validate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--seed", "777"])
        .status()
        .unwrap();
    assert!(status.success());
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"master_seed\": 777"));
}

#[test]
fn schema_errors_name_the_key_and_exit_2() {
    let dir = tmp_dir("schema");
    let cfg = write_config(
        &dir,
        r#"{ "experiment": "tails", "tails": { "alpha": 0.5, "bogus_key": 3 } }"#,
    );
    let out = bin()
        .args(["tails", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bogus_key"), "{stderr}");
}

#[test]
fn experiment_mismatch_exits_2() {
    let dir = tmp_dir("mismatch");
    let cfg = write_config(&dir, SOLVER_CFG);
    let out = bin().args(["tails", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regime_violation_exits_1() {
    let dir = tmp_dir("regime");
    // alpha below the existence threshold: the module rejects the ladder
    let cfg = write_config(
        &dir,
        r#"{ "experiment": "nz-convergence", "nonlinearity": { "alpha": 0.2, "k_list": [16], "n_samples": 10 } }"#,
    );
    let out = bin()
        .args(["nz-convergence", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("regime"), "{stderr}");
}

#[test]
fn validate_prints_diagnostics() {
    let dir = tmp_dir("validate");
    let cfg = write_config(
        &dir,
        r#"{ "experiment": "nz-convergence", "nonlinearity": { "alpha": 0.2 } }"#,
    );
    let out = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success(), "validate is diagnostics-only");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("warning"), "{stdout}");
    assert!(stdout.contains("1/4"), "{stdout}");

    // a well-formed inflation config echoes all six conditions with values
    let cfg2 = write_config(&dir, r#"{ "experiment": "inflation" }"#);
    let out2 = bin().args(["validate", "--config"]).arg(&cfg2).output().unwrap();
    assert!(out2.status.success());
    let stdout2 = String::from_utf8_lossy(&out2.stdout);
    assert_eq!(stdout2.matches("condition").count(), 6, "{stdout2}");
    assert!(stdout2.contains("case 1"));
}
