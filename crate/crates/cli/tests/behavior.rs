//! End-to-end behavior of the binary: exit codes, report files, determinism,
//! configuration loading and the report-directory override.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_powergap"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json_report(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("report file exists");
    serde_json::from_str(&text).expect("report is valid JSON")
}

#[test]
fn invalid_inputs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["verify", "--m", "1"],
        &["verify", "--m", "155", "--k", "nonsense"],
        &["verify", "--m", "155", "--k-valid-from", "1e4"],
        &["table-m", "--precision", "16"],
        &["table-m", "--config", "/nonexistent/powergap.toml"],
        &["no-such-subcommand"],
    ];
    for args in cases {
        let out = run_in(tmp.path(), args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "expected exit 2 for {args:?}, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn infeasible_alpha_exits_1_with_structured_report() {
    let tmp = tempfile::tempdir().unwrap();
    let json = tmp.path().join("out.json");
    let out = run_in(
        tmp.path(),
        &[
            "verify",
            "--m",
            "155",
            "--alpha",
            "0.9",
            "--json",
            json.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json_report(&json);
    assert_eq!(v["report"]["outcome"], "no_threshold");
    assert!(v["report"]["message"].is_string());
    assert!(v["report"]["config"]["precision_bits"].is_u64());
}

#[test]
fn reports_are_deterministic_apart_from_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a.json"), tmp.path().join("b.json"));
    for path in [&a, &b] {
        let out = run_in(
            tmp.path(),
            &["table-m", "--json", path.to_str().unwrap()],
        );
        assert_eq!(out.status.code(), Some(0));
        // Distinct wall-clock seconds so equal timestamps cannot mask a
        // metadata leak into the report body.
        std::thread::sleep(std::time::Duration::from_millis(1100));
    }
    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("timestamp_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b), "report bytes differ beyond the timestamp");
    assert_ne!(
        json_report(&a)["metadata"]["timestamp_unix"],
        json_report(&b)["metadata"]["timestamp_unix"]
    );
}

#[test]
fn report_embeds_config_snapshot_and_schema_version() {
    let tmp = tempfile::tempdir().unwrap();
    let json = tmp.path().join("crossover.json");
    let out = run_in(tmp.path(), &["crossover", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&json);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["metadata"]["tool"], "powergap");
    let cfg = &v["report"]["config"];
    assert_eq!(cfg["zeros"]["density"]["c1"], "17.418");
    assert_eq!(cfg["zeros"]["density"]["c2"], "5.272");
    assert_eq!(cfg["verifier"]["sigma1"], "0.6");
    assert!(cfg["zerofree"]["provenance"].is_string() || cfg["zerofree"].is_object());
    assert!(v["report"]["crossover"]["log_lambda"].is_string());
}

#[test]
fn config_file_overrides_and_rejects_unknown_keys() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.toml");
    std::fs::write(&good, "precision_bits = 192\n").unwrap();
    let json = tmp.path().join("out.json");
    let out = run_in(
        tmp.path(),
        &[
            "crossover",
            "--config",
            good.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_report(&json)["report"]["config"]["precision_bits"], 192);

    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "precision_bits = 192\nmystery_knob = true\n").unwrap();
    let out = run_in(tmp.path(), &["crossover", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn precision_flag_overrides_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfgf = tmp.path().join("c.toml");
    std::fs::write(&cfgf, "precision_bits = 192\n").unwrap();
    let json = tmp.path().join("out.json");
    let out = run_in(
        tmp.path(),
        &[
            "crossover",
            "--config",
            cfgf.to_str().unwrap(),
            "--precision",
            "256",
            "--json",
            json.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_report(&json)["report"]["config"]["precision_bits"], 256);
}

#[test]
fn report_dir_env_var_collects_both_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("collected");
    let out = bin()
        .args(["crossover"])
        .current_dir(tmp.path())
        .env("POWERGAP_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&dir.join("crossover.json"));
    assert!(v["report"]["crossover"]["log_lambda_f64"].is_f64());
    let text = std::fs::read_to_string(dir.join("crossover.txt")).unwrap();
    assert!(text.contains("zero-free regions cross"));
    assert_eq!(text, String::from_utf8_lossy(&out.stdout));
}

#[test]
fn json_path_creates_parent_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let nested = tmp.path().join("a/b/c.json");
    let out = run_in(
        tmp.path(),
        &["crossover", "--json", nested.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(nested.is_file());
}

#[test]
fn oracle_smoke_mode_reduces_scales() {
    let tmp = tempfile::tempdir().unwrap();
    let json = tmp.path().join("oracle.json");
    let out = run_in(tmp.path(), &["oracle", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&json);
    assert_eq!(v["report"]["oracle"]["sieve_limit"], 2_000_000);
    assert_eq!(v["report"]["oracle"]["all_ok"], true);
    // The embedded config still shows the configured (full) scales.
    assert_eq!(v["report"]["config"]["oracle"]["sieve_limit"], 100_000_000);
}

#[test]
fn verify_with_pinned_k_row_reports_the_row() {
    let tmp = tempfile::tempdir().unwrap();
    let json = tmp.path().join("v.json");
    let out = run_in(
        tmp.path(),
        &[
            "verify",
            "--m",
            "155",
            "--alpha",
            "0.0080146",
            "--k",
            "2.4798",
            "--k-valid-from",
            "1e6",
            "--json",
            json.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let cert = &json_report(&json)["report"]["certificate"];
    assert_eq!(cert["k_f64"].as_f64().unwrap(), 2.4798);
    assert_eq!(cert["k_valid_from"], "1000000");
    // The sharper K is only valid from log x = 1e6, so the certificate
    // cannot undercut that floor.
    assert!(cert["log_x0_f64"].as_f64().unwrap() >= 1.0e6);
}
