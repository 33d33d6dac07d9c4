//! Command-line front end: loads the configuration, runs one verification
//! pipeline from `powergap-core`, prints a human-readable report and writes
//! the same content as versioned JSON.
//!
//! Exit codes: 0 when the requested verdict is complete/green, 1 when a
//! structured negative outcome was produced (coverage gap, red oracle, no
//! certifiable threshold), 2 on configuration, parsing or domain errors.
//!
//! The JSON report goes to `--json <path>` when given, otherwise to
//! `$POWERGAP_REPORT_DIR` (default `./reports`) together with a text copy.
//! Identical configuration and flags produce a byte-identical `report`
//! subtree; only the metadata block carries a timestamp.

use clap::{Parser, Subcommand};
use powergap_core::config::{Config, DecConst};
use powergap_core::explicit_formula::{build_table, KTableRow};
use powergap_core::numerics::decimal_to_rational;
use powergap_core::oracle::{run_all, OracleParams, OracleReport};
use powergap_core::verifier::{best_certificate, cube_adjustment, ThresholdCertificate};
use powergap_core::{coverage, report, zerofree, Error, Result};
use serde_json::json;
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "powergap",
    version,
    about = "Certifies a prime between n^m and (n+1)^m from explicit analytic estimates"
)]
struct Cli {
    /// TOML configuration file; compiled-in defaults are used when absent.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Working precision in bits, overriding the configuration.
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<u32>,
    /// Write the JSON report to this exact path instead of the report
    /// directory.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the optimized smoothing constants (alpha, M) per table column.
    TableM,
    /// Print the prime-counting error constant K per table column.
    TableK,
    /// Locate the height where the Korobov--Vinogradov zero-free region
    /// overtakes the classical one.
    Crossover,
    /// Certify a threshold log x0 for one exponent m.
    Verify {
        #[arg(long)]
        m: u32,
        /// Fixed alpha (decimal); optimized per K row when absent.
        #[arg(long)]
        alpha: Option<String>,
        /// Fixed prime-counting constant K instead of the configured table.
        #[arg(long)]
        k: Option<String>,
        /// Validity floor (in log x) of the fixed K; defaults to 1e3.
        #[arg(long, requires = "k")]
        k_valid_from: Option<String>,
    },
    /// Run the m = 3 pipeline with alpha just above 1/3 and restate the
    /// threshold for consecutive cubes.
    Cubes,
    /// Stitch computational, short-interval and analytic segments into a
    /// coverage verdict for one exponent m.
    Coverage {
        #[arg(long)]
        m: u32,
    },
    /// Brute-force cross-checks of every ingredient a sieve can reach.
    Oracle {
        /// Full suite at the configured scales; without this flag a reduced
        /// smoke suite runs.
        #[arg(long)]
        all: bool,
    },
    /// End-to-end certificate: threshold plus coverage verdict.
    Report {
        #[arg(long)]
        m: u32,
        /// Fixed alpha (decimal); optimized per K row when absent.
        #[arg(long)]
        alpha: Option<String>,
        /// Fixed prime-counting constant K instead of the configured table.
        #[arg(long)]
        k: Option<String>,
        /// Validity floor (in log x) of the fixed K; defaults to 1e3.
        #[arg(long, requires = "k")]
        k_valid_from: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NoThreshold(_) | Error::NotUnimodal { .. } => 1,
                _ => 2,
            }
        }
    };
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load_file(p)?,
        None => Config::default(),
    };
    if let Some(bits) = cli.precision {
        cfg.precision_bits = bits;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli)?;
    let prec = cfg.precision_bits;
    match &cli.cmd {
        Cmd::TableM => {
            let rows = build_table(&cfg.goldston, prec)?;
            let doc = json!({ "config": cfg, "rows": report::table_m_rows(&rows) });
            emit(cli, "table-m", &report::render_table_m(&rows), doc)?;
            Ok(0)
        }
        Cmd::TableK => {
            let rows = build_table(&cfg.goldston, prec)?;
            let doc = json!({ "config": cfg, "rows": report::table_k_rows(&rows) });
            emit(cli, "table-k", &report::render_table_k(&rows), doc)?;
            Ok(0)
        }
        Cmd::Crossover => {
            let lam = zerofree::crossover_log(&cfg.zerofree, prec)?;
            let text = format!(
                "zero-free regions cross at log t = {:.8}\n\
                 (classical wider below, Korobov--Vinogradov wider above)\n",
                lam.to_f64()
            );
            let doc = json!({ "config": cfg, "crossover": report::crossover_json(&lam) });
            emit(cli, "crossover", &text, doc)?;
            Ok(0)
        }
        Cmd::Verify {
            m,
            alpha,
            k,
            k_valid_from,
        } => {
            let name = format!("verify-m{m}");
            let cert = match certificate(&cfg, *m, alpha, k, k_valid_from, prec) {
                Ok(c) => c,
                Err(e) => return negative_outcome(cli, &cfg, &name, e),
            };
            let doc = json!({ "config": cfg, "certificate": report::certificate_json(&cert) });
            emit(cli, &name, &report::render_certificate(&cert), doc)?;
            Ok(0)
        }
        Cmd::Cubes => {
            // alpha -> 1/3 from above, pinned at exactly 1/3 + 1e-10.
            let alpha = decimal_to_rational("1")? / decimal_to_rational("3")?
                + decimal_to_rational("1e-10")?;
            let cert = match best_certificate(
                &cfg.verifier,
                &cfg.zeros.density,
                &cfg.zerofree,
                &cfg.goldston.k_table,
                3,
                Some(&alpha),
                prec,
            ) {
                Ok(c) => c,
                Err(e) => return negative_outcome(cli, &cfg, "cubes", e),
            };
            let adj = cube_adjustment(&cert)?;
            let mut text = report::render_certificate(&cert);
            text.push_str(&report::render_cubes(&adj));
            let doc = json!({ "config": cfg, "cubes": report::cubes_json(&cert, &adj) });
            emit(cli, "cubes", &text, doc)?;
            Ok(0)
        }
        Cmd::Coverage { m } => {
            let name = format!("coverage-m{m}");
            let cert = match certificate(&cfg, *m, &None, &None, &None, prec) {
                Ok(c) => c,
                Err(e) => return negative_outcome(cli, &cfg, &name, e),
            };
            let cov = coverage::stitch(*m, &cert.log_x0, &cfg.coverage, prec)?;
            let doc = json!({ "config": cfg, "coverage": report::coverage_json(&cov) });
            emit(cli, &name, &report::render_coverage(&cov), doc)?;
            Ok(if cov.is_complete() { 0 } else { 1 })
        }
        Cmd::Oracle { all } => {
            let params = if *all {
                cfg.oracle.clone()
            } else {
                smoke_params(&cfg.oracle)
            };
            let rep = run_all(&params)?;
            let doc = json!({ "config": cfg, "oracle": rep });
            emit(cli, "oracle", &render_oracle(&rep), doc)?;
            Ok(if rep.all_ok { 0 } else { 1 })
        }
        Cmd::Report {
            m,
            alpha,
            k,
            k_valid_from,
        } => {
            let name = format!("report-m{m}");
            let cert = match certificate(&cfg, *m, alpha, k, k_valid_from, prec) {
                Ok(c) => c,
                Err(e) => return negative_outcome(cli, &cfg, &name, e),
            };
            let cov = coverage::stitch(*m, &cert.log_x0, &cfg.coverage, prec)?;
            let note = report::threshold_reading_note(&cert);
            let mut text = report::render_certificate(&cert);
            text.push_str(&report::render_coverage(&cov));
            if let Some(n) = &note {
                text.push_str(n);
                text.push('\n');
            }
            let doc = json!({
                "config": cfg,
                "certificate": report::certificate_json(&cert),
                "coverage": report::coverage_json(&cov),
                "threshold_note": note,
            });
            emit(cli, &name, &text, doc)?;
            Ok(if cov.is_complete() { 0 } else { 1 })
        }
    }
}

/// Resolves the K rows and alpha from the flags and runs the row sweep.
fn certificate(
    cfg: &Config,
    m: u32,
    alpha: &Option<String>,
    k: &Option<String>,
    k_valid_from: &Option<String>,
    prec: u32,
) -> Result<ThresholdCertificate> {
    let rows = match k {
        Some(ks) => vec![KTableRow {
            log_xk: DecConst::new(k_valid_from.as_deref().unwrap_or("1e3"))?,
            k: DecConst::new(ks)?,
        }],
        None => cfg.goldston.k_table.clone(),
    };
    let alpha = match alpha {
        Some(s) => Some(decimal_to_rational(s)?),
        None => None,
    };
    best_certificate(
        &cfg.verifier,
        &cfg.zeros.density,
        &cfg.zerofree,
        &rows,
        m,
        alpha.as_ref(),
        prec,
    )
}

/// Structured exit-1 outcomes still produce a report; everything else
/// propagates to the exit-2 path.
fn negative_outcome(cli: &Cli, cfg: &Config, name: &str, e: Error) -> Result<i32> {
    match &e {
        Error::NoThreshold(msg) => {
            let doc = json!({ "config": cfg, "outcome": "no_threshold", "message": msg });
            emit(cli, name, &format!("no certifiable threshold: {msg}\n"), doc)?;
            Ok(1)
        }
        Error::NotUnimodal { profile } => {
            let doc = json!({ "config": cfg, "outcome": "not_unimodal", "profile": profile });
            emit(cli, name, &format!("{e}\n"), doc)?;
            Ok(1)
        }
        _ => Err(e),
    }
}

/// Reduced scales for a quick pass; `--all` runs the configured scales.
fn smoke_params(p: &OracleParams) -> OracleParams {
    OracleParams {
        sieve_limit: 2_000_000,
        bt_samples: p.bt_samples.min(500),
        bt_limit: 200_000,
        lambda_cases: p.lambda_cases.min(20),
        taylor_samples: p.taylor_samples.min(5_000),
        seed: p.seed,
        provenance: p.provenance.clone(),
    }
}

fn render_oracle(r: &OracleReport) -> String {
    let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
    let mut out = String::new();
    out.push_str(&format!("oracle: sieve to {}\n", r.sieve_limit));
    out.push_str(&format!(
        "  prime counts          {}  pi(1e6) = {}, pi(limit) = {}\n",
        mark(r.counts_ok),
        r.pi_1e6,
        r.pi_at_limit
    ));
    for c in &r.power_intervals {
        out.push_str(&format!(
            "  power intervals m={:<3} {}  checked to n = {}{}\n",
            c.m,
            mark(c.ok),
            c.checked_to_n,
            if c.trivial_only {
                " (trivial range only)"
            } else {
                ""
            }
        ));
    }
    out.push_str(&format!(
        "  Brun--Titchmarsh      {}  worst count/bound = {:.6} over {} windows\n",
        mark(r.brun_titchmarsh.ok),
        r.brun_titchmarsh.worst_ratio,
        r.brun_titchmarsh.samples
    ));
    out.push_str(&format!(
        "  Lambda split          {}  worst relative difference = {:.3e} over {} cases\n",
        mark(r.lambda_ok),
        r.lambda_worst_rel,
        r.lambda_split_cases
    ));
    out.push_str(&format!(
        "  Taylor log bound      {}  min slack = {:.3e} over {} samples\n",
        mark(r.taylor.ok),
        r.taylor.min_slack,
        r.taylor.samples
    ));
    out.push_str(&format!(
        "  psi - theta           {}  worst ratio = {:.6}, identity err = {:.2e}\n",
        mark(r.psi_theta.ok),
        r.psi_theta.worst_ratio,
        r.psi_theta.identity_max_err
    ));
    out.push_str(&format!(
        "oracle verdict: {}\n",
        if r.all_ok { "all green" } else { "RED" }
    ));
    out
}

/// Prints the text report and writes the JSON envelope (and, in directory
/// mode, a text copy).
fn emit(cli: &Cli, name: &str, text: &str, payload: serde_json::Value) -> Result<()> {
    print!("{text}");
    let envelope = report::envelope(payload);
    let mut json = serde_json::to_string_pretty(&envelope)
        .map_err(|e| Error::Config(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    match &cli.json {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            }
            write_file(path, &json)
        }
        None => {
            let dir = std::env::var_os("POWERGAP_REPORT_DIR")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("reports"));
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            write_file(&dir.join(format!("{name}.json")), &json)?;
            write_file(&dir.join(format!("{name}.txt")), text)
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}
