//! Report envelopes and rendering. JSON payloads carry every certified number
//! as a full-precision decimal string (plus an f64 convenience copy for the
//! headline figures); the text tables round *up* at the fourth decimal, the
//! convention under which a displayed constant remains admissible. Timestamps
//! live only in the metadata block so the report body is byte-deterministic.

use crate::coverage::{CoverageReport, Verdict};
use crate::explicit_formula::GoldstonConstants;
use crate::numerics::ExtReal;
use crate::verifier::{CubeAdjustment, SlackReport, TailTermReport, ThresholdCertificate};
use rug::Rational;
use serde::Serialize;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub timestamp_unix: u64,
    pub tool: String,
    pub version: String,
}

impl Metadata {
    pub fn now() -> Metadata {
        Metadata {
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool: "powergap".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// Versioned wrapper for every emitted JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub report: T,
    pub metadata: Metadata,
}

pub fn envelope<T: Serialize>(report: T) -> Envelope<T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        report,
        metadata: Metadata::now(),
    }
}

fn ext_str(x: &ExtReal) -> String {
    x.to_decimal_string()
}

fn rat_str(r: &Rational) -> String {
    r.to_string()
}

/// Rounds up at the fourth decimal for table display: ceil4(3.474610...) =
/// "3.4747".
pub fn ceil4(x: &ExtReal) -> String {
    let q = (x.to_f64() * 10_000.0).ceil() as i64;
    let (sign, mag) = if q < 0 { ("-", -q) } else { ("", q) };
    format!("{sign}{}.{:04}", mag / 10_000, mag % 10_000)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableMRow {
    pub log_xk: String,
    pub alpha: String,
    pub m: String,
}

pub fn table_m_rows(rows: &[GoldstonConstants]) -> Vec<TableMRow> {
    rows.iter()
        .map(|r| TableMRow {
            log_xk: ext_str(&r.log_xk),
            alpha: ext_str(&r.alpha),
            m: ext_str(&r.m),
        })
        .collect()
}

pub fn render_table_m(rows: &[GoldstonConstants]) -> String {
    let mut out = String::from("log x_K      alpha      M\n");
    for r in rows {
        out.push_str(&format!(
            "{:<12} {:<10} {}\n",
            format_log_scale(&r.log_xk),
            ceil4(&r.alpha),
            ceil4(&r.m)
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct TableKRow {
    pub log_xk: String,
    pub k: String,
}

pub fn table_k_rows(rows: &[GoldstonConstants]) -> Vec<TableKRow> {
    rows.iter()
        .map(|r| TableKRow {
            log_xk: ext_str(&r.log_xk),
            k: ext_str(&r.k),
        })
        .collect()
}

pub fn render_table_k(rows: &[GoldstonConstants]) -> String {
    let mut out = String::from("log x_K      K\n");
    for r in rows {
        out.push_str(&format!(
            "{:<12} {}\n",
            format_log_scale(&r.log_xk),
            ceil4(&r.k)
        ));
    }
    out
}

fn format_log_scale(x: &ExtReal) -> String {
    let v = x.to_f64();
    if v >= 1000.0 && v.fract() == 0.0 {
        let e = v.log10();
        if e.fract() == 0.0 {
            return format!("10^{}", e as i64);
        }
    }
    format!("{v}")
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverJson {
    pub log_lambda: String,
    pub log_lambda_f64: f64,
}

pub fn crossover_json(log_lambda: &ExtReal) -> CrossoverJson {
    CrossoverJson {
        log_lambda: ext_str(log_lambda),
        log_lambda_f64: log_lambda.to_f64(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub m: u32,
    /// Exact rational inputs, as numerator/denominator strings.
    pub alpha: String,
    pub alpha_f64: f64,
    pub sigma1: String,
    pub k: String,
    pub k_f64: f64,
    pub k_valid_from: String,
    pub log_x0: String,
    pub log_x0_f64: f64,
    pub min_location: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_value: Option<String>,
    pub dip_in_certified_range: bool,
    pub binding_floor: crate::verifier::BindingFloor,
    pub audit_points: usize,
    pub tail_terms: Vec<TailTermReport>,
    pub sample_trace: Vec<(String, String)>,
    pub precision_bits: u32,
}

fn rat_f64(r: &Rational) -> f64 {
    // Rational::to_f64 truncates toward zero; round to nearest instead so
    // the convenience copy matches the decimal a reader would type.
    rug::Float::with_val(53, r).to_f64()
}

pub fn certificate_json(c: &ThresholdCertificate) -> CertificateJson {
    CertificateJson {
        m: c.m,
        alpha: rat_str(&c.alpha),
        alpha_f64: rat_f64(&c.alpha),
        sigma1: rat_str(&c.sigma1),
        k: rat_str(&c.k_const),
        k_f64: rat_f64(&c.k_const),
        k_valid_from: rat_str(&c.k_valid_from),
        log_x0: ext_str(&c.log_x0),
        log_x0_f64: c.log_x0.to_f64(),
        min_location: ext_str(&c.min_location),
        min_value: c.min_value.as_ref().map(ext_str),
        dip_in_certified_range: c.dip_in_certified_range,
        binding_floor: c.binding_floor,
        audit_points: c.audit_points,
        tail_terms: c.tail_terms.clone(),
        sample_trace: c
            .sample_trace
            .iter()
            .map(|(x, v)| (ext_str(x), ext_str(v)))
            .collect(),
        precision_bits: c.precision_bits,
    }
}

pub fn render_certificate(c: &ThresholdCertificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("m = {}\n", c.m));
    out.push_str(&format!(
        "alpha = {} (~{:.7})\n",
        rat_str(&c.alpha),
        rat_f64(&c.alpha)
    ));
    out.push_str(&format!(
        "K = {:.4} valid from log x = {:.0}\n",
        rat_f64(&c.k_const),
        rat_f64(&c.k_valid_from)
    ));
    out.push_str(&format!(
        "certified threshold: log x0 = {}\n",
        ceil4(&c.log_x0)
    ));
    out.push_str(&format!(
        "condition minimum near log x = {:.2} ({})\n",
        c.min_location.to_f64(),
        if c.dip_in_certified_range {
            "inside the certified range"
        } else {
            "below the threshold floor"
        }
    ));
    if let Some(v) = &c.min_value {
        out.push_str(&format!("condition value at minimum >= {}\n", ext_str(v)));
    }
    out.push_str(&format!(
        "audited {} points; tail terms: {}\n",
        c.audit_points,
        c.tail_terms
            .iter()
            .map(|t| {
                let how = if t.negligible {
                    "negligible"
                } else if t.decreasing {
                    "decreasing"
                } else {
                    "UNRESOLVED"
                };
                format!("{} {}", t.term, how)
            })
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentJson {
    pub label: String,
    pub y_lo: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_hi: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JunctionJson {
    pub from_label: String,
    pub to_label: String,
    pub margin: String,
    pub margin_f64: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictJson {
    Complete,
    Gap { from: String, to: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageJson {
    pub m: u32,
    pub complete: bool,
    pub verdict: VerdictJson,
    pub segments: Vec<SegmentJson>,
    pub junctions: Vec<JunctionJson>,
}

pub fn coverage_json(r: &CoverageReport) -> CoverageJson {
    CoverageJson {
        m: r.m,
        complete: r.is_complete(),
        verdict: match &r.verdict {
            Verdict::Complete => VerdictJson::Complete,
            Verdict::Gap { from, to } => VerdictJson::Gap {
                from: ext_str(from),
                to: ext_str(to),
            },
        },
        segments: r
            .segments
            .iter()
            .map(|s| SegmentJson {
                label: s.label.clone(),
                y_lo: ext_str(&s.y_lo),
                y_hi: s.y_hi.as_ref().map(ext_str),
            })
            .collect(),
        junctions: r
            .junctions
            .iter()
            .map(|j| JunctionJson {
                from_label: j.from_label.clone(),
                to_label: j.to_label.clone(),
                margin: ext_str(&j.margin),
                margin_f64: j.margin.to_f64(),
            })
            .collect(),
    }
}

pub fn render_coverage(r: &CoverageReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("interval-start coverage for m = {}\n", r.m));
    for s in &r.segments {
        match &s.y_hi {
            Some(hi) => out.push_str(&format!(
                "  segment {:<28} [{:.6}, {:.6}]\n",
                s.label,
                s.y_lo.to_f64(),
                hi.to_f64()
            )),
            None => out.push_str(&format!(
                "  segment {:<28} [{:.6}, infinity)\n",
                s.label,
                s.y_lo.to_f64()
            )),
        }
    }
    for j in &r.junctions {
        out.push_str(&format!(
            "  junction {} -> {}: margin {:.3e}\n",
            j.from_label,
            j.to_label,
            j.margin.to_f64()
        ));
    }
    match &r.verdict {
        Verdict::Complete => out.push_str("verdict: complete\n"),
        Verdict::Gap { from, to } => out.push_str(&format!(
            "verdict: GAP in ({:.6}, {:.6})\n",
            from.to_f64(),
            to.to_f64()
        )),
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CubesJson {
    pub certificate: CertificateJson,
    pub loglog_x0: String,
    pub loglog_x0_f64: f64,
    pub log_n0: String,
    pub loglog_n0: String,
    pub loglog_n0_f64: f64,
    pub endpoint_slack: SlackReport,
}

pub fn cubes_json(cert: &ThresholdCertificate, adj: &CubeAdjustment) -> CubesJson {
    CubesJson {
        certificate: certificate_json(cert),
        loglog_x0: ext_str(&adj.loglog_x0),
        loglog_x0_f64: adj.loglog_x0.to_f64(),
        log_n0: ext_str(&adj.log_n0),
        loglog_n0: ext_str(&adj.loglog_n0),
        loglog_n0_f64: adj.loglog_n0.to_f64(),
        endpoint_slack: adj.slack.clone(),
    }
}

pub fn render_cubes(adj: &CubeAdjustment) -> String {
    format!(
        "cubes: threshold loglog x0 = {} (log n0 = {:.4}, loglog n0 = {});\n\
         endpoint slack holds exactly from n = {} (n = 1 trivial: {})\n",
        ceil4(&adj.loglog_x0),
        adj.log_n0.to_f64(),
        ceil4(&adj.loglog_n0),
        adj.slack.verified_from_n,
        adj.slack.n1_trivial
    )
}

/// States which reading of the published threshold phrase "log x >= e^4810"
/// the certified number supports. Emitted for the m = 155 headline run.
pub fn threshold_reading_note(c: &ThresholdCertificate) -> Option<String> {
    if c.m != 155 {
        return None;
    }
    let v = c.log_x0.to_f64();
    if v <= 4810.0 {
        Some(format!(
            "certified log x0 = {v:.2} <= 4810: this supports reading the published \
             threshold phrase 'log x >= e^4810' as a threshold on x, namely x >= e^4810 \
             (log x at scale 4.8e3); the alternative reading, a threshold at log x = e^4810, \
             lies far beyond every audited point and is implied a fortiori by the certified \
             tail behavior."
        ))
    } else {
        Some(format!(
            "certified log x0 = {v:.2} exceeds 4810; neither reading of the published \
             threshold phrase 'log x >= e^4810' is corroborated at this scale."
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RoundingDir;

    fn ext(s: &str) -> ExtReal {
        ExtReal::parse_decimal(s, 128, RoundingDir::Nearest).unwrap()
    }

    #[test]
    fn ceil4_rounds_up_at_fourth_decimal() {
        assert_eq!(ceil4(&ext("3.474610033")), "3.4747");
        assert_eq!(ceil4(&ext("7.910530911")), "7.9106");
        assert_eq!(ceil4(&ext("2.5")), "2.5000");
        assert_eq!(ceil4(&ext("-1.23456")), "-1.2345");
        assert_eq!(ceil4(&ext("0.00011")), "0.0002");
    }

    #[test]
    fn envelope_has_versioned_layout() {
        #[derive(Serialize)]
        struct P {
            x: u32,
        }
        let e = envelope(P { x: 7 });
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["report"]["x"], 7);
        assert_eq!(v["metadata"]["tool"], "powergap");
        assert!(v["metadata"]["timestamp_unix"].is_u64());
    }

    #[test]
    fn log_scale_formatting() {
        assert_eq!(format_log_scale(&ext("1000")), "10^3");
        assert_eq!(format_log_scale(&ext("1000000")), "10^6");
        assert_eq!(format_log_scale(&ext("600")), "600");
    }
}
