//! Stitches the full claim "a prime between n^m and (n+1)^m for every n >= 1"
//! out of overlapping sources, each covering a range of the exponent
//! `y = log x`:
//!
//! * a computational segment `[0, log(4e18)]` from exhaustive prime-gap
//!   verification,
//! * one segment per short-interval theorem of the form "a prime in
//!   `(x(1 - 1/Delta), x]` for `x >= x_start`", which bridges consecutive
//!   m-th powers up to `n = m(Delta - 1)`,
//! * the analytic segment `[log x0, infinity)` from a threshold certificate.
//!
//! The sweep certifies strictly positive overlap at every junction (margins
//! are computed with outward rounding) and reports either complete coverage
//! or the first gap.

use crate::config::DecConst;
use crate::numerics::{Brak, ExtReal};
use crate::{Error, Result};
use rug::Rational;
use serde::{Deserialize, Serialize};

/// One short-interval theorem: a prime in `(x(1 - 1/delta), x]` for every
/// `x >= x_start`, with the start point given either directly or as its
/// logarithm (exactly one of the two).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaInterval {
    pub delta: DecConst,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_start: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_x_start: Option<DecConst>,
    pub source: String,
}

impl DeltaInterval {
    pub fn validate(&self) -> Result<()> {
        if *self.delta.rational() <= 1u32 {
            return Err(Error::Config("coverage delta must exceed 1".into()));
        }
        match (&self.x_start, &self.log_x_start) {
            (Some(x), None) => {
                if *x < 2 {
                    return Err(Error::Config("coverage x_start must be >= 2".into()));
                }
            }
            (None, Some(l)) => {
                if l.rational().cmp0() == std::cmp::Ordering::Less {
                    return Err(Error::Config("coverage log_x_start must be >= 0".into()));
                }
            }
            _ => {
                return Err(Error::Config(
                    "coverage interval needs exactly one of x_start / log_x_start".into(),
                ))
            }
        }
        Ok(())
    }

    fn log_start_brak(&self, prec: u32) -> Result<Brak> {
        match (&self.x_start, &self.log_x_start) {
            (Some(x), None) => Brak::from_u64(*x, prec).ln(),
            (None, Some(l)) => Ok(l.brak(prec)),
            _ => Err(Error::Config(
                "coverage interval needs exactly one of x_start / log_x_start".into(),
            )),
        }
    }
}

/// Coverage sources below the analytic threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoverageParams {
    /// Every x below this has been checked against exhaustive prime-gap
    /// verification; the computational segment ends at its logarithm.
    pub comp_limit: u64,
    pub provenance: String,
    pub delta_intervals: Vec<DeltaInterval>,
}

impl Default for CoverageParams {
    fn default() -> Self {
        CoverageParams {
            comp_limit: 4_000_000_000_000_000_000,
            provenance: "prime gaps verified exhaustively below 4e18 (Oliveira e Silva--Herzog--\
                         Pardi 2014)"
                .into(),
            delta_intervals: vec![
                DeltaInterval {
                    delta: DecConst::lit("3.9e7"),
                    x_start: Some(4_000_000_000_000_000_000),
                    log_x_start: None,
                    source: "Cully-Hugill--Lee short-interval theorem, floor 4e18".into(),
                },
                DeltaInterval {
                    delta: DecConst::lit("2.5e11"),
                    x_start: None,
                    log_x_start: Some(DecConst::lit("600")),
                    source: "Cully-Hugill--Lee short-interval theorem, floor e^600".into(),
                },
            ],
        }
    }
}

impl CoverageParams {
    pub fn validate(&self) -> Result<()> {
        if self.comp_limit < 2 {
            return Err(Error::Config("coverage.comp_limit must be >= 2".into()));
        }
        for d in &self.delta_intervals {
            d.validate()?;
        }
        Ok(())
    }
}

/// One covered stretch of the exponent axis; `y_hi = None` is unbounded.
#[derive(Debug, Clone)]
pub struct Segment {
    pub label: String,
    pub y_lo: ExtReal,
    pub y_hi: Option<ExtReal>,
}

/// Certified overlap between a segment and the coverage built so far.
#[derive(Debug, Clone)]
pub struct Junction {
    pub from_label: String,
    pub to_label: String,
    /// Lower bound on the overlap length; strictly positive in a complete
    /// coverage.
    pub margin: ExtReal,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Complete,
    Gap { from: ExtReal, to: ExtReal },
}

#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub m: u32,
    pub segments: Vec<Segment>,
    pub junctions: Vec<Junction>,
    pub verdict: Verdict,
}

impl CoverageReport {
    pub fn is_complete(&self) -> bool {
        matches!(self.verdict, Verdict::Complete)
    }
}

/// The covered exponent segment contributed by one short-interval theorem
/// for exponent m: `[log x_start + log(1 - 1/delta), m log(m (delta - 1))]`,
/// rounded inward. Certifies the bridging inequality
/// `m log(1 + 1/n_max) >= -log(1 - 1/delta)` at `n_max = m(delta - 1)` before
/// trusting the upper limit.
pub fn delta_segment(m: u32, d: &DeltaInterval, prec: u32) -> Result<(ExtReal, ExtReal)> {
    d.validate()?;
    if m < 2 {
        return Err(Error::Domain("delta segments need m >= 2".into()));
    }
    let n_max = delta_minus_one(d) * Rational::from(m);
    if n_max <= 1u32 {
        return Err(Error::Domain(
            "delta too small: m (delta - 1) does not reach past n = 1".into(),
        ));
    }
    let n_max_b = Brak::from_rational(&n_max, prec);
    let delta_b = d.delta.brak(prec);
    // Bridging check at the claimed limit.
    let lhs = n_max_b.recip()?.ln_1p()?.mul_u32(m)?;
    let rhs = delta_b.recip()?.neg().ln_1p()?.neg();
    if !(lhs.lo() >= rhs.hi()) {
        return Err(Error::Domain(
            "short interval cannot bridge consecutive powers at its claimed limit".into(),
        ));
    }
    let y_lo = d
        .log_start_brak(prec)?
        .add(&delta_b.recip()?.neg().ln_1p()?)?;
    let y_hi = n_max_b.ln()?.mul_u32(m)?;
    Ok((y_lo.hi_ext(), y_hi.lo_ext()))
}

fn delta_minus_one(d: &DeltaInterval) -> Rational {
    Rational::from(d.delta.rational() - &Rational::from(1u32))
}

/// Builds every segment for exponent m and sweeps them in order of start
/// point, certifying strictly positive junction margins. `analytic_from` is
/// the certified threshold `log x0`.
pub fn stitch(
    m: u32,
    analytic_from: &ExtReal,
    p: &CoverageParams,
    prec: u32,
) -> Result<CoverageReport> {
    p.validate()?;
    let mut segments = vec![Segment {
        label: "computational".into(),
        y_lo: ExtReal::zero(prec),
        y_hi: Some(Brak::from_u64(p.comp_limit, prec).ln()?.lo_ext()),
    }];
    for d in &p.delta_intervals {
        let (y_lo, y_hi) = delta_segment(m, d, prec)?;
        segments.push(Segment {
            label: format!("delta({})", d.delta.raw()),
            y_lo,
            y_hi: Some(y_hi),
        });
    }
    segments.push(Segment {
        label: "analytic".into(),
        y_lo: analytic_from.clone(),
        y_hi: None,
    });
    segments.sort_by(|a, b| {
        a.y_lo
            .to_f64()
            .partial_cmp(&b.y_lo.to_f64())
            .expect("finite segment bounds")
    });

    let mut junctions = Vec::new();
    // Coverage built so far: [0, cursor], with cursor rounded down.
    let mut cursor: ExtReal = ExtReal::zero(prec);
    let mut cursor_label = String::new();
    let mut verdict = None;
    for seg in &segments {
        if cursor_label.is_empty() {
            // First segment must start at 0.
            if !seg.y_lo.is_zero() {
                verdict = Some(Verdict::Gap {
                    from: cursor.clone(),
                    to: seg.y_lo.clone(),
                });
                break;
            }
        } else {
            let margin = Brak::from_ext(&cursor).sub(&Brak::from_ext(&seg.y_lo))?;
            if !margin.is_strictly_positive() {
                verdict = Some(Verdict::Gap {
                    from: cursor.clone(),
                    to: seg.y_lo.clone(),
                });
                break;
            }
            junctions.push(Junction {
                from_label: cursor_label.clone(),
                to_label: seg.label.clone(),
                margin: margin.lo_ext(),
            });
        }
        match &seg.y_hi {
            None => {
                verdict = Some(Verdict::Complete);
                break;
            }
            Some(hi) => {
                // Keep the furthest reach; a segment ending below the cursor
                // still counts as overlap but does not extend coverage.
                if hi.to_f64() > cursor.to_f64() || cursor_label.is_empty() {
                    cursor = hi.clone();
                    cursor_label = seg.label.clone();
                }
            }
        }
    }
    let verdict = verdict.unwrap_or(Verdict::Gap {
        from: cursor.clone(),
        to: analytic_from.clone(),
    });
    Ok(CoverageReport {
        m,
        segments,
        junctions,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RoundingDir;

    const PREC: u32 = 128;

    fn d1() -> DeltaInterval {
        CoverageParams::default().delta_intervals[0].clone()
    }

    fn d2() -> DeltaInterval {
        CoverageParams::default().delta_intervals[1].clone()
    }

    #[test]
    fn computational_limit_value() {
        let l = Brak::from_u64(4_000_000_000_000_000_000, PREC)
            .ln()
            .unwrap()
            .mid_ext()
            .to_f64();
        assert!((l - 42.832826035).abs() < 1e-8);
    }

    #[test]
    fn delta_segment_limits_match_reference() {
        let cases = [
            (150u32, 3373.45612088f64, 4688.30430734f64),
            (155, 3490.98708078, 4849.66354012),
            (156, 3514.51279697, 4881.95491088),
        ];
        for (m, lim1, lim2) in cases {
            let (_, hi1) = delta_segment(m, &d1(), PREC).unwrap();
            let (_, hi2) = delta_segment(m, &d2(), PREC).unwrap();
            assert!((hi1.to_f64() - lim1).abs() < 1e-6, "m={m} d1 {}", hi1.to_f64());
            assert!((hi2.to_f64() - lim2).abs() < 1e-6, "m={m} d2 {}", hi2.to_f64());
        }
    }

    #[test]
    fn delta_segment_monotone_in_delta() {
        let mut wide = d1();
        wide.delta = DecConst::lit("7.8e7");
        let (_, hi_narrow) = delta_segment(155, &d1(), PREC).unwrap();
        let (_, hi_wide) = delta_segment(155, &wide, PREC).unwrap();
        assert!(hi_wide.to_f64() > hi_narrow.to_f64());
    }

    #[test]
    fn tiny_delta_rejected() {
        let mut bad = d1();
        bad.delta = DecConst::lit("1.000001");
        assert!(matches!(
            delta_segment(155, &bad, PREC),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exactly_one_start_form() {
        let mut both = d1();
        both.log_x_start = Some(DecConst::lit("42"));
        assert!(matches!(both.validate(), Err(Error::Config(_))));
        let mut neither = d1();
        neither.x_start = None;
        assert!(matches!(neither.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn headline_coverage_complete() {
        let from = ExtReal::parse_decimal("4807.2526", PREC, RoundingDir::Nearest).unwrap();
        let report = stitch(155, &from, &CoverageParams::default(), PREC).unwrap();
        assert!(report.is_complete());
        assert_eq!(report.junctions.len(), 3);
        for j in &report.junctions {
            assert!(
                j.margin.to_f64() > 0.0,
                "junction {} -> {} margin {}",
                j.from_label,
                j.to_label,
                j.margin.to_f64()
            );
        }
        let first = report.junctions[0].margin.to_f64();
        assert!(
            (first - 2.5641025641e-8).abs() < 1e-13,
            "first junction margin {first}"
        );
    }

    #[test]
    fn coverage_gap_reported_for_m150() {
        let from = ExtReal::parse_decimal("5740.876558", PREC, RoundingDir::Nearest).unwrap();
        let report = stitch(150, &from, &CoverageParams::default(), PREC).unwrap();
        match &report.verdict {
            Verdict::Gap { from, to } => {
                assert!((from.to_f64() - 4688.30430734).abs() < 1e-6);
                assert!((to.to_f64() - 5740.876558).abs() < 1e-6);
            }
            Verdict::Complete => panic!("expected a gap for m = 150"),
        }
    }

    #[test]
    fn gap_when_no_bridging_segments() {
        let mut p = CoverageParams::default();
        p.delta_intervals.clear();
        let from = ExtReal::parse_decimal("4807.2526", PREC, RoundingDir::Nearest).unwrap();
        let report = stitch(155, &from, &p, PREC).unwrap();
        match &report.verdict {
            Verdict::Gap { from, to } => {
                assert!((from.to_f64() - 42.832826035).abs() < 1e-6);
                assert!((to.to_f64() - 4807.2526).abs() < 1e-3);
            }
            Verdict::Complete => panic!("expected a gap without delta intervals"),
        }
    }
}
