//! Rigorous numerical verification that there is a prime between n^m and
//! (n+1)^m, built from explicit analytic estimates: zero-free regions of the
//! Riemann zeta function, zero-counting and zero-density bounds, explicit
//! constants for the truncated Riemann-von Mangoldt formula, and a stitched
//! coverage argument for small x.
//!
//! Every certified inequality is evaluated with outward (directed) rounding:
//! quantities that must not be under-estimated are rounded up, quantities
//! that must not be over-estimated are rounded down, so a positive verdict is
//! a true statement about the real numbers, not about floating point.
//!
//! Module map:
//! - [`numerics`]: extended-precision reals with explicit rounding direction.
//! - [`zerofree`]: the classical (Ford-style) and Korobov-Vinogradov
//!   zero-free regions, their maximum, and the crossover height.
//! - [`zeros`]: zero-counting bound N(T), the zero-density bound
//!   N1(sigma, T) with C1 = 17.418, C2 = 5.272, and its integrated form.
//! - [`explicit_formula`]: the explicit constants M (with alpha optimization)
//!   and K for the truncated explicit formula, plus a baseline error bound
//!   for comparison.
//! - [`verifier`]: the positivity condition 1 - F - K G/(x^alpha h) + E/h > 0,
//!   certified threshold search, and alpha optimization per power m.
//! - [`coverage`]: stitches direct computation, Delta-interval results and
//!   the analytic certificate into an end-to-end verdict.
//! - [`oracle`]: desk-scale sieve-backed brute-force checks of every
//!   ingredient that can be checked directly.
//! - [`config`] / [`report`]: constants with provenance, and deterministic
//!   JSON report emission.

// `!(a >= b)` is the fail-closed comparison idiom used in every
// certification guard: an incomparable pair must reject, never pass. Test
// modules quote reference constants at their published full precision.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod config;
pub mod coverage;
pub mod explicit_formula;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod verifier;
pub mod zerofree;
pub mod zeros;

/// Crate-wide error type.
///
/// `Domain`, `Range` and `Parse` map to invalid-input conditions (CLI exit
/// code 2). `NoThreshold` and `NotUnimodal` are structured search outcomes
/// (CLI exit code 1 with a report).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain an estimate is asserted on.
    #[error("domain error: {0}")]
    Domain(String),
    /// Overflow of the extended exponent range (never silently saturated).
    #[error("range error: {0}")]
    Range(String),
    /// Malformed decimal string.
    #[error("parse error: {0}")]
    Parse(String),
    /// Invalid or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),
    /// The positivity condition has no certifiable threshold for the given
    /// inputs (alpha or m unsuitable).
    #[error("no threshold: {0}")]
    NoThreshold(String),
    /// An optimization's unimodality precheck failed; carries the scanned
    /// (parameter, objective) profile for diagnosis.
    #[error("objective not unimodal on the scanned grid ({} points)", profile.len())]
    NotUnimodal { profile: Vec<(f64, f64)> },
}

pub type Result<T> = std::result::Result<T, Error>;
