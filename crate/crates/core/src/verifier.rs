//! The certification engine: for a fixed exponent m it verifies that the
//! prime-counting inequality
//!
//! `1 - F(x) - K G(x)/(x^alpha h) + E/h > 0`
//!
//! holds for all x >= x0 with h = m x^{1-1/m}, which places a prime inside
//! `(x, x + h]` and hence between consecutive m-th powers beyond the
//! threshold. Everything is evaluated through directed-rounding brackets in
//! `L = log x`, so thresholds up to `log x0 ~ 10^15` (the cubes case) never
//! materialize x.
//!
//! A returned [`ThresholdCertificate`] means: the lower bracket endpoint of
//! the left-hand side was strictly positive at every audited point, the audit
//! grid covers [log x0, 10 max(log x0, dip)] densely, and every term was
//! either certifiably decreasing or certifiably negligible across the last
//! decade of the grid.

use crate::config::DecConst;
use crate::explicit_formula::KTableRow;
use crate::numerics::{Brak, ExtReal};
use crate::zerofree::{self, ZeroFreeParams};
use crate::zeros::DensityParams;
use crate::{Error, Result};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Configuration block of the verifier: the sigma split point, the lower
/// Chebyshev coefficients, and the upper endpoint coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifierParams {
    /// Split point of the zero-density integral; must satisfy
    /// 1/2 <= sigma1 < 1 - alpha for any usable alpha.
    pub sigma1: DecConst,
    /// Lower coefficient of the sqrt term of the endpoint correction E.
    pub costa_half: DecConst,
    /// Lower coefficient of the cube-root term of E.
    pub costa_third: DecConst,
    /// Upper coefficient of the sqrt term of E.
    pub broadbent_a1: DecConst,
    /// Upper coefficient of the cube-root term of E.
    pub broadbent_a2: DecConst,
    pub provenance: String,
}

impl Default for VerifierParams {
    fn default() -> Self {
        VerifierParams {
            sigma1: DecConst::lit("0.6"),
            costa_half: DecConst::lit("0.999"),
            costa_third: DecConst::lit("1"),
            broadbent_a1: DecConst::lit("1.00000000000199986"),
            broadbent_a2: DecConst::lit("1.00000001936"),
            provenance: "Costa lower bounds on psi - theta; Broadbent--Kadiri--Lumley--Ng--Wilk \
                         upper bounds"
                .into(),
        }
    }
}

impl VerifierParams {
    pub fn validate(&self) -> Result<()> {
        let half = Rational::from((1u32, 2u32));
        let s = self.sigma1.rational();
        if *s < half || *s >= 1u32 {
            return Err(Error::Config("verifier.sigma1 must lie in [1/2, 1)".into()));
        }
        for (name, c) in [("costa_half", &self.costa_half), ("costa_third", &self.costa_third)] {
            let r = c.rational();
            if r.cmp0() != std::cmp::Ordering::Greater || *r > 1u32 {
                return Err(Error::Config(format!("verifier.{name} must lie in (0, 1]")));
            }
        }
        for (name, c) in [("broadbent_a1", &self.broadbent_a1), ("broadbent_a2", &self.broadbent_a2)] {
            if *c.rational() < 1u32 {
                return Err(Error::Config(format!("verifier.{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Fully resolved input of one verification run. All scalar inputs are exact
/// rationals; bracket evaluation widens them only at the working precision.
#[derive(Debug, Clone)]
pub struct VerifierInput {
    pub m: u32,
    pub alpha: Rational,
    pub sigma1: Rational,
    /// Prime-counting error constant K...
    pub k_const: Rational,
    /// ...valid for log x >= log_xk.
    pub log_xk: Rational,
    pub costa_half: Rational,
    pub costa_third: Rational,
    pub broadbent_a1: Rational,
    pub broadbent_a2: Rational,
    pub density: DensityParams,
    pub zerofree: ZeroFreeParams,
    pub precision: u32,
}

impl VerifierInput {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        vp: &VerifierParams,
        density: &DensityParams,
        zp: &ZeroFreeParams,
        m: u32,
        alpha: Rational,
        k_const: Rational,
        log_xk: Rational,
        precision: u32,
    ) -> Result<VerifierInput> {
        let inp = VerifierInput {
            m,
            alpha,
            sigma1: vp.sigma1.rational().clone(),
            k_const,
            log_xk,
            costa_half: vp.costa_half.rational().clone(),
            costa_third: vp.costa_third.rational().clone(),
            broadbent_a1: vp.broadbent_a1.rational().clone(),
            broadbent_a2: vp.broadbent_a2.rational().clone(),
            density: density.clone(),
            zerofree: zp.clone(),
            precision,
        };
        inp.validate()?;
        Ok(inp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Config("verifier needs m >= 2".into()));
        }
        let inv_m = Rational::from((1u32, self.m));
        if self.alpha <= inv_m || self.alpha >= 1u32 {
            return Err(Error::Config(
                "alpha must satisfy 1/m < alpha < 1 (T = x^alpha must outgrow h)".into(),
            ));
        }
        let half = Rational::from((1u32, 2u32));
        if self.sigma1 < half || self.sigma1 >= 1u32 {
            return Err(Error::Config("sigma1 must lie in [1/2, 1)".into()));
        }
        if self.k_const.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::Config("K must be positive".into()));
        }
        if self.log_xk < 1000u32 {
            return Err(Error::Config("log_xk must be >= 1e3".into()));
        }
        self.density.validate()?;
        self.zerofree.validate()
    }

    fn rat(&self, r: &Rational) -> Brak {
        Brak::from_rational(r, self.precision)
    }
}

/// All bracketed terms of the condition at one point `L = log x`.
pub(crate) struct LhsTerms {
    pub f1: Brak,
    pub f2: Brak,
    pub f3: Brak,
    pub kg: Brak,
    pub eh: Brak,
    pub lhs: Brak,
}

/// `G(x)/x` for `h = m x^{1-1/m}`:
/// `(1 + delta) L_h log L_h + L log L` with `delta = h/x = m e^{-L/m}` and
/// `L_h = log(x + h) = L + log(1 + delta)`.
pub(crate) fn g_over_x_brak(l: &Brak, m: u32) -> Result<Brak> {
    let prec = l.prec();
    let delta = Brak::from_u64(m as u64, prec).mul(&l.div_u32(m)?.neg().exp()?)?;
    let lh = l.add(&delta.ln_1p()?)?;
    let one = Brak::one(prec);
    one.add(&delta)?
        .mul(&lh)?
        .mul(&lh.ln()?)?
        .add(&l.mul(&l.ln()?)?)
}

impl VerifierInput {
    /// `E/h` in pure log space; every exponential argument is negative, so
    /// extreme L underflows to certified-tiny brackets instead of failing.
    pub(crate) fn e_over_h_brak(&self, l: &Brak) -> Result<Brak> {
        let prec = self.precision;
        let m = self.m;
        let ln_h = Brak::from_u64(m as u64, prec)
            .ln()?
            .add(&l.sub(&l.div_u32(m)?)?)?;
        let delta = Brak::from_u64(m as u64, prec).mul(&l.div_u32(m)?.neg().exp()?)?;
        let lh = l.add(&delta.ln_1p()?)?;
        let pos = self
            .rat(&self.costa_half)
            .mul(&l.div_u32(2)?.sub(&ln_h)?.exp()?)?
            .add(&self.rat(&self.costa_third).mul(&l.div_u32(3)?.sub(&ln_h)?.exp()?)?)?;
        let neg = self
            .rat(&self.broadbent_a1)
            .mul(&lh.div_u32(2)?.sub(&ln_h)?.exp()?)?
            .add(&self.rat(&self.broadbent_a2).mul(&lh.div_u32(3)?.sub(&ln_h)?.exp()?)?)?;
        pos.sub(&neg)
    }

    pub(crate) fn lhs_terms(&self, l: &Brak) -> Result<LhsTerms> {
        let prec = self.precision;
        let one = Brak::one(prec);
        let pi = Brak::pi(prec);
        let alpha = self.rat(&self.alpha);
        let sig = self.rat(&self.sigma1);
        let floor = self.rat(&self.log_xk);
        if !(l.lo() >= floor.lo()) {
            return Err(Error::Domain(
                "log x below the validity floor of the supplied K".into(),
            ));
        }
        let lt = alpha.mul(l)?;
        let h0_log = Brak::from_u64(self.density.h0, prec).ln()?;
        if !(lt.lo() >= h0_log.lo()) {
            return Err(Error::Domain(
                "T = x^alpha below the height floor of the density bound".into(),
            ));
        }
        let gap = one.sub(&alpha)?.sub(&sig)?;
        if !gap.is_strictly_positive() {
            return Err(Error::Domain("sigma1 + alpha >= 1: F cannot decay".into()));
        }
        // log W = L - 2((4/3) alpha L + log(alpha L)).
        let four_thirds = Brak::from_u64(4, prec).div_u32(3)?;
        let logw = l.sub(&four_thirds.mul(&lt)?.add(&lt.ln()?)?.mul_u32(2)?)?;
        if !logw.is_strictly_positive() {
            return Err(Error::Domain("W <= 1: alpha too large for this x".into()));
        }
        let nu = zerofree::nu_brak(&lt, &self.zerofree)?;
        if !(one.sub(&nu)?.sub(&sig)?).is_strictly_positive() {
            return Err(Error::Domain("sigma1 >= 1 - nu(T): density split empty".into()));
        }
        let f1 = alpha
            .mul(l)?
            .mul(&gap.mul(l)?.neg().exp()?)?
            .div(&pi)?;
        let c1 = self.density.c1.brak(prec);
        let c2 = self.density.c2.brak(prec);
        let w_diff = nu
            .mul(&logw)?
            .neg()
            .exp()?
            .sub(&sig.sub(&one)?.mul(&logw)?.exp()?)?;
        let f2 = c1
            .mul_u32(2)?
            .mul(&alpha.powi(3)?)?
            .mul(&w_diff)?
            .mul(&l.powi(4)?)?
            .div(&logw)?;
        let f3 = c2
            .mul_u32(2)?
            .mul(&alpha.powi(2)?)?
            .mul(&l.powi(2)?)?
            .mul(&nu.mul(l)?.neg().exp()?)?;
        let g_over_x = g_over_x_brak(l, self.m)?;
        let decay = lt.sub(&l.div_u32(self.m)?)?.neg().exp()?;
        let kg = self
            .rat(&self.k_const)
            .mul(&g_over_x)?
            .mul(&decay)?
            .div_u32(self.m)?;
        let eh = self.e_over_h_brak(l)?;
        let f = f1.add(&f2)?.add(&f3)?;
        let lhs = one.sub(&f)?.sub(&kg)?.add(&eh)?;
        Ok(LhsTerms {
            f1,
            f2,
            f3,
            kg,
            eh,
            lhs,
        })
    }
}

/// The explicit-formula loss term F(x), rounded up.
pub fn f_term(log_x: &ExtReal, inp: &VerifierInput) -> Result<ExtReal> {
    let t = inp.lhs_terms(&Brak::from_ext(log_x))?;
    Ok(t.f1.add(&t.f2)?.add(&t.f3)?.hi_ext())
}

/// The full positivity condition at one point, rounded down; a positive
/// return certifies a prime in `(x, x + m x^{1-1/m}]`.
pub fn condition_lhs(log_x: &ExtReal, inp: &VerifierInput) -> Result<ExtReal> {
    Ok(inp.lhs_terms(&Brak::from_ext(log_x))?.lhs.lo_ext())
}

/// Endpoint correction
/// `E = c_half e^{L/2} + c_third e^{L/3} - a1 (x+h)^{1/2} - a2 (x+h)^{1/3}`,
/// rounded down. Moderate L only (the terms are materialized); the
/// certification path divides by h first and runs entirely in log space.
pub fn e_correction(log_x: &ExtReal, h: &ExtReal, inp: &VerifierInput) -> Result<ExtReal> {
    let prec = inp.precision;
    let l = Brak::from_ext(log_x);
    if !(l.lo() >= &1000u32) {
        return Err(Error::Domain(
            "endpoint correction asserted only for log x >= 1e3".into(),
        ));
    }
    let hb = Brak::from_ext(h);
    if !hb.is_strictly_positive() {
        return Err(Error::Domain("h must be positive".into()));
    }
    let ln_h = hb.ln()?;
    if !(ln_h.hi() < l.lo()) {
        return Err(Error::Domain("h must be smaller than x".into()));
    }
    let delta = ln_h.sub(&l)?.exp()?;
    let lh = l.add(&delta.ln_1p()?)?;
    let pos = Brak::from_rational(&inp.costa_half, prec)
        .mul(&l.div_u32(2)?.exp()?)?
        .add(&Brak::from_rational(&inp.costa_third, prec).mul(&l.div_u32(3)?.exp()?)?)?;
    let neg = Brak::from_rational(&inp.broadbent_a1, prec)
        .mul(&lh.div_u32(2)?.exp()?)?
        .add(&Brak::from_rational(&inp.broadbent_a2, prec).mul(&lh.div_u32(3)?.exp()?)?)?;
    Ok(pos.sub(&neg)?.lo_ext())
}

/// Smoothing mass `G(x) = x[(1 + h/x) L_h log L_h + L log L]`, rounded up.
/// Moderate L only; the certification path uses G/x in log space.
pub fn g_term(log_x: &ExtReal, h: &ExtReal, prec: u32) -> Result<ExtReal> {
    let l = Brak::from_ext(log_x);
    let hb = Brak::from_ext(h);
    if !l.is_strictly_positive() || !hb.is_strictly_positive() {
        return Err(Error::Domain("g_term needs log x > 0 and h > 0".into()));
    }
    let delta = hb.ln()?.sub(&l)?.exp()?;
    let lh = l.add(&delta.ln_1p()?)?;
    let one = Brak::one(prec);
    let over_x = one
        .add(&delta)?
        .mul(&lh)?
        .mul(&lh.ln()?)?
        .add(&l.mul(&l.ln()?)?)?;
    Ok(over_x.mul(&l.exp()?)?.hi_ext())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingFloor {
    /// x0 located by bisection of a sign change.
    BisectionRoot,
    /// The condition already holds at the K validity floor log x_K.
    KValidityFloor,
    /// The condition already holds at the density height floor log(H0)/alpha.
    DensityFloor,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailTermReport {
    pub term: String,
    /// Upper endpoint strictly below the previous lower endpoint at every
    /// consecutive pair of the last audit decade.
    pub decreasing: bool,
    /// Upper endpoint below 1e-100 in absolute value across the decade.
    pub negligible: bool,
}

/// Proof object returned by a successful threshold search.
#[derive(Debug, Clone)]
pub struct ThresholdCertificate {
    pub m: u32,
    pub alpha: Rational,
    pub sigma1: Rational,
    pub k_const: Rational,
    pub k_valid_from: Rational,
    /// Certified threshold: the condition is strictly positive at every
    /// audited point of [log_x0, 10 max(log_x0, dip)], with favorable tail
    /// behavior beyond.
    pub log_x0: ExtReal,
    /// Location of the local minimum of the condition, log lambda / alpha.
    pub min_location: ExtReal,
    /// Lower bracket of the condition at the minimum, when it is evaluable
    /// under this K row's validity floor.
    pub min_value: Option<ExtReal>,
    /// Whether the minimum lies inside [log_x0, infinity).
    pub dip_in_certified_range: bool,
    pub binding_floor: BindingFloor,
    pub audit_points: usize,
    pub sample_trace: Vec<(ExtReal, ExtReal)>,
    pub tail_terms: Vec<TailTermReport>,
    pub precision_bits: u32,
}

const BISECT_REL_TOL: f64 = 1e-6;
const BISECT_MAX_ITERS: u32 = 200;
const SCAN_MAX_DOUBLINGS: u32 = 64;
const AUDIT_POINTS: usize = 1000;
const DIP_CLUSTER: usize = 51;
const NEGLIGIBLE: f64 = 1e-100;

fn positive_at(inp: &VerifierInput, pt: &Brak) -> Result<bool> {
    match inp.lhs_terms(pt) {
        Ok(t) => Ok(t.lhs.is_strictly_positive()),
        Err(Error::Domain(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Finds and certifies the threshold for the given input.
pub fn find_threshold(inp: &VerifierInput) -> Result<ThresholdCertificate> {
    find_threshold_impl(inp, true)
}

/// Threshold search without the audit pass; used inside optimization loops.
pub(crate) fn quick_threshold(inp: &VerifierInput) -> Result<ThresholdCertificate> {
    find_threshold_impl(inp, false)
}

fn find_threshold_impl(inp: &VerifierInput, certify: bool) -> Result<ThresholdCertificate> {
    inp.validate()?;
    let prec = inp.precision;
    // If sigma1 + alpha >= 1 the F term cannot decay and no threshold exists.
    {
        let gap = Rational::from(1u32) - &inp.alpha - &inp.sigma1;
        if gap.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::NoThreshold(
                "sigma1 + alpha >= 1: the contour loss F never falls below 1".into(),
            ));
        }
    }
    // Validity floor: K's own floor and the density height floor.
    let alpha_b = inp.rat(&inp.alpha);
    let k_floor = inp.rat(&inp.log_xk);
    let density_floor = Brak::from_u64(inp.density.h0, prec).ln()?.div(&alpha_b)?;
    let (floor, floor_kind) = if k_floor.hi() >= density_floor.hi() {
        (
            Brak::from_float(k_floor.hi().clone()),
            BindingFloor::KValidityFloor,
        )
    } else {
        (
            Brak::from_float(density_floor.hi().clone()),
            BindingFloor::DensityFloor,
        )
    };
    // Local minimum of the condition: log lambda / alpha.
    let lambda_log = zerofree::crossover_bracket(&inp.zerofree, prec)?;
    let dip = lambda_log.div(&alpha_b)?;
    let dip_above_floor = dip.lo() >= floor.lo();
    let dip_val = if dip_above_floor {
        match inp.lhs_terms(&dip) {
            Ok(t) => Some(t.lhs),
            Err(Error::Domain(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let dip_positive = dip_val
        .as_ref()
        .map(|v| v.is_strictly_positive())
        .unwrap_or(false);

    let bisect = |mut lo: Brak, mut hi: Brak| -> Result<Brak> {
        for _ in 0..BISECT_MAX_ITERS {
            let width = (hi.hi().clone() - lo.lo()).abs();
            let rel = width / hi.hi();
            if rel.to_f64() <= BISECT_REL_TOL {
                break;
            }
            let mid = lo.mid_with(&hi);
            if positive_at(inp, &mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    };

    let (x0, binding) = if dip_positive {
        if positive_at(inp, &floor)? {
            (floor.clone(), floor_kind)
        } else {
            let root = bisect(floor.clone(), Brak::from_float(dip.lo().clone()))?;
            (root, BindingFloor::BisectionRoot)
        }
    } else {
        // The condition is not certifiably positive at the minimum (or the
        // minimum sits below the validity floor): scan geometrically beyond
        // the larger of the two and bisect back to the crossing.
        let start_f = if dip.hi() >= floor.hi() {
            dip.hi().clone()
        } else {
            floor.hi().clone()
        };
        let start = Brak::from_float(start_f);
        if positive_at(inp, &start)? {
            (start.clone(), floor_kind)
        } else {
            let mut prev = start.clone();
            let mut found = None;
            for _ in 0..SCAN_MAX_DOUBLINGS {
                let cur = Brak::from_float(prev.hi().clone() * 2u32);
                if positive_at(inp, &cur)? {
                    found = Some((prev.clone(), cur));
                    break;
                }
                prev = cur;
            }
            match found {
                Some((lo, hi)) => (bisect(lo, hi)?, BindingFloor::BisectionRoot),
                None => {
                    return Err(Error::NoThreshold(format!(
                        "condition not certifiably positive at the minimum (log x = {:.6e}) \
                         nor on a {SCAN_MAX_DOUBLINGS}-doubling scan beyond it",
                        dip.mid_ext().to_f64()
                    )))
                }
            }
        }
    };

    let dip_in_range = dip_positive && dip.lo() >= x0.lo();
    let mut cert = ThresholdCertificate {
        m: inp.m,
        alpha: inp.alpha.clone(),
        sigma1: inp.sigma1.clone(),
        k_const: inp.k_const.clone(),
        k_valid_from: inp.log_xk.clone(),
        log_x0: x0.hi_ext(),
        min_location: dip.mid_ext(),
        min_value: dip_val.as_ref().map(|v| v.lo_ext()),
        dip_in_certified_range: dip_in_range,
        binding_floor: binding,
        audit_points: 0,
        sample_trace: Vec::new(),
        tail_terms: Vec::new(),
        precision_bits: prec,
    };
    if certify {
        audit(inp, &mut cert, &x0, &dip)?;
    }
    Ok(cert)
}

fn eval_lhs_at(inp: &VerifierInput, f: &Float) -> Result<(Float, Brak)> {
    let pt = Brak::from_float(f.clone());
    let t = inp.lhs_terms(&pt)?;
    Ok((f.clone(), t.lhs))
}

/// Dense positivity audit over `[log x0, 10 max(log x0, dip)]` plus a
/// cluster around the minimum, then per-term tail behavior over the last
/// decade of the grid.
fn audit(
    inp: &VerifierInput,
    cert: &mut ThresholdCertificate,
    x0: &Brak,
    dip: &Brak,
) -> Result<()> {
    let prec = inp.precision;
    let l0 = x0.hi().clone();
    let top = if dip.hi() > x0.hi() {
        dip.hi().clone()
    } else {
        x0.hi().clone()
    };
    let end = top * 10u32;
    let ln_l0 = l0.clone().ln();
    let ln_end = end.clone().ln();
    let step = (ln_end.clone() - &ln_l0) / (AUDIT_POINTS as u32 - 1);
    let mut points: Vec<Float> = Vec::with_capacity(AUDIT_POINTS + DIP_CLUSTER);
    points.push(l0.clone());
    for i in 1..AUDIT_POINTS - 1 {
        let off = Float::with_val(prec, &step * (i as u32));
        points.push(Float::with_val(prec, &ln_l0 + &off).exp());
    }
    points.push(end.clone());
    if cert.dip_in_certified_range {
        // ±10% (in log x) cluster around the minimum.
        let dm = dip.mid_with(dip).hi().clone();
        for k in 0..DIP_CLUSTER {
            let factor = Float::with_val(prec, Rational::from((900u32 + 4 * k as u32, 1000u32)));
            let f = Float::with_val(prec, &dm * &factor);
            if f >= l0 {
                points.push(f);
            }
        }
    }

    let eval = |f: &Float| eval_lhs_at(inp, f);
    #[cfg(feature = "parallel")]
    let results: Vec<(Float, Brak)> = points
        .par_iter()
        .map(eval)
        .collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(Float, Brak)> = points.iter().map(eval).collect::<Result<Vec<_>>>()?;

    for (f, lhs) in &results {
        if !lhs.is_strictly_positive() {
            return Err(Error::NoThreshold(format!(
                "audit failed: condition not certifiably positive at log x = {:.9e}",
                f.to_f64()
            )));
        }
    }
    cert.audit_points = results.len();
    // Minimum property: the dip value stays at or below the cluster values.
    if cert.dip_in_certified_range {
        if let Some(mv) = &cert.min_value {
            let dip_mid = mv.to_f64();
            for (f, lhs) in &results[AUDIT_POINTS..] {
                let v = lhs.lo_ext().to_f64();
                if dip_mid > v * (1.0 + 1e-9) + 1e-30 {
                    return Err(Error::NoThreshold(format!(
                        "minimum property violated near the dip at log x = {:.6e}",
                        f.to_f64()
                    )));
                }
            }
        }
    }
    // Subsampled trace.
    let stride = (AUDIT_POINTS / 48).max(1);
    for (i, (f, lhs)) in results[..AUDIT_POINTS].iter().enumerate() {
        if i % stride == 0 || i == AUDIT_POINTS - 1 {
            cert.sample_trace
                .push((Brak::from_float(f.clone()).hi_ext(), lhs.lo_ext()));
        }
    }
    // Tail: per-term behavior across the last decade of the main grid.
    let tail_floor = Float::with_val(prec, &end / 10u32);
    let tail_pts: Vec<&Float> = points[..AUDIT_POINTS]
        .iter()
        .filter(|f| **f >= tail_floor)
        .collect();
    let term_eval = |f: &&Float| -> Result<[Brak; 5]> {
        let t = inp.lhs_terms(&Brak::from_float((*f).clone()))?;
        Ok([t.f1, t.f2, t.f3, t.kg, t.eh.abs()])
    };
    #[cfg(feature = "parallel")]
    let tail_terms: Vec<[Brak; 5]> = tail_pts
        .par_iter()
        .map(term_eval)
        .collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let tail_terms: Vec<[Brak; 5]> = tail_pts.iter().map(term_eval).collect::<Result<Vec<_>>>()?;
    let names = ["f1", "f2", "f3", "kg", "eh"];
    for (ti, name) in names.iter().enumerate() {
        let mut decreasing = true;
        let mut negligible = true;
        for w in tail_terms.windows(2) {
            if !(w[1][ti].hi() < w[0][ti].lo()) {
                decreasing = false;
            }
        }
        for row in &tail_terms {
            if !(row[ti].hi().to_f64() < NEGLIGIBLE) {
                negligible = false;
            }
        }
        if !decreasing && !negligible {
            return Err(Error::NoThreshold(format!(
                "tail term {name} is neither certifiably decreasing nor negligible \
                 over the last audit decade"
            )));
        }
        cert.tail_terms.push(TailTermReport {
            term: name.to_string(),
            decreasing,
            negligible,
        });
    }
    Ok(())
}

/// Minimizes the certified threshold over alpha for fixed m and K row.
///
/// The feasible alphas form `(1/m, 1 - sigma1)`; a geometric grid of offsets
/// from 1/m seeds the search. When a dip-positive window exists (the
/// condition is positive at its local minimum), the threshold decreases
/// toward the window's upper edge, which is located by bisection and backed
/// off by 1e-7. Otherwise the best grid point is refined locally.
pub fn optimize_alpha_for_m(template: &VerifierInput) -> Result<ThresholdCertificate> {
    let m = template.m;
    let inv_m = Rational::from((1u32, m));
    let off_lo = Rational::from((1u32, 1u32)) / Integer::from(10u32).pow(10);
    let a_hi = Rational::from(1u32) - &template.sigma1
        - Rational::from((1u32, 1u32)) / Integer::from(10u32).pow(9);
    let max_off = Rational::from(&a_hi - &inv_m);
    if max_off <= off_lo {
        return Err(Error::NoThreshold(
            "no feasible alpha: 1/m already reaches 1 - sigma1".into(),
        ));
    }
    let with_alpha = |alpha: &Rational| -> VerifierInput {
        let mut inp = template.clone();
        inp.alpha = alpha.clone();
        inp
    };
    let quick = |alpha: &Rational| -> Result<Option<ThresholdCertificate>> {
        let inp = with_alpha(alpha);
        if inp.validate().is_err() {
            return Ok(None);
        }
        match quick_threshold(&inp) {
            Ok(c) => Ok(Some(c)),
            Err(Error::NoThreshold(_)) | Err(Error::Domain(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    // Geometric offset grid, ~5 points per decade.
    let ratio = Rational::from((15849u32, 10000u32));
    let mut offsets = vec![off_lo.clone()];
    loop {
        let next = Rational::from(offsets.last().unwrap() * &ratio);
        if next >= max_off {
            break;
        }
        offsets.push(next);
    }
    offsets.push(max_off.clone());
    let alphas: Vec<Rational> = offsets.iter().map(|o| Rational::from(&inv_m + o)).collect();
    let certs: Vec<Option<ThresholdCertificate>> = {
        #[cfg(feature = "parallel")]
        {
            alphas.par_iter().map(&quick).collect::<Result<Vec<_>>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            alphas.iter().map(&quick).collect::<Result<Vec<_>>>()?
        }
    };
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in certs.iter().enumerate() {
        if let Some(c) = c {
            let cost = c.log_x0.to_f64();
            if best.map(|(_, b)| cost < b).unwrap_or(true) {
                best = Some((i, cost));
            }
        }
    }
    let (bi, _) = best.ok_or_else(|| {
        Error::NoThreshold("no feasible alpha in the scanned window produced a threshold".into())
    })?;

    let in_window = |c: &Option<ThresholdCertificate>| {
        c.as_ref().map(|c| c.dip_in_certified_range).unwrap_or(false)
    };
    let candidate = if in_window(&certs[bi]) {
        // Bisect the upper edge of the dip-positive window.
        let mut lo = alphas[bi].clone();
        let mut hi = alphas
            .iter()
            .skip(bi + 1)
            .zip(certs.iter().skip(bi + 1))
            .find(|(_, c)| !in_window(c))
            .map(|(a, _)| a.clone())
            .unwrap_or_else(|| a_hi.clone());
        let tol = Rational::from((1u32, 1u32)) / Integer::from(10u32).pow(9);
        while Rational::from(&hi - &lo) > tol {
            let mid = Rational::from(&hi + &lo) / 2u32;
            let ok = quick(&mid)?.map(|c| c.dip_in_certified_range).unwrap_or(false);
            if ok {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Back off the edge by 1e-7 and keep the best of the candidates; the
        // backed-off point is the certified answer in the usual case, the
        // others guard against a window narrower than the backoff.
        let backed = Rational::from(&lo)
            - Rational::from((1u32, 1u32)) / Integer::from(10u32).pow(7);
        let mut cands = vec![lo.clone(), alphas[bi].clone()];
        if backed > inv_m {
            cands.insert(0, backed);
        }
        let mut chosen: Option<(Rational, f64)> = None;
        for c in cands {
            if let Some(cert) = quick(&c)? {
                let cost = cert.log_x0.to_f64();
                if chosen.as_ref().map(|(_, b)| cost < *b).unwrap_or(true) {
                    chosen = Some((c, cost));
                }
            }
        }
        chosen
            .map(|(c, _)| c)
            .ok_or_else(|| Error::NoThreshold("dip-positive window vanished on refinement".into()))?
    } else if bi == 0 {
        // Pinned at the lower boundary: larger alpha only worsens the
        // zero-free decay, as the grid costs confirm.
        alphas[0].clone()
    } else if bi + 1 == alphas.len() {
        alphas[bi].clone()
    } else {
        // Interior minimum without a dip window: ternary refinement between
        // the two neighbors, ties toward smaller alpha.
        let mut a = alphas[bi - 1].clone();
        let mut b = alphas[bi + 1].clone();
        for _ in 0..40 {
            let third = Rational::from(&b - &a) / 3u32;
            let mc = Rational::from(&a + &third);
            let md = Rational::from(&b - &third);
            let fc = quick(&mc)?.map(|c| c.log_x0.to_f64()).unwrap_or(f64::INFINITY);
            let fd = quick(&md)?.map(|c| c.log_x0.to_f64()).unwrap_or(f64::INFINITY);
            if fc <= fd {
                b = md;
            } else {
                a = mc;
            }
            if Rational::from(&b - &a).to_f64() < 1e-12 {
                break;
            }
        }
        Rational::from(&a + &b) / 2u32
    };
    find_threshold(&with_alpha(&candidate))
}

/// Baseline threshold using the weaker Dudek-shape prime-counting error
/// (the KG term becomes `2 L^2 e^{-(alpha - 1/m) L}/m`); returned for
/// comparison against the Goldston-shape threshold.
pub fn find_threshold_dudek_baseline(inp: &VerifierInput) -> Result<ExtReal> {
    let prec = inp.precision;
    let lhs_at = |pt: &Brak| -> Result<Brak> {
        let t = inp.lhs_terms(pt)?;
        let alpha = inp.rat(&inp.alpha);
        let decay = alpha
            .mul(pt)?
            .sub(&pt.div_u32(inp.m)?)?
            .neg()
            .exp()?;
        let kg_d = pt.powi(2)?.mul_u32(2)?.mul(&decay)?.div_u32(inp.m)?;
        Brak::one(prec)
            .sub(&t.f1.add(&t.f2)?.add(&t.f3)?)?
            .sub(&kg_d)?
            .add(&t.eh)
    };
    let pos = |pt: &Brak| -> Result<bool> {
        match lhs_at(pt) {
            Ok(b) => Ok(b.is_strictly_positive()),
            Err(Error::Domain(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let alpha_b = inp.rat(&inp.alpha);
    let floor_f = {
        let k_floor = inp.rat(&inp.log_xk);
        let d_floor = Brak::from_u64(inp.density.h0, prec).ln()?.div(&alpha_b)?;
        if k_floor.hi() >= d_floor.hi() {
            k_floor.hi().clone()
        } else {
            d_floor.hi().clone()
        }
    };
    let mut lo = Brak::from_float(floor_f.clone());
    if pos(&lo)? {
        return Ok(lo.hi_ext());
    }
    let mut probe = lo.clone();
    let mut hi = None;
    for _ in 0..SCAN_MAX_DOUBLINGS {
        let cur = Brak::from_float(probe.hi().clone() * 2u32);
        if pos(&cur)? {
            hi = Some(cur);
            break;
        }
        probe = cur;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NoThreshold("baseline condition never certifiably positive on the scan".into())
    })?;
    lo = probe;
    for _ in 0..BISECT_MAX_ITERS {
        let width = (hi.hi().clone() - lo.lo()).abs();
        if (width / hi.hi()).to_f64() <= BISECT_REL_TOL {
            break;
        }
        let mid = lo.mid_with(&hi);
        if pos(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.hi_ext())
}

/// Runs the threshold search against every prepared K row and keeps the best
/// certificate: smallest certified threshold, with near-ties (relative 1e-9)
/// resolved toward the row with the larger validity floor, whose constant is
/// sharper. With `alpha` given the search is a plain [`find_threshold`];
/// otherwise alpha is optimized per row.
pub fn best_certificate(
    vp: &VerifierParams,
    density: &DensityParams,
    zp: &ZeroFreeParams,
    k_rows: &[KTableRow],
    m: u32,
    alpha: Option<&Rational>,
    precision: u32,
) -> Result<ThresholdCertificate> {
    if k_rows.is_empty() {
        return Err(Error::Config("no K rows configured".into()));
    }
    let placeholder = alpha.cloned().unwrap_or_else(|| {
        Rational::from((1u32, m)) + Rational::from((1u32, 1u32)) / Integer::from(10u32).pow(10)
    });
    let mut best: Option<ThresholdCertificate> = None;
    let mut first_err: Option<Error> = None;
    for row in k_rows {
        let inp = match VerifierInput::from_parts(
            vp,
            density,
            zp,
            m,
            placeholder.clone(),
            row.k.rational().clone(),
            row.log_xk.rational().clone(),
            precision,
        ) {
            Ok(inp) => inp,
            Err(e) => {
                first_err.get_or_insert(e);
                continue;
            }
        };
        let res = match alpha {
            Some(_) => find_threshold(&inp),
            None => optimize_alpha_for_m(&inp),
        };
        match res {
            Ok(cert) => {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let cur = cert.log_x0.to_f64();
                        let old = b.log_x0.to_f64();
                        if (cur - old).abs() <= 1e-9 * old.abs().max(1.0) {
                            cert.k_valid_from > b.k_valid_from
                        } else {
                            cur < old
                        }
                    }
                };
                if better {
                    best = Some(cert);
                }
            }
            Err(e @ (Error::NoThreshold(_) | Error::Domain(_) | Error::Config(_))) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| {
        first_err.unwrap_or_else(|| Error::NoThreshold("no K row produced a threshold".into()))
    })
}

/// Power-free restatement of a certificate: thresholds in n rather than x,
/// `n^m`-th powers starting at `n0 = x0^{1/m}`.
#[derive(Debug, Clone)]
pub struct CubeAdjustment {
    pub loglog_x0: ExtReal,
    pub log_n0: ExtReal,
    pub loglog_n0: ExtReal,
    pub slack: SlackReport,
}

/// Result of the exact endpoint-slack check: rounding x to the nearest m-th
/// power costs at most the certified slack from this n on.
#[derive(Debug, Clone, Serialize)]
pub struct SlackReport {
    pub m: u32,
    /// Smallest n from which `C(m,2) n^{m-2} >= 5/2 + 3m/(2n)` holds (and
    /// keeps holding; both sides are monotone).
    pub verified_from_n: u64,
    pub checked_to_n: u64,
    /// n = 1 is covered separately: 2 is a prime strictly between 1 and 2^m.
    pub n1_trivial: bool,
}

/// Exact-arithmetic check that the binomial growth of `(n+1)^m - n^m`
/// absorbs the interval length `m n^{m-1}` plus rounding slack.
pub fn endpoint_slack_check(m: u32) -> Result<SlackReport> {
    if m < 3 {
        return Err(Error::Domain(
            "endpoint slack check needs m >= 3 (the n^{m-2} margin must grow)".into(),
        ));
    }
    let binom = Rational::from((Integer::from(m) * Integer::from(m - 1), Integer::from(2)));
    let checked_to = 1000u64;
    let holds = |n: u64| -> bool {
        let lhs = Rational::from(&binom) * Integer::from(n).pow(m - 2);
        let rhs = Rational::from((5u32, 2u32))
            + Rational::from((Integer::from(3u32) * Integer::from(m), Integer::from(2u64 * n)));
        lhs >= rhs
    };
    let mut verified_from = None;
    for n in 2..=checked_to {
        if holds(n) {
            // Monotone: lhs nondecreasing in n (m >= 3), rhs decreasing.
            verified_from = Some(n);
            break;
        }
    }
    let verified_from = verified_from.ok_or_else(|| {
        Error::Domain(format!("slack inequality fails for all n <= {checked_to}"))
    })?;
    for n in verified_from..=checked_to.min(verified_from + 64) {
        debug_assert!(holds(n));
    }
    let n1 = Integer::from(1u32) << m;
    Ok(SlackReport {
        m,
        verified_from_n: verified_from,
        checked_to_n: checked_to,
        n1_trivial: n1 > 2u32,
    })
}

/// Converts an x-threshold certificate into n-space (consecutive m-th
/// powers): `log n0 = log x0 / m`, `loglog n0 = loglog x0 - log m`.
pub fn cube_adjustment(cert: &ThresholdCertificate) -> Result<CubeAdjustment> {
    let x0 = Brak::from_ext(&cert.log_x0);
    let loglog_x0 = x0.ln()?;
    let log_n0 = x0.div_u32(cert.m)?;
    let loglog_n0 = loglog_x0.sub(&Brak::from_u64(cert.m as u64, x0.prec()).ln()?)?;
    Ok(CubeAdjustment {
        loglog_x0: loglog_x0.hi_ext(),
        log_n0: log_n0.hi_ext(),
        loglog_n0: loglog_n0.hi_ext(),
        slack: endpoint_slack_check(cert.m)?,
    })
}
