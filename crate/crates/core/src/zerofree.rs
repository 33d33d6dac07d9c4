//! Zero-free regions of the Riemann zeta function.
//!
//! Two explicit regions are provided: a classical-shape region following
//! Ford (2002) with updated constants, effective for very large heights, and
//! a Korobov--Vinogradov-shape region with leading constant 57.54, effective
//! from small heights. `nu` takes the better of the two where both apply,
//! and `crossover` locates the height where the classical shape overtakes
//! the other.
//!
//! All evaluation is done in terms of `log t`, so heights far beyond the
//! floating-point range of `t` itself are handled exactly the same way.

use crate::config::DecConst;
use crate::numerics::{Brak, ExtReal};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Constants of the classical-shape region: zeta has no zeros with
/// `sigma >= 1 - 1/(R(t) log t)` for `t >= threshold_t`, where
/// `R(t) = (J(t) + 0.685 + 0.155 loglog t) / (log t (0.04962 - 0.0196/(J(t) + 1.15)))`
/// and `J(t) = log t / 6 + loglog t + log 0.77`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalRegionParams {
    /// Smallest height at which the region is asserted.
    pub threshold_t: DecConst,
    pub num_const: DecConst,
    pub num_loglog: DecConst,
    pub den_lead: DecConst,
    pub den_sub: DecConst,
    pub den_shift: DecConst,
    pub j_log_divisor: u32,
    pub j_offset_arg: DecConst,
    pub provenance: String,
}

impl Default for ClassicalRegionParams {
    fn default() -> Self {
        ClassicalRegionParams {
            threshold_t: DecConst::lit("2e14"),
            num_const: DecConst::lit("0.685"),
            num_loglog: DecConst::lit("0.155"),
            den_lead: DecConst::lit("0.04962"),
            den_sub: DecConst::lit("0.0196"),
            den_shift: DecConst::lit("1.15"),
            j_log_divisor: 6,
            j_offset_arg: DecConst::lit("0.77"),
            provenance: "Ford (2002), constants as sharpened by Mossinghoff--Trudgian--Yang"
                .into(),
        }
    }
}

impl ClassicalRegionParams {
    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("threshold_t", &self.threshold_t),
            ("num_const", &self.num_const),
            ("num_loglog", &self.num_loglog),
            ("den_lead", &self.den_lead),
            ("den_sub", &self.den_sub),
            ("den_shift", &self.den_shift),
            ("j_offset_arg", &self.j_offset_arg),
        ] {
            if c.rational().cmp0() != std::cmp::Ordering::Greater {
                return Err(Error::Config(format!(
                    "zerofree.classical.{name} must be positive"
                )));
            }
        }
        if self.j_log_divisor == 0 {
            return Err(Error::Config("zerofree.classical.j_log_divisor is zero".into()));
        }
        if self.threshold_t.to_f64() < 3.0 {
            return Err(Error::Config(
                "zerofree.classical.threshold_t must be at least 3".into(),
            ));
        }
        Ok(())
    }
}

/// Constants of the Korobov--Vinogradov-shape region:
/// no zeros with `sigma >= 1 - 1/(c (log t)^{2/3} (loglog t)^{1/3})`
/// for `t >= min_t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KVRegionParams {
    pub c: DecConst,
    pub min_t: DecConst,
    pub provenance: String,
}

impl Default for KVRegionParams {
    fn default() -> Self {
        KVRegionParams {
            c: DecConst::lit("57.54"),
            min_t: DecConst::lit("3"),
            provenance: "Bellotti (2024), Korobov--Vinogradov shape".into(),
        }
    }
}

impl KVRegionParams {
    pub fn validate(&self) -> Result<()> {
        if self.c.rational().cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::Config("zerofree.kv.c must be positive".into()));
        }
        if self.min_t.to_f64() < 3.0 {
            return Err(Error::Config(
                "zerofree.kv.min_t must be at least 3 (loglog must be bounded away from 0)"
                    .into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ZeroFreeParams {
    pub classical: ClassicalRegionParams,
    pub kv: KVRegionParams,
}

impl ZeroFreeParams {
    pub fn validate(&self) -> Result<()> {
        self.classical.validate()?;
        self.kv.validate()
    }
}

/// `J(t) = log t / divisor + loglog t + log(offset)`, as a bracket in `log t`.
pub(crate) fn j_brak(log_t: &Brak, p: &ClassicalRegionParams) -> Result<Brak> {
    let prec = log_t.prec();
    if !(*log_t.lo() > 1u32) {
        return Err(Error::Domain(
            "j_factor needs t > e (log t > 1)".into(),
        ));
    }
    let a = log_t.div_u32(p.j_log_divisor)?;
    let b = log_t.ln()?;
    let c = p.j_offset_arg.brak(prec).ln()?;
    a.add(&b)?.add(&c)
}

pub(crate) fn nu1_brak(log_t: &Brak, p: &ClassicalRegionParams) -> Result<Brak> {
    let prec = log_t.prec();
    let thr_log = p.threshold_t.brak(prec).ln()?;
    if !(log_t.lo() >= thr_log.lo()) {
        return Err(Error::Domain(format!(
            "classical region asserted only for t >= {}",
            p.threshold_t.raw()
        )));
    }
    let j = j_brak(log_t, p)?;
    let den = p
        .den_lead
        .brak(prec)
        .sub(&p.den_sub.brak(prec).div(&j.add(&p.den_shift.brak(prec))?)?)?;
    let num = j
        .add(&p.num_const.brak(prec))?
        .add(&p.num_loglog.brak(prec).mul(&log_t.ln()?)?)?;
    // R(t), then 1/(R(t) log t).
    let r = num.div(&log_t.mul(&den)?)?;
    r.mul(log_t)?.recip()
}

pub(crate) fn nu2_brak(log_t: &Brak, p: &KVRegionParams) -> Result<Brak> {
    let prec = log_t.prec();
    let min_log = p.min_t.brak(prec).ln()?;
    if !(log_t.lo() >= min_log.lo()) {
        return Err(Error::Domain(format!(
            "Korobov--Vinogradov region asserted only for t >= {}",
            p.min_t.raw()
        )));
    }
    let two_thirds = Brak::from_u64(2, prec).div_u32(3)?;
    let third = Brak::one(prec).div_u32(3)?;
    let den = p
        .c
        .brak(prec)
        .mul(&log_t.pow(&two_thirds)?)?
        .mul(&log_t.ln()?.pow(&third)?)?;
    den.recip()
}

/// Best available zero-free width at height `t`, from `log t`: the maximum of
/// the two regions above the classical threshold, the KV width alone below it.
pub(crate) fn nu_brak(log_t: &Brak, p: &ZeroFreeParams) -> Result<Brak> {
    let prec = log_t.prec();
    let thr_log = p.classical.threshold_t.brak(prec).ln()?;
    let n2 = nu2_brak(log_t, &p.kv)?;
    if log_t.lo() >= thr_log.lo() {
        let n1 = nu1_brak(log_t, &p.classical)?;
        Ok(n1.max(&n2))
    } else {
        Ok(n2)
    }
}

fn log_of(t: &ExtReal) -> Result<Brak> {
    Brak::from_ext(t).ln()
}

/// `J(t)`, rounded up.
pub fn j_factor(t: &ExtReal, p: &ClassicalRegionParams) -> Result<ExtReal> {
    Ok(j_brak(&log_of(t)?, p)?.hi_ext())
}

/// Classical-region width at height `t`, rounded down (a smaller width is a
/// weaker, still valid, claim).
pub fn nu1(t: &ExtReal, p: &ClassicalRegionParams) -> Result<ExtReal> {
    Ok(nu1_brak(&log_of(t)?, p)?.lo_ext())
}

/// Korobov--Vinogradov-region width at height `t`, rounded down.
pub fn nu2(t: &ExtReal, p: &KVRegionParams) -> Result<ExtReal> {
    Ok(nu2_brak(&log_of(t)?, p)?.lo_ext())
}

/// Combined width at height `t`, rounded down.
pub fn nu(t: &ExtReal, p: &ZeroFreeParams) -> Result<ExtReal> {
    Ok(nu_brak(&log_of(t)?, p)?.lo_ext())
}

/// Relative bisection tolerance for the crossover height.
const CROSSOVER_REL_TOL: f64 = 1e-9;
const CROSSOVER_MAX_ITERS: u32 = 200;

/// `log lambda`, where `lambda` is the height at which the classical width
/// first exceeds the KV width. Bisection on `log t` over [1e4, 1e5].
pub fn crossover_log(p: &ZeroFreeParams, prec: u32) -> Result<ExtReal> {
    Ok(crossover_bracket(p, prec)?.mid_ext())
}

/// The crossover height itself.
pub fn crossover(p: &ZeroFreeParams, prec: u32) -> Result<ExtReal> {
    Ok(crossover_bracket(p, prec)?.exp()?.mid_ext())
}

pub(crate) fn crossover_bracket(p: &ZeroFreeParams, prec: u32) -> Result<Brak> {
    // diff(log t) = nu1 - nu2; positive at 1e4, negative at 1e5.
    let diff = |lt: &Brak| -> Result<Brak> {
        let n1 = nu1_brak(lt, &p.classical)?;
        let n2 = nu2_brak(lt, &p.kv)?;
        n1.sub(&n2)
    };
    let mut a = Brak::from_u64(10_000, prec);
    let mut b = Brak::from_u64(100_000, prec);
    let da = diff(&a)?;
    let db = diff(&b)?;
    if !da.is_strictly_positive() || !db.is_strictly_negative() {
        return Err(Error::Domain(
            "crossover bracket [1e4, 1e5] does not straddle a sign change for these constants"
                .into(),
        ));
    }
    for _ in 0..CROSSOVER_MAX_ITERS {
        let width = b.hi().clone() - a.lo();
        let rel = width / b.hi();
        if rel.to_f64() <= CROSSOVER_REL_TOL {
            break;
        }
        let mid = a.mid_with(&b);
        let dm = diff(&mid)?;
        if dm.is_strictly_positive() {
            a = mid;
        } else if dm.is_strictly_negative() {
            b = mid;
        } else {
            // Bracket too tight to classify the sign; stop refining.
            break;
        }
    }
    Ok(a.hull(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ExtReal, RoundingDir, DEFAULT_PRECISION as P};

    fn classical() -> ClassicalRegionParams {
        ClassicalRegionParams::default()
    }

    fn params() -> ZeroFreeParams {
        ZeroFreeParams::default()
    }

    fn near(x: &ExtReal, want: f64, tol: f64) {
        let got = x.to_f64();
        assert!(
            (got - want).abs() <= tol,
            "got {got:e}, want {want:e} (tol {tol:e})"
        );
    }

    #[test]
    fn j_matches_reference_values() {
        let t = ExtReal::parse_decimal("1e15", P, RoundingDir::Nearest).unwrap();
        near(&j_factor(&t, &classical()).unwrap(), 9.037180614700872557, 1e-12);
        let e6 = ExtReal::from_u64(6, P).exp(RoundingDir::Nearest).unwrap();
        near(&j_factor(&e6, &classical()).unwrap(), 2.5303947050936474819, 1e-12);
    }

    #[test]
    fn nu1_matches_reference_value_at_threshold() {
        let t = ExtReal::parse_decimal("2e14", P, RoundingDir::Nearest).unwrap();
        near(
            &nu1(&t, &classical()).unwrap(),
            0.0047884152157510703935,
            1e-15,
        );
    }

    #[test]
    fn nu2_matches_reference_values() {
        let t100 = ExtReal::from_u64(100, P).exp(RoundingDir::Nearest).unwrap();
        near(
            &nu2(&t100, &params().kv).unwrap(),
            4.8485838918757924421e-4,
            1e-16,
        );
        let t3 = ExtReal::from_u64(3, P);
        near(
            &nu2(&t3, &params().kv).unwrap(),
            0.035893646771250709837,
            1e-15,
        );
    }

    #[test]
    fn domain_guards() {
        let p = params();
        let small = ExtReal::from_u64(2, P);
        assert!(matches!(nu1(&small, &p.classical), Err(Error::Domain(_))));
        assert!(matches!(nu2(&small, &p.kv), Err(Error::Domain(_))));
        assert!(matches!(
            j_factor(&ExtReal::from_u64(2, P), &p.classical),
            Err(Error::Domain(_))
        ));
        // Below the classical threshold nu falls back to the KV width.
        let t = ExtReal::parse_decimal("1e6", P, RoundingDir::Nearest).unwrap();
        let v = nu(&t, &p).unwrap();
        let v2 = nu2(&t, &p.kv).unwrap();
        assert_eq!(v.to_f64(), v2.to_f64());
    }

    #[test]
    fn nu_takes_the_larger_width_above_threshold() {
        let p = params();
        // Above the crossover the KV width wins: it decays like
        // (log t)^{-2/3}, the classical width like (log t)^{-1}.
        let big = ExtReal::from_u64(60_000, P).exp(RoundingDir::Nearest).unwrap();
        let v = nu(&big, &p).unwrap();
        let v1 = nu1(&big, &p.classical).unwrap();
        let v2 = nu2(&big, &p.kv).unwrap();
        assert!(v2.to_f64() > v1.to_f64());
        near(&v, v2.to_f64(), v2.to_f64() * 1e-20);
        // Between the threshold and the crossover the classical width wins.
        let mid = ExtReal::parse_decimal("1e15", P, RoundingDir::Nearest).unwrap();
        let w1 = nu1(&mid, &p.classical).unwrap();
        let w2 = nu2(&mid, &p.kv).unwrap();
        assert!(w1.to_f64() > w2.to_f64());
    }

    #[test]
    fn widths_shrink_with_height() {
        let p = params();
        let mut prev1 = f64::INFINITY;
        let mut prev2 = f64::INFINITY;
        for logt in [34.0f64, 50.0, 100.0, 1000.0, 54594.0, 200000.0] {
            let lt = Brak::from_rational(
                &crate::numerics::decimal_to_rational(&format!("{logt}")).unwrap(),
                P,
            );
            let n1 = nu1_brak(&lt, &p.classical).unwrap().mid_ext().to_f64();
            let n2 = nu2_brak(&lt, &p.kv).unwrap().mid_ext().to_f64();
            assert!(n1 < prev1, "nu1 not decreasing at log t = {logt}");
            assert!(n2 < prev2, "nu2 not decreasing at log t = {logt}");
            prev1 = n1;
            prev2 = n2;
        }
    }

    #[test]
    fn crossover_matches_reference_value() {
        let ll = crossover_log(&params(), P).unwrap();
        near(&ll, 54594.17720852129543, 1e-3);
        let rel_err = (ll.to_f64() - 54594.17720852129543).abs() / 54594.0;
        assert!(rel_err < 1e-6, "relative residual {rel_err:e} too large");
    }

    #[test]
    fn widths_agree_at_crossover() {
        let p = params();
        let ll = crossover_bracket(&p, P).unwrap();
        let n1 = nu1_brak(&ll, &p.classical).unwrap();
        let n2 = nu2_brak(&ll, &p.kv).unwrap();
        let rel = n1.mid_ext().to_f64() / n2.mid_ext().to_f64() - 1.0;
        assert!(rel.abs() < 1e-6, "widths differ by {rel:e} at crossover");
        near(&n1.mid_ext(), 5.4452993903080190126e-6, 1e-14);
    }
}
