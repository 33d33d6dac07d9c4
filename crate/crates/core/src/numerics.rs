//! Extended-precision real arithmetic with directed rounding.
//!
//! [`ExtReal`] wraps an arbitrary-precision binary float (MPFR-backed) whose
//! exponent range covers roughly +-10^9 binary, far beyond the +-10^7 the
//! rest of the crate needs; quantities like exp(4850) or exp(-10^5) are
//! representable directly and everything larger is handled in log space by
//! the calling modules.
//!
//! Rounding contract: for every operation f and input x,
//! `f(x, Down) <= f(x, Nearest) <= f(x, Up)`, with the gap shrinking as
//! precision grows. Overflow of the exponent range raises [`Error::Range`];
//! it is never silently saturated. Underflow is kept: rounding Up yields the
//! smallest positive representable value (a true upper bound for a positive
//! quantity) and rounding Down yields 0 (a true lower bound), so underflowed
//! results remain certified bounds.

use crate::{Error, Result};
use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;

/// Default significand precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Rounding direction for a certified operation.
///
/// `Up` produces certified upper bounds, `Down` certified lower bounds.
/// `Nearest` is for non-certifying work (searches, display); certification
/// paths re-evaluate with directed rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingDir {
    Down,
    Nearest,
    Up,
}

impl RoundingDir {
    fn mpfr(self) -> Round {
        match self {
            RoundingDir::Down => Round::Down,
            RoundingDir::Nearest => Round::Nearest,
            RoundingDir::Up => Round::Up,
        }
    }
}

// Largest argument for which exp cannot overflow: exp_max() * ln 2, with a
// safety factor. Above this the result's binary exponent would exceed the
// representable range.
fn exp_overflow_limit() -> f64 {
    rug::float::exp_max() as f64 * std::f64::consts::LN_2 * 0.999
}

/// Extended-precision real number.
///
/// Immutable after construction; all operations return new values and take an
/// explicit [`RoundingDir`]. Values are always finite (construction and every
/// operation reject non-finite results).
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct ExtReal(Float);

impl ExtReal {
    fn wrap(f: Float, what: &str) -> Result<Self> {
        if f.is_finite() {
            Ok(ExtReal(f))
        } else {
            Err(Error::Range(format!("{what} produced a non-finite value")))
        }
    }

    pub fn zero(prec: u32) -> Self {
        ExtReal(Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        ExtReal(Float::with_val(prec, 1))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        ExtReal(Float::with_val(prec, v))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        ExtReal(Float::with_val(prec, v))
    }

    pub fn pi(prec: u32, dir: RoundingDir) -> Self {
        let (f, _) = Float::with_val_round(prec, rug::float::Constant::Pi, dir.mpfr());
        ExtReal(f)
    }

    /// Parses a decimal string such as `"0.04962"`, `"-3.4747e2"` or the
    /// serialized form `"+1.234e+0005"`, rounding in the given direction.
    pub fn parse_decimal(s: &str, prec: u32, dir: RoundingDir) -> Result<Self> {
        let p = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let (f, _) = Float::with_val_round(prec, p, dir.mpfr());
        Self::wrap(f, "parse_decimal")
    }

    pub fn from_rational(r: &Rational, prec: u32, dir: RoundingDir) -> Result<Self> {
        let (f, _) = Float::with_val_round(prec, r, dir.mpfr());
        Self::wrap(f, "from_rational")
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Re-rounds to a new working precision.
    pub fn with_prec(&self, prec: u32, dir: RoundingDir) -> Self {
        let (f, _) = Float::with_val_round(prec, &self.0, dir.mpfr());
        ExtReal(f)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_positive(&self) -> bool {
        self.0.is_sign_positive()
    }

    /// Serializes to the decimal form `±d.ddd…e±EEEE` with enough digits to
    /// round-trip at this value's precision.
    pub fn to_decimal_string(&self) -> String {
        format_decimal(&self.0)
    }

    fn bin2<F>(&self, rhs: &ExtReal, dir: RoundingDir, what: &str, op: F) -> Result<ExtReal>
    where
        F: FnOnce(&Float, &Float, u32, Round) -> (Float, Ordering),
    {
        let prec = self.prec().max(rhs.prec());
        let (f, _) = op(&self.0, &rhs.0, prec, dir.mpfr());
        ExtReal::wrap(f, what)
    }

    pub fn add(&self, rhs: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
        self.bin2(rhs, dir, "add", |a, b, p, r| (a + b).complete_round(p, r))
    }

    pub fn sub(&self, rhs: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
        self.bin2(rhs, dir, "sub", |a, b, p, r| (a - b).complete_round(p, r))
    }

    pub fn mul(&self, rhs: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
        self.bin2(rhs, dir, "mul", |a, b, p, r| (a * b).complete_round(p, r))
    }

    pub fn div(&self, rhs: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
        if rhs.0.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        self.bin2(rhs, dir, "div", |a, b, p, r| (a / b).complete_round(p, r))
    }

    pub fn neg(&self) -> ExtReal {
        ExtReal((-&self.0).complete(self.prec()))
    }

    pub fn abs(&self) -> ExtReal {
        ExtReal(self.0.clone().abs())
    }

    pub fn max(&self, rhs: &ExtReal) -> ExtReal {
        if self.0 >= rhs.0 {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn min(&self, rhs: &ExtReal) -> ExtReal {
        if self.0 <= rhs.0 {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn exp(&self, dir: RoundingDir) -> Result<ExtReal> {
        if self.0.to_f64() > exp_overflow_limit() {
            return Err(Error::Range(format!(
                "exp({}) overflows the extended exponent range",
                self.0.to_f64()
            )));
        }
        let (f, _) = self.0.exp_ref().complete_round(self.prec(), dir.mpfr());
        ExtReal::wrap(f, "exp")
    }

    pub fn ln(&self, dir: RoundingDir) -> Result<ExtReal> {
        if self.0 <= 0 {
            return Err(Error::Domain("ln of a non-positive value".into()));
        }
        let (f, _) = self.0.ln_ref().complete_round(self.prec(), dir.mpfr());
        ExtReal::wrap(f, "ln")
    }

    /// ln(1 + x), accurate for tiny x.
    pub fn ln_1p(&self, dir: RoundingDir) -> Result<ExtReal> {
        if self.0 <= -1 {
            return Err(Error::Domain("ln_1p of a value <= -1".into()));
        }
        let (f, _) = self.0.ln_1p_ref().complete_round(self.prec(), dir.mpfr());
        ExtReal::wrap(f, "ln_1p")
    }

    pub fn sqrt(&self, dir: RoundingDir) -> Result<ExtReal> {
        if self.0 < 0 {
            return Err(Error::Domain("sqrt of a negative value".into()));
        }
        let (f, _) = self.0.sqrt_ref().complete_round(self.prec(), dir.mpfr());
        ExtReal::wrap(f, "sqrt")
    }

    pub fn recip(&self, dir: RoundingDir) -> Result<ExtReal> {
        ExtReal::one(self.prec()).div(self, dir)
    }

    /// self^exp for positive self (and any real exp), or integer-valued exp
    /// on any base handled by the backend's pow.
    pub fn pow(&self, exp: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
        let prec = self.prec().max(exp.prec());
        let (f, _) = (&self.0).pow(&exp.0).complete_round(prec, dir.mpfr());
        ExtReal::wrap(f, "pow")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// e^x with the directed-rounding contract; errors on exponent overflow.
pub fn ext_exp(x: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
    x.exp(dir)
}

/// Natural log; domain error on non-positive input.
pub fn ext_log(x: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
    x.ln(dir)
}

/// ln(ln(x)); domain error for x <= 1.
pub fn ext_loglog(x: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
    if x.0 <= 1 {
        return Err(Error::Domain("loglog of a value <= 1".into()));
    }
    x.ln(dir)?.ln(dir)
}

/// base^exp with the directed-rounding contract.
pub fn ext_pow(base: &ExtReal, exp: &ExtReal, dir: RoundingDir) -> Result<ExtReal> {
    base.pow(exp, dir)
}

fn format_decimal(f: &Float) -> String {
    if f.is_zero() {
        return "+0.0e+0000".to_string();
    }
    // Digits sufficient for an exact round-trip at this precision.
    let digits = (f.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let (sign, mantissa, exp) = f.to_sign_string_exp(10, Some(digits));
    let exp = exp.expect("finite nonzero value has an exponent");
    // to_sign_string_exp places the decimal point before the first digit;
    // shift by one to the conventional d.ddd form.
    let (head, tail) = mantissa.split_at(1);
    let e10 = i64::from(exp) - 1;
    let esign = if e10 < 0 { '-' } else { '+' };
    format!(
        "{}{}.{}e{}{:04}",
        if sign { "-" } else { "+" },
        head,
        if tail.is_empty() { "0" } else { tail },
        esign,
        e10.abs()
    )
}

/// Parses the exact decimal literal `s` into a rational number.
///
/// Accepts optional sign, optional fractional part and optional decimal
/// exponent (`-1.25e-3`). Used for configuration constants, which must be
/// representable exactly rather than rounded at parse time.
pub fn decimal_to_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |m: &str| Error::Parse(format!("{s:?}: {m}"));
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad("bad exponent"))?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, fr)) => (i, fr),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    let all: String = [int_part, frac_part].concat();
    if !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("non-digit in mantissa"));
    }
    let mut num = Integer::from_str_radix(&all, 10).map_err(|_| bad("bad digits"))?;
    if neg {
        num = -num;
    }
    let shift = exp - frac_part.len() as i64;
    let mut r = Rational::from(num);
    match shift.cmp(&0) {
        Ordering::Greater => r *= Integer::from(10).pow(shift as u32),
        Ordering::Less => r /= Integer::from(10).pow((-shift) as u32),
        Ordering::Equal => {}
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Internal two-endpoint bracket arithmetic.
// ---------------------------------------------------------------------------

/// A certified enclosure [lo, hi] of a real number, with every operation
/// rounding the lower endpoint down and the upper endpoint up. Public module
/// operations evaluate with `Brak` internally and expose the endpoint their
/// contract names (upper bounds round up, lower bounds round down).
#[derive(Debug, Clone)]
pub(crate) struct Brak {
    lo: Float,
    hi: Float,
}

impl Brak {
    pub(crate) fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    fn check(self, what: &str) -> Result<Brak> {
        if self.lo.is_finite() && self.hi.is_finite() {
            debug_assert!(self.lo <= self.hi, "{what}: inverted bracket");
            Ok(self)
        } else {
            Err(Error::Range(format!("{what} left the representable range")))
        }
    }

    pub(crate) fn from_ext(x: &ExtReal) -> Brak {
        Brak {
            lo: x.0.clone(),
            hi: x.0.clone(),
        }
    }

    pub(crate) fn from_u64(v: u64, prec: u32) -> Brak {
        // Exact when v fits the significand; otherwise round outward.
        let (lo, _) = Float::with_val_round(prec, v, Round::Down);
        let (hi, _) = Float::with_val_round(prec, v, Round::Up);
        Brak { lo, hi }
    }

    #[cfg(test)]
    pub(crate) fn from_i64(v: i64, prec: u32) -> Brak {
        let (lo, _) = Float::with_val_round(prec, v, Round::Down);
        let (hi, _) = Float::with_val_round(prec, v, Round::Up);
        Brak { lo, hi }
    }

    pub(crate) fn from_rational(r: &Rational, prec: u32) -> Brak {
        let (lo, _) = Float::with_val_round(prec, r, Round::Down);
        let (hi, _) = Float::with_val_round(prec, r, Round::Up);
        Brak { lo, hi }
    }

    pub(crate) fn zero(prec: u32) -> Brak {
        Brak {
            lo: Float::with_val(prec, 0),
            hi: Float::with_val(prec, 0),
        }
    }

    pub(crate) fn one(prec: u32) -> Brak {
        Brak {
            lo: Float::with_val(prec, 1),
            hi: Float::with_val(prec, 1),
        }
    }

    pub(crate) fn pi(prec: u32) -> Brak {
        let (lo, _) = Float::with_val_round(prec, rug::float::Constant::Pi, Round::Down);
        let (hi, _) = Float::with_val_round(prec, rug::float::Constant::Pi, Round::Up);
        Brak { lo, hi }
    }

    pub(crate) fn lo_ext(&self) -> ExtReal {
        ExtReal(self.lo.clone())
    }

    pub(crate) fn hi_ext(&self) -> ExtReal {
        ExtReal(self.hi.clone())
    }

    pub(crate) fn lo(&self) -> &Float {
        &self.lo
    }

    pub(crate) fn hi(&self) -> &Float {
        &self.hi
    }

    /// A representable point inside [lo, hi]; the `Nearest` answer for
    /// operations evaluated through brackets.
    pub(crate) fn mid_ext(&self) -> ExtReal {
        let prec = self.prec();
        let (sum, _) = (&self.lo + &self.hi).complete_round(prec + 1, Round::Nearest);
        // Halving is exact in binary; only the final narrowing rounds.
        let half = Float::with_val(prec, sum / 2u32);
        // Rounding a point of [lo, hi] to nearest cannot leave the interval
        // because both endpoints are representable.
        ExtReal(half)
    }

    pub(crate) fn is_strictly_positive(&self) -> bool {
        self.lo > 0
    }

    pub(crate) fn is_strictly_negative(&self) -> bool {
        self.hi < 0
    }

    #[cfg(test)]
    pub(crate) fn width(&self) -> Float {
        (&self.hi - &self.lo).complete_round(self.prec(), Round::Up).0
    }

    pub(crate) fn add(&self, o: &Brak) -> Result<Brak> {
        let p = self.prec().max(o.prec());
        Brak {
            lo: (&self.lo + &o.lo).complete_round(p, Round::Down).0,
            hi: (&self.hi + &o.hi).complete_round(p, Round::Up).0,
        }
        .check("add")
    }

    pub(crate) fn sub(&self, o: &Brak) -> Result<Brak> {
        let p = self.prec().max(o.prec());
        Brak {
            lo: (&self.lo - &o.hi).complete_round(p, Round::Down).0,
            hi: (&self.hi - &o.lo).complete_round(p, Round::Up).0,
        }
        .check("sub")
    }

    pub(crate) fn neg(&self) -> Brak {
        let p = self.prec();
        Brak {
            lo: (-&self.hi).complete(p),
            hi: (-&self.lo).complete(p),
        }
    }

    pub(crate) fn mul(&self, o: &Brak) -> Result<Brak> {
        let p = self.prec().max(o.prec());
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let d = (a * b).complete_round(p, Round::Down).0;
            let u = (a * b).complete_round(p, Round::Up).0;
            lo = Some(match lo {
                Some(c) if c <= d => c,
                _ => d,
            });
            hi = Some(match hi {
                Some(c) if c >= u => c,
                _ => u,
            });
        }
        Brak {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
        .check("mul")
    }

    /// Division by a sign-definite interval; domain error if `o` encloses 0.
    pub(crate) fn div(&self, o: &Brak) -> Result<Brak> {
        if o.lo <= 0 && o.hi >= 0 {
            return Err(Error::Domain(
                "division by an interval enclosing zero".into(),
            ));
        }
        let p = self.prec().max(o.prec());
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let d = (a / b).complete_round(p, Round::Down).0;
            let u = (a / b).complete_round(p, Round::Up).0;
            lo = Some(match lo {
                Some(c) if c <= d => c,
                _ => d,
            });
            hi = Some(match hi {
                Some(c) if c >= u => c,
                _ => u,
            });
        }
        Brak {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
        .check("div")
    }

    pub(crate) fn exp(&self) -> Result<Brak> {
        if self.hi.to_f64() > exp_overflow_limit() {
            return Err(Error::Range("exp overflows the exponent range".into()));
        }
        let p = self.prec();
        Brak {
            lo: self.lo.exp_ref().complete_round(p, Round::Down).0,
            hi: self.hi.exp_ref().complete_round(p, Round::Up).0,
        }
        .check("exp")
    }

    pub(crate) fn ln(&self) -> Result<Brak> {
        if self.lo <= 0 {
            return Err(Error::Domain("ln of an interval reaching <= 0".into()));
        }
        let p = self.prec();
        Brak {
            lo: self.lo.ln_ref().complete_round(p, Round::Down).0,
            hi: self.hi.ln_ref().complete_round(p, Round::Up).0,
        }
        .check("ln")
    }

    /// e^x - 1, accurate near 0.
    pub(crate) fn exp_m1(&self) -> Result<Brak> {
        if self.hi.to_f64() > exp_overflow_limit() {
            return Err(Error::Range("exp_m1 overflows the exponent range".into()));
        }
        let p = self.prec();
        Brak {
            lo: self.lo.exp_m1_ref().complete_round(p, Round::Down).0,
            hi: self.hi.exp_m1_ref().complete_round(p, Round::Up).0,
        }
        .check("exp_m1")
    }

    pub(crate) fn ln_1p(&self) -> Result<Brak> {
        if self.lo <= -1 {
            return Err(Error::Domain("ln_1p of an interval reaching <= -1".into()));
        }
        let p = self.prec();
        Brak {
            lo: self.lo.ln_1p_ref().complete_round(p, Round::Down).0,
            hi: self.hi.ln_1p_ref().complete_round(p, Round::Up).0,
        }
        .check("ln_1p")
    }

    /// self^e for strictly positive self, via exp(e * ln self).
    pub(crate) fn pow(&self, e: &Brak) -> Result<Brak> {
        self.ln()?.mul(e)?.exp()
    }

    /// Integer power of a strictly positive interval (monotone endpoints).
    pub(crate) fn powi(&self, n: u32) -> Result<Brak> {
        if self.lo <= 0 {
            return Err(Error::Domain("powi of an interval reaching <= 0".into()));
        }
        let p = self.prec();
        Brak {
            lo: (&self.lo).pow(n).complete_round(p, Round::Down).0,
            hi: (&self.hi).pow(n).complete_round(p, Round::Up).0,
        }
        .check("powi")
    }

    pub(crate) fn recip(&self) -> Result<Brak> {
        Brak::one(self.prec()).div(self)
    }

    pub(crate) fn max(&self, o: &Brak) -> Brak {
        Brak {
            lo: if self.lo >= o.lo {
                self.lo.clone()
            } else {
                o.lo.clone()
            },
            hi: if self.hi >= o.hi {
                self.hi.clone()
            } else {
                o.hi.clone()
            },
        }
    }

    pub(crate) fn mul_u32(&self, v: u32) -> Result<Brak> {
        self.mul(&Brak::from_u64(v as u64, self.prec()))
    }

    pub(crate) fn div_u32(&self, v: u32) -> Result<Brak> {
        if v == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        self.div(&Brak::from_u64(v as u64, self.prec()))
    }

    /// True if `self` is certainly below `o` (hi < o.lo).
    pub(crate) fn certainly_lt(&self, o: &Brak) -> bool {
        self.hi < o.lo
    }

    /// A point bracket at the given representable value.
    pub(crate) fn from_float(f: Float) -> Brak {
        Brak {
            lo: f.clone(),
            hi: f,
        }
    }

    /// Representable point halfway between `self.hi` and `o.lo`, as a point
    /// bracket; the step of a bisection loop that tracks exact points.
    pub(crate) fn mid_with(&self, o: &Brak) -> Brak {
        let p = self.prec().max(o.prec());
        let (sum, _) = (&self.hi + &o.lo).complete_round(p + 1, Round::Nearest);
        let half = Float::with_val(p, sum / 2u32);
        Brak::from_float(half)
    }

    /// Smallest bracket containing both.
    pub(crate) fn hull(&self, o: &Brak) -> Brak {
        Brak {
            lo: if self.lo <= o.lo {
                self.lo.clone()
            } else {
                o.lo.clone()
            },
            hi: if self.hi >= o.hi {
                self.hi.clone()
            } else {
                o.hi.clone()
            },
        }
    }

    pub(crate) fn abs(&self) -> Brak {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let n = self.neg();
            Brak {
                lo: Float::with_val(self.prec(), 0),
                hi: if n.hi >= self.hi {
                    n.hi
                } else {
                    self.hi.clone()
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, prec: u32, d: RoundingDir) -> ExtReal {
        ExtReal::parse_decimal(s, prec, d).unwrap()
    }

    #[test]
    fn exp_identity_and_sandwich() {
        let zero = ExtReal::zero(128);
        assert_eq!(ext_exp(&zero, RoundingDir::Up).unwrap(), ExtReal::one(128));
        let one = ExtReal::one(128);
        let lo = ext_exp(&one, RoundingDir::Down).unwrap();
        let mi = ext_exp(&one, RoundingDir::Nearest).unwrap();
        let hi = ext_exp(&one, RoundingDir::Up).unwrap();
        assert!(lo <= mi && mi <= hi && lo < hi);
        let gap = hi.sub(&lo, RoundingDir::Up).unwrap();
        let budget = p("1", 128, RoundingDir::Nearest)
            .div(&ext_pow(&ExtReal::from_u64(2, 128), &ExtReal::from_u64(120, 128), RoundingDir::Down).unwrap(), RoundingDir::Up)
            .unwrap();
        assert!(gap < budget);
    }

    #[test]
    fn exp_4850_decimal_exponent() {
        let x = ExtReal::from_u64(4850, 128);
        let e = ext_exp(&x, RoundingDir::Nearest).unwrap();
        let s = e.to_decimal_string();
        let exp: i64 = s.split('e').nth(1).unwrap().parse().unwrap();
        assert_eq!(exp, 2106);
    }

    #[test]
    fn log_identities() {
        let one = ExtReal::one(128);
        assert!(ext_log(&one, RoundingDir::Up).unwrap().is_zero());
        // loglog(exp(1000)) == ln(1000) to within directed-rounding width.
        let e1000 = ext_exp(&ExtReal::from_u64(1000, 128), RoundingDir::Nearest).unwrap();
        let ll = ext_loglog(&e1000, RoundingDir::Nearest).unwrap();
        let direct = ext_log(&ExtReal::from_u64(1000, 128), RoundingDir::Nearest).unwrap();
        let diff = ll.sub(&direct, RoundingDir::Up).unwrap().abs();
        assert!(diff.to_f64() < 1e-35, "diff {}", diff);
        assert!((ll.to_f64() - 6.907755278982137).abs() < 1e-12);
    }

    #[test]
    fn pow_exact_integer() {
        let two = ExtReal::from_u64(2, 128);
        let e = ExtReal::from_u64(155, 128);
        let r = ext_pow(&two, &e, RoundingDir::Nearest).unwrap();
        let expect = Float::with_val(128, Integer::from(1) << 155);
        assert_eq!(r.0, expect);
        let up = ext_pow(&two, &e, RoundingDir::Up).unwrap();
        let dn = ext_pow(&two, &e, RoundingDir::Down).unwrap();
        assert_eq!(up.0, r.0);
        assert_eq!(dn.0, r.0);
    }

    #[test]
    fn domain_errors() {
        let z = ExtReal::zero(128);
        assert!(matches!(ext_log(&z, RoundingDir::Up), Err(Error::Domain(_))));
        let one = ExtReal::one(128);
        assert!(matches!(ext_loglog(&one, RoundingDir::Up), Err(Error::Domain(_))));
        let neg = ExtReal::from_i64(-3, 128);
        assert!(matches!(neg.sqrt(RoundingDir::Up), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_is_an_error_underflow_is_directed() {
        let big = p("1e10", 128, RoundingDir::Nearest);
        assert!(matches!(ext_exp(&big, RoundingDir::Up), Err(Error::Range(_))));
        assert!(matches!(ext_exp(&big, RoundingDir::Down), Err(Error::Range(_))));
        let small = p("-1e10", 128, RoundingDir::Nearest);
        let dn = ext_exp(&small, RoundingDir::Down).unwrap();
        let up = ext_exp(&small, RoundingDir::Up).unwrap();
        assert!(dn.is_zero());
        assert!(!up.is_zero() && up.is_sign_positive());
    }

    #[test]
    fn precision_shrinks_gap() {
        let one128 = ExtReal::one(128);
        let one256 = ExtReal::one(256);
        let g128 = ext_exp(&one128, RoundingDir::Up)
            .unwrap()
            .sub(&ext_exp(&one128, RoundingDir::Down).unwrap(), RoundingDir::Up)
            .unwrap();
        let g256 = ext_exp(&one256, RoundingDir::Up)
            .unwrap()
            .sub(&ext_exp(&one256, RoundingDir::Down).unwrap(), RoundingDir::Up)
            .unwrap();
        assert!(g256 < g128);
    }

    #[test]
    fn decimal_round_trip() {
        for s in ["0.04962", "-3.4747", "1.99986e-12", "54594.17", "4e18"] {
            let x = p(s, 128, RoundingDir::Nearest);
            let back = ExtReal::parse_decimal(&x.to_decimal_string(), 128, RoundingDir::Nearest).unwrap();
            assert_eq!(x, back, "{s}");
        }
        assert_eq!(ExtReal::zero(128).to_decimal_string(), "+0.0e+0000");
    }

    #[test]
    fn rational_parse_exact() {
        let r = decimal_to_rational("0.04962").unwrap();
        assert_eq!(r, Rational::from((4962u32, 100000u32)));
        let r = decimal_to_rational("-1.5e3").unwrap();
        assert_eq!(r, Rational::from(-1500));
        let r = decimal_to_rational("1.99986e-12").unwrap();
        assert_eq!(r, Rational::from((199986u64, 1u64)) / Integer::from(10).pow(17u32));
        assert!(decimal_to_rational("abc").is_err());
        assert!(decimal_to_rational("1..2").is_err());
    }

    #[test]
    fn brak_basic_soundness() {
        let a = Brak::from_rational(&decimal_to_rational("0.1").unwrap(), 128);
        assert!(a.lo() < a.hi());
        // Compare against exact rationals: f64 literals like 0.2 sit much
        // farther from 1/5 than the 128-bit bracket width.
        let s = a.add(&a).unwrap();
        let fifth = Rational::from((1u32, 5u32));
        assert!(s.lo() < s.hi());
        assert!(*s.lo() < fifth && *s.hi() > fifth);
        let m = a.mul(&a).unwrap();
        let hundredth = Rational::from((1u32, 100u32));
        assert!(*m.lo() < hundredth && *m.hi() > hundredth);
        let d = Brak::one(128).div(&a).unwrap();
        assert!(*d.lo() < 10 && *d.hi() > 10);
        let e = a.exp().unwrap();
        let l = e.ln().unwrap();
        assert!(l.lo() <= a.lo() && l.hi() >= a.hi());
    }

    #[test]
    fn brak_mid_inside() {
        let a = Brak::from_rational(&decimal_to_rational("0.12345").unwrap(), 128);
        let m = a.mid_ext();
        assert!(m >= a.lo_ext() && m <= a.hi_ext());
    }

    #[test]
    fn brak_underflow_subtraction_stays_sound() {
        // exp(-1e10) underflows; subtracting it from 1 must keep a valid
        // bracket with lo <= 1 <= hi-ish.
        let tiny = Brak::from_i64(-10_000_000_000, 128).exp().unwrap();
        assert!(tiny.lo().is_zero());
        assert!(!tiny.hi().is_zero());
        let one = Brak::one(128);
        let r = one.sub(&tiny).unwrap();
        assert!(*r.lo() < 1 && *r.hi() == 1);
    }
}
