//! Outward-rounded interval arithmetic over MPFR floats.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper endpoint
//! toward +∞ explicitly, so results never depend on an ambient rounding mode.
//! Intervals are immutable values; all operations are pure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default working precision in mantissa bits.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("malformed decimal literal {0:?}")]
    MalformedDecimal(String),
    #[error("inverted interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: String, hi: String },
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of an interval with negative lower endpoint")]
    NegativeSqrt,
    #[error("endpoint overflow")]
    Overflow,
    #[error("cannot bisect a zero-width interval")]
    Degenerate,
    #[error("empty intersection")]
    EmptyIntersection,
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),
}

/// Working precision of interval endpoints, in mantissa bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub fn new(mantissa_bits: u32) -> Result<Self, IntervalError> {
        if mantissa_bits < 53 {
            return Err(IntervalError::PrecisionTooLow(mantissa_bits));
        }
        Ok(Precision(mantissa_bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION_BITS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    ContainsZero,
}

impl Sign {
    /// True for `Positive` and `Negative`.
    pub fn is_strict(self) -> bool {
        !matches!(self, Sign::ContainsZero)
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::ContainsZero => Sign::ContainsZero,
        }
    }

    /// +1, −1 or 0.
    pub fn signum(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
            Sign::ContainsZero => 0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sign::Positive => "> 0",
            Sign::Negative => "< 0",
            Sign::ContainsZero => "contains 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn validate_decimal(s: &str) -> bool {
    let b = s.trim().as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

fn parse_round(s: &str, prec: u32, round: Round) -> Result<Float, IntervalError> {
    if !validate_decimal(s) {
        return Err(IntervalError::MalformedDecimal(s.to_string()));
    }
    let parsed =
        Float::parse(s.trim()).map_err(|_| IntervalError::MalformedDecimal(s.to_string()))?;
    let (v, _) = Float::with_val_round(prec, parsed, round);
    if !v.is_finite() {
        return Err(IntervalError::Overflow);
    }
    Ok(v)
}

fn min_f(a: Float, b: Float) -> Float {
    if b < a {
        b
    } else {
        a
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

impl Interval {
    /// Builds `[lo, hi]` from endpoints; fails if `lo > hi` or either is not finite.
    pub fn new(lo: Float, hi: Float) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Overflow);
        }
        if lo > hi {
            return Err(IntervalError::Inverted {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    fn raw(lo: Float, hi: Float) -> Self {
        debug_assert!(!(lo > hi), "inverted interval {lo} > {hi}");
        Interval { lo, hi }
    }

    /// Encloses `[lo_str, hi_str]`, rounding each decimal outward.
    pub fn from_decimal(lo_str: &str, hi_str: &str, prec: Precision) -> Result<Self, IntervalError> {
        let lo = parse_round(lo_str, prec.bits(), Round::Down)?;
        let hi = parse_round(hi_str, prec.bits(), Round::Up)?;
        if lo > hi {
            return Err(IntervalError::Inverted {
                lo: lo_str.to_string(),
                hi: hi_str.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Largest representable interval inside `[lo_str, hi_str]`.
    pub fn from_decimal_inward(lo_str: &str, hi_str: &str, prec: Precision) -> Result<Self, IntervalError> {
        let lo = parse_round(lo_str, prec.bits(), Round::Up)?;
        let hi = parse_round(hi_str, prec.bits(), Round::Down)?;
        if lo > hi {
            return Err(IntervalError::Inverted {
                lo: lo_str.to_string(),
                hi: hi_str.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Encloses the single decimal value `s`.
    pub fn point_decimal(s: &str, prec: Precision) -> Result<Self, IntervalError> {
        Self::from_decimal(s, s, prec)
    }

    /// Parses `"x"` or `"lo:hi"`.
    pub fn parse(s: &str, prec: Precision) -> Result<Self, IntervalError> {
        match s.split_once(':') {
            Some((lo, hi)) => Self::from_decimal(lo, hi, prec),
            None => Self::point_decimal(s, prec),
        }
    }

    pub fn from_f64(x: f64, prec: Precision) -> Result<Self, IntervalError> {
        if !x.is_finite() {
            return Err(IntervalError::Overflow);
        }
        // every f64 is exact at >= 53 bits
        let v = Float::with_val(prec.bits(), x);
        Ok(Interval::raw(v.clone(), v))
    }

    pub fn from_int(n: i64, prec: Precision) -> Self {
        let (lo, _) = Float::with_val_round(prec.bits(), n, Round::Down);
        let (hi, _) = Float::with_val_round(prec.bits(), n, Round::Up);
        Interval::raw(lo, hi)
    }

    /// Encloses `num / den`.
    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Result<Self, IntervalError> {
        Interval::from_int(num, prec).div(&Interval::from_int(den, prec))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn precision(&self) -> Precision {
        Precision(self.prec().max(53))
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Returns `self` if both endpoints are finite, otherwise `Overflow`.
    pub fn finite(self) -> Result<Self, IntervalError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(IntervalError::Overflow)
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    /// Midpoint rounded to nearest; always lies in `[lo, hi]`.
    pub fn mid(&self) -> Float {
        let p = self.prec();
        let sum = Float::with_val(p + 1, &self.lo + &self.hi);
        let m = Float::with_val(p, sum / 2u32);
        // guard against rounding outside a one-ulp interval
        max_f(min_f(m, self.hi.clone()), self.lo.clone())
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.prec(), self.hi.abs_ref());
        max_f(a, b)
    }

    /// Lower bound of `|x|` over the interval.
    pub fn mig(&self) -> Float {
        match self.sign() {
            Sign::Positive => self.lo.clone(),
            Sign::Negative => Float::with_val(self.prec(), -&self.hi),
            Sign::ContainsZero => Float::new(self.prec()),
        }
    }

    pub fn sign(&self) -> Sign {
        if self.lo > 0 {
            Sign::Positive
        } else if self.hi < 0 {
            Sign::Negative
        } else {
            Sign::ContainsZero
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign() == Sign::ContainsZero
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        let lo = min_f(Float::with_val(p, &self.lo), Float::with_val(p, &other.lo));
        let hi = max_f(Float::with_val(p, &self.hi), Float::with_val(p, &other.hi));
        Interval::raw(lo, hi)
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval, IntervalError> {
        let lo = max_f(self.lo.clone(), other.lo.clone());
        let hi = min_f(self.hi.clone(), other.hi.clone());
        if lo > hi {
            return Err(IntervalError::EmptyIntersection);
        }
        Ok(Interval::raw(lo, hi))
    }

    /// Degenerate interval at the lower endpoint.
    pub fn lower_point(&self) -> Interval {
        Interval::raw(self.lo.clone(), self.lo.clone())
    }

    /// Degenerate interval at the upper endpoint.
    pub fn upper_point(&self) -> Interval {
        Interval::raw(self.hi.clone(), self.hi.clone())
    }

    /// Degenerate interval at the rounded midpoint.
    pub fn mid_point(&self) -> Interval {
        let m = self.mid();
        Interval::raw(m.clone(), m)
    }

    /// Splits at the rounded midpoint; `L.hi == R.lo`.
    pub fn bisect(&self) -> Result<(Interval, Interval), IntervalError> {
        if self.is_point() {
            return Err(IntervalError::Degenerate);
        }
        let m = self.mid();
        Ok((
            Interval::raw(self.lo.clone(), m.clone()),
            Interval::raw(m, self.hi.clone()),
        ))
    }

    /// Re-rounds the endpoints outward to `prec`.
    pub fn with_precision(&self, prec: Precision) -> Interval {
        let lo = Float::with_val_round(prec.bits(), &self.lo, Round::Down).0;
        let hi = Float::with_val_round(prec.bits(), &self.hi, Round::Up).0;
        Interval::raw(lo, hi)
    }

    /// Widens both endpoints by one ulp.
    pub fn widen_ulp(&self) -> Interval {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.next_down();
        hi.next_up();
        Interval::raw(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        match self.sign() {
            Sign::Positive => self.clone(),
            Sign::Negative => -self,
            Sign::ContainsZero => Interval::raw(Float::new(self.prec()), self.mag()),
        }
    }

    pub fn sqr(&self) -> Interval {
        let p = self.prec();
        let a = self.abs();
        let lo = Float::with_val_round(p, a.lo.square_ref(), Round::Down).0;
        let hi = Float::with_val_round(p, a.hi.square_ref(), Round::Up).0;
        Interval::raw(lo, hi)
    }

    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::from_int(1, self.precision()),
            1 => self.clone(),
            _ => {
                if n.is_multiple_of(2) {
                    self.sqr().powi(n / 2)
                } else if self.lo >= 0 {
                    // x >= 0: products of nonnegative intervals are exact-isotone
                    &self.sqr().powi(n / 2) * self
                } else {
                    // odd powers are monotone increasing
                    let lo = pow_round(&self.lo, n, Round::Down);
                    let hi = pow_round(&self.hi, n, Round::Up);
                    Interval::raw(lo, hi)
                }
            }
        }
    }

    pub fn div(&self, rhs: &Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let p = self.prec().max(rhs.prec());
        let q = |a: &Float, b: &Float, r| Float::with_val_round(p, a / b, r).0;
        let lows = [
            q(&self.lo, &rhs.lo, Round::Down),
            q(&self.lo, &rhs.hi, Round::Down),
            q(&self.hi, &rhs.lo, Round::Down),
            q(&self.hi, &rhs.hi, Round::Down),
        ];
        let highs = [
            q(&self.lo, &rhs.lo, Round::Up),
            q(&self.lo, &rhs.hi, Round::Up),
            q(&self.hi, &rhs.lo, Round::Up),
            q(&self.hi, &rhs.hi, Round::Up),
        ];
        let lo = lows.into_iter().reduce(min_f).expect("four candidates");
        let hi = highs.into_iter().reduce(max_f).expect("four candidates");
        Interval::new(lo, hi)
    }

    pub fn recip(&self) -> Result<Interval, IntervalError> {
        Interval::from_int(1, self.precision()).div(self)
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.lo < 0 {
            return Err(IntervalError::NegativeSqrt);
        }
        let p = self.prec();
        let lo = Float::with_val_round(p, self.lo.sqrt_ref(), Round::Down).0;
        let hi = Float::with_val_round(p, self.hi.sqrt_ref(), Round::Up).0;
        Ok(Interval::raw(lo, hi))
    }

    /// Multiplies by a small exact integer.
    pub fn scale(&self, k: i64) -> Interval {
        self * &Interval::from_int(k, self.precision())
    }

    /// Lower endpoint rounded down to f64.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    /// Upper endpoint rounded up to f64.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    /// Decimal strings with `digits` significant digits, rounded outward.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            positional(&self.lo.to_string_radix_round(10, Some(digits), Round::Down)),
            positional(&self.hi.to_string_radix_round(10, Some(digits), Round::Up)),
        )
    }
}

/// Rewrites `d.ddde-2` as `0.0dddd` when the exponent is modest.
pub(crate) fn positional(s: &str) -> String {
    let Some((mant, exp)) = s.split_once('e') else {
        return s.to_string();
    };
    let Ok(exp) = exp.parse::<i32>() else {
        return s.to_string();
    };
    if !(-8..=40).contains(&exp) {
        return s.to_string();
    }
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let point = int.len() as i32 + exp;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

fn pow_round(x: &Float, n: u32, round: Round) -> Float {
    Float::with_val_round(x.prec(), x.pow(n), round).0
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_strings(20);
        write!(f, "[{lo}, {hi}]")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let (lo, hi) = self.to_decimal_strings(digits);
        write!(f, "[{lo}, {hi}]")
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let p = self.prec().max(rhs.prec());
        let lo = Float::with_val_round(p, &self.lo + &rhs.lo, Round::Down).0;
        let hi = Float::with_val_round(p, &self.hi + &rhs.hi, Round::Up).0;
        Interval::raw(lo, hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let p = self.prec().max(rhs.prec());
        let lo = Float::with_val_round(p, &self.lo - &rhs.hi, Round::Down).0;
        let hi = Float::with_val_round(p, &self.hi - &rhs.lo, Round::Up).0;
        Interval::raw(lo, hi)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.prec().max(rhs.prec());
        let m = |a: &Float, b: &Float, r| Float::with_val_round(p, a * b, r).0;
        if self.lo >= 0 && rhs.lo >= 0 {
            return Interval::raw(
                m(&self.lo, &rhs.lo, Round::Down),
                m(&self.hi, &rhs.hi, Round::Up),
            );
        }
        let lows = [
            m(&self.lo, &rhs.lo, Round::Down),
            m(&self.lo, &rhs.hi, Round::Down),
            m(&self.hi, &rhs.lo, Round::Down),
            m(&self.hi, &rhs.hi, Round::Down),
        ];
        let highs = [
            m(&self.lo, &rhs.lo, Round::Up),
            m(&self.lo, &rhs.hi, Round::Up),
            m(&self.hi, &rhs.lo, Round::Up),
            m(&self.hi, &rhs.hi, Round::Up),
        ];
        let lo = lows.into_iter().reduce(min_f).expect("four candidates");
        let hi = highs.into_iter().reduce(max_f).expect("four candidates");
        Interval::raw(lo, hi)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi.clone(), -self.lo.clone())
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
        impl $tr<Interval> for &Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Checked binary operation; the result encloses `{x op y : x ∈ X, y ∈ Y}`.
pub fn arith(op: ArithOp, x: &Interval, y: &Interval) -> Result<Interval, IntervalError> {
    match op {
        ArithOp::Add => (x + y).finite(),
        ArithOp::Sub => (x - y).finite(),
        ArithOp::Mul => (x * y).finite(),
        ArithOp::Div => x.div(y),
    }
}

pub fn sqrt_iv(x: &Interval) -> Result<Interval, IntervalError> {
    x.sqrt()
}

pub fn sign_of(x: &Interval) -> Sign {
    x.sign()
}

pub fn bisect(x: &Interval) -> Result<(Interval, Interval), IntervalError> {
    x.bisect()
}

/// Total order on lower endpoints, used for canonical sorting.
pub fn cmp_lo(a: &Interval, b: &Interval) -> Ordering {
    a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal)
}

/// Interval rendered as outward-rounded decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    pub lo: String,
    pub hi: String,
}

/// Significant digits used when serializing intervals.
pub const SERIAL_DIGITS: usize = 25;

impl From<&Interval> for DecimalInterval {
    fn from(x: &Interval) -> Self {
        let (lo, hi) = x.to_decimal_strings(SERIAL_DIGITS);
        DecimalInterval { lo, hi }
    }
}

impl DecimalInterval {
    pub fn to_interval_inward(&self, prec: Precision) -> Result<Interval, IntervalError> {
        Interval::from_decimal_inward(&self.lo, &self.hi, prec)
    }

    pub fn to_interval(&self, prec: Precision) -> Result<Interval, IntervalError> {
        Interval::from_decimal(&self.lo, &self.hi, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn iv(lo: &str, hi: &str) -> Interval {
        Interval::from_decimal(lo, hi, p()).unwrap()
    }

    #[test]
    fn positional_rendering() {
        assert_eq!(positional("5.9472e-1"), "0.59472");
        assert_eq!(positional("-1.5e-3"), "-0.0015");
        assert_eq!(positional("1.5419e2"), "154.19");
        assert_eq!(positional("1.5e3"), "1500");
        assert_eq!(positional("154.19"), "154.19");
        assert_eq!(positional("1.0e-30"), "1.0e-30");
    }

    #[test]
    fn decimal_ingestion() {
        let one = iv("1", "1");
        assert!(one.is_point());
        assert_eq!(one.lo().to_f64(), 1.0);

        let tenth = iv("0.1", "0.1");
        assert!(tenth.lo() < tenth.hi());
        let exact = Float::with_val(1024, Float::parse("0.1").unwrap());
        assert!(tenth.contains_float(&exact));
        // two ulps at 256 bits around 0.1
        let mut ulp2 = tenth.lo().clone();
        ulp2.next_up();
        ulp2.next_up();
        assert!(tenth.hi() <= &ulp2);

        let lam = iv("154.191574494505", "154.191574494520");
        assert!(lam.lo() < &154.1915744945051f64);
        assert!(lam.hi() > &154.191574494519f64);

        assert!(matches!(
            Interval::from_decimal("2", "1", p()),
            Err(IntervalError::Inverted { .. })
        ));
        for bad in ["", "abc", "1e", "--1", "1.2.3", "nan", "inf", "0x10", "."] {
            assert!(
                matches!(Interval::from_decimal(bad, "1", p()), Err(IntervalError::MalformedDecimal(_))),
                "{bad:?} accepted"
            );
        }
        assert!(Interval::from_decimal("-1.5e-3", "+2.", p()).is_ok());
        assert!(Interval::from_decimal(".5", "5E+2", p()).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let mul = arith(ArithOp::Mul, &iv("-1", "2"), &iv("3", "4")).unwrap();
        assert_eq!((mul.lo().to_f64(), mul.hi().to_f64()), (-4.0, 8.0));
        let div = arith(ArithOp::Div, &iv("1", "1"), &iv("2", "2")).unwrap();
        assert_eq!((div.lo().to_f64(), div.hi().to_f64()), (0.5, 0.5));
        let add = arith(ArithOp::Add, &iv("1", "2"), &iv("0.1", "0.1")).unwrap();
        assert!(add.lo() < &1.1f64 || add.contains_f64(1.1));
        assert_eq!(
            arith(ArithOp::Div, &iv("1", "1"), &iv("-1", "1")),
            Err(IntervalError::DivisionByZero)
        );
        let sub = &iv("1", "2") - &iv("0", "3");
        assert_eq!((sub.lo().to_f64(), sub.hi().to_f64()), (-2.0, 2.0));
    }

    #[test]
    fn sqrt_examples() {
        let four = sqrt_iv(&iv("4", "4")).unwrap();
        assert!(four.is_point());
        assert_eq!(four.lo().to_f64(), 2.0);
        let unit = sqrt_iv(&iv("0", "1")).unwrap();
        assert_eq!((unit.lo().to_f64(), unit.hi().to_f64()), (0.0, 1.0));
        let r2 = sqrt_iv(&iv("2", "2")).unwrap();
        let oracle = Float::with_val(2048, 2u32).sqrt();
        assert!(r2.contains_float(&oracle));
        let mut two_ulp = r2.lo().clone();
        two_ulp.next_up();
        two_ulp.next_up();
        assert!(r2.hi() <= &two_ulp);
        assert_eq!(sqrt_iv(&iv("-1", "1")), Err(IntervalError::NegativeSqrt));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_of(&iv("0.1", "3")), Sign::Positive);
        assert_eq!(sign_of(&iv("-2", "-1")), Sign::Negative);
        assert_eq!(sign_of(&iv("-1", "1")), Sign::ContainsZero);
        assert_eq!(sign_of(&iv("0", "1")), Sign::ContainsZero);
    }

    #[test]
    fn bisect_examples() {
        let (l, r) = bisect(&iv("0", "1")).unwrap();
        assert_eq!((l.lo().to_f64(), l.hi().to_f64()), (0.0, 0.5));
        assert_eq!((r.lo().to_f64(), r.hi().to_f64()), (0.5, 1.0));
        let (l, r) = bisect(&iv("2", "4")).unwrap();
        assert_eq!((l.hi().to_f64(), r.lo().to_f64()), (3.0, 3.0));
        let lam = iv("154.191574494505", "154.191574494520");
        let (l, r) = bisect(&lam).unwrap();
        assert_eq!(l.hi(), r.lo());
        assert_eq!(l.lo(), lam.lo());
        assert_eq!(r.hi(), lam.hi());
        assert!(l.hull(&r).contains(&lam));
        assert_eq!(bisect(&iv("1", "1")), Err(IntervalError::Degenerate));
    }

    #[test]
    fn powers_and_abs() {
        let x = iv("-2", "3");
        let sq = x.sqr();
        assert_eq!((sq.lo().to_f64(), sq.hi().to_f64()), (0.0, 9.0));
        let cube = x.powi(3);
        assert_eq!((cube.lo().to_f64(), cube.hi().to_f64()), (-8.0, 27.0));
        let p4 = x.powi(4);
        assert_eq!((p4.lo().to_f64(), p4.hi().to_f64()), (0.0, 81.0));
        let a = iv("-3", "-1").abs();
        assert_eq!((a.lo().to_f64(), a.hi().to_f64()), (1.0, 3.0));
        assert_eq!(iv("-3", "1").mag().to_f64(), 3.0);
        assert_eq!(iv("-3", "-1").mig().to_f64(), 1.0);
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(52).is_err());
        assert_eq!(Precision::new(53).unwrap().bits(), 53);
        assert_eq!(Precision::default().bits(), 256);
    }

    #[test]
    fn decimal_rendering_is_outward() {
        let x = iv("0.1", "0.1");
        let d = DecimalInterval::from(&x);
        let back = d.to_interval(p()).unwrap();
        assert!(back.contains(&x));
        let (lo, hi) = iv("1", "2").to_decimal_strings(5);
        assert_eq!(Float::with_val(64, Float::parse(&lo).unwrap()), 1);
        assert_eq!(Float::with_val(64, Float::parse(&hi).unwrap()), 2);
    }

    #[test]
    fn parse_colon_syntax() {
        let x = Interval::parse("1:2", p()).unwrap();
        assert_eq!((x.lo().to_f64(), x.hi().to_f64()), (1.0, 2.0));
        let y = Interval::parse("0.5", p()).unwrap();
        assert!(y.is_point());
    }
}
