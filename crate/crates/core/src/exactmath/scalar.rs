//! Scalar vocabularies shared by the generic algebra.
//!
//! Two roles are kept apart. A [`Coefficient`] is the number type stored in
//! polynomials and manipulated by the integration recurrences ([`Rational`]
//! on the reference path, `f64`/`f32` for the machine-precision mode). A
//! [`Real`] is the floating type the transcendental terms are evaluated in
//! ([`BigFloat`] at a chosen number of decimal digits, or `f64`).

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{FromPrimitive, One, Zero};
use rug::float::Round;
use rug::Float;

use super::rational::Rational;
use super::sum::correctly_rounded_sum;

/// Arbitrary-precision binary floating point (MPFR).
pub type BigFloat = Float;

/// Decimal working precision of a [`Real`] evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

/// Extra binary digits carried beyond the requested decimal precision.
const GUARD_BITS: u32 = 32;

impl Precision {
    pub const MIN_DIGITS: u32 = 16;

    /// Panics below [`Precision::MIN_DIGITS`].
    pub fn digits(digits: u32) -> Self {
        assert!(digits >= Self::MIN_DIGITS, "precision must be at least {} decimal digits", Self::MIN_DIGITS);
        Precision { digits }
    }

    pub fn decimal_digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits used for [`BigFloat`] values at this precision.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 100 }
    }
}

/// Number types usable as polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Whether arithmetic in this type is free of rounding.
    const EXACT: bool;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer conversion") / Self::from_i64(den).expect("integer conversion")
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let mut p = a.clone();
        p *= b;
        *self += &p;
    }

    /// Sums a list of terms. Inexact types override this with a
    /// correctly rounded summation.
    fn sum_terms(terms: Vec<Self>) -> Self {
        let mut acc = Self::zero();
        for t in &terms {
            acc += t;
        }
        acc
    }

    /// Nearest value to `q` (exact for exact types).
    fn from_rational(q: &Rational) -> Self;

    fn to_real<F: Real>(&self, prec: Precision) -> F;
}

impl Coefficient for Rational {
    const EXACT: bool = true;

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        Rational::add_mul(self, a, b);
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_real<F: Real>(&self, prec: Precision) -> F {
        F::from_rational(self, prec)
    }
}

impl Coefficient for f64 {
    const EXACT: bool = false;

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn sum_terms(terms: Vec<Self>) -> Self {
        correctly_rounded_sum(&terms)
    }

    fn from_rational(q: &Rational) -> Self {
        q.inner().to_f64()
    }

    fn to_real<F: Real>(&self, prec: Precision) -> F {
        F::from_f64(*self, prec)
    }
}

impl Coefficient for f32 {
    const EXACT: bool = false;

    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn sum_terms(terms: Vec<Self>) -> Self {
        let wide: Vec<f64> = terms.iter().map(|&t| t as f64).collect();
        correctly_rounded_sum(&wide) as f32
    }

    fn from_rational(q: &Rational) -> Self {
        q.inner().to_f32()
    }

    fn to_real<F: Real>(&self, prec: Precision) -> F {
        F::from_f64(*self as f64, prec)
    }
}

/// Floating types the transcendental terms are evaluated in.
pub trait Real:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &Rational, prec: Precision) -> Self;
    fn from_f64(x: f64, prec: Precision) -> Self;
    fn zero(prec: Precision) -> Self {
        Self::from_f64(0.0, prec)
    }
    /// Unit roundoff of the type at `prec`.
    fn epsilon(prec: Precision) -> Self;
    fn pi(prec: Precision) -> Self;

    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn atan(self) -> Self;
    fn atanh(self) -> Self;
    fn abs(self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Sums `terms` in the given order. `f64` rounds the exact sum once.
    fn sum(terms: &[Self], prec: Precision) -> Self {
        let mut acc = Self::zero(prec);
        for t in terms {
            acc = acc + t.clone();
        }
        acc
    }
}

impl Real for Float {
    fn from_rational(q: &Rational, prec: Precision) -> Self {
        Float::with_val(prec.bits(), q.inner())
    }
    fn from_f64(x: f64, prec: Precision) -> Self {
        Float::with_val(prec.bits(), x)
    }
    fn epsilon(prec: Precision) -> Self {
        Float::with_val(prec.bits(), Float::i_exp(1, 1 - prec.bits() as i32))
    }
    fn pi(prec: Precision) -> Self {
        Float::with_val(prec.bits(), rug::float::Constant::Pi)
    }
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    fn ln(self) -> Self {
        Float::ln(self)
    }
    fn exp(self) -> Self {
        Float::exp(self)
    }
    fn atan(self) -> Self {
        Float::atan(self)
    }
    fn atanh(self) -> Self {
        Float::atanh(self)
    }
    fn abs(self) -> Self {
        Float::abs(self)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
}

impl Real for f64 {
    fn from_rational(q: &Rational, _prec: Precision) -> Self {
        q.inner().to_f64()
    }
    fn from_f64(x: f64, _prec: Precision) -> Self {
        x
    }
    fn epsilon(_prec: Precision) -> Self {
        f64::EPSILON
    }
    fn pi(_prec: Precision) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn atanh(self) -> Self {
        f64::atanh(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sum(terms: &[Self], _prec: Precision) -> Self {
        correctly_rounded_sum(terms)
    }
}

/// Formats `x` in positional decimal notation with exactly `digits`
/// significant digits (round to nearest, trailing zeros kept).
pub fn format_significant(x: &Float, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return if digits > 1 { format!("0.{}", "0".repeat(digits - 1)) } else { "0".into() };
    }
    let (neg, mant, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.expect("normal value");
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    if exp <= 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp) as usize));
        out.push_str(&mant);
    } else if exp as usize >= mant.len() {
        out.push_str(&mant);
        out.push_str(&"0".repeat(exp as usize - mant.len()));
    } else {
        out.push_str(&mant[..exp as usize]);
        out.push('.');
        out.push_str(&mant[exp as usize..]);
    }
    out
}

/// `x` as `d.ddd…e±N` with `digits` significant digits; zero is `"0"`.
pub fn format_scientific(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return format_significant(x, digits);
    }
    let (neg, mant, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.expect("normal value") - 1;
    let sign = if neg { "-" } else { "" };
    if mant.len() > 1 {
        format!("{sign}{}.{}e{exp}", &mant[..1], &mant[1..])
    } else {
        format!("{sign}{mant}e{exp}")
    }
}

/// The significant decimal digits of `x` rounded to `digits`, without sign,
/// decimal point, or exponent.
pub fn significant_digits(x: &Float, digits: usize) -> String {
    format_significant(x, digits)
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect::<String>()
        .trim_start_matches('0')
        .to_string()
}
