//! Exact rational numbers backed by GMP.
//!
//! [`Rational`] is a thin newtype around [`rug::Rational`] so that it can
//! implement the `num-traits` vocabulary used by the generic polynomial and
//! antiderivative code. Values are always kept in canonical form
//! (`gcd(num, den) = 1`, `den > 0`), so derived equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rug::Integer;

use crate::error::ParseError;

/// An exact rational number.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(rug::Rational);

impl Rational {
    /// Builds `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(rug::Rational::from(n))
    }

    pub fn inner(&self) -> &rug::Rational {
        &self.0
    }

    pub fn into_inner(self) -> rug::Rational {
        self.0
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn signum_i32(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// `self^e` for a non-negative integer exponent.
    pub fn pow(&self, e: u32) -> Rational {
        use rug::ops::Pow;
        Rational(rug::Rational::from((&self.0).pow(e)))
    }

    /// `self += a * b` without temporaries on the caller's side.
    pub fn add_mul(&mut self, a: &Rational, b: &Rational) {
        let prod = rug::Rational::from(&a.0 * &b.0);
        self.0 += prod;
    }

    /// Parses an exact decimal such as `-1.234`, `5`, `.5` or `2.5e-3`.
    fn parse_decimal(s: &str) -> Option<Rational> {
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.find('.') {
            Some(pos) => (&digits[..pos], &digits[pos + 1..]),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let all: String = int_part.chars().chain(frac_part.chars()).collect();
        let mut num = Integer::from_str_radix(&all, 10).ok()?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let pow10 = |e: u32| Integer::from(Integer::u_pow_u(10, e));
        let q = if scale >= 0 {
            rug::Rational::from(num * pow10(scale as u32))
        } else {
            rug::Rational::from((num, pow10((-scale) as u32)))
        };
        Some(Rational(q))
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Serialises as `num/den`; integers are written as `num/1`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Accepts `num/den`, plain integers, and exact decimals. Decimals are never
/// routed through binary floating point: `1.234` becomes `617/500`.
impl FromStr for Rational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseError::Rational(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let n = Integer::from_str_radix(n.trim(), 10).map_err(|_| bad())?;
            let d = Integer::from_str_radix(d.trim(), 10).map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Rational(rug::Rational::from((n, d))));
        }
        Rational::parse_decimal(t).ok_or_else(bad)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<rug::Rational> for Rational {
    fn from(q: rug::Rational) -> Self {
        Rational(q)
    }
}

impl From<Integer> for Rational {
    fn from(n: Integer) -> Self {
        Rational(rug::Rational::from(n))
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $AssignTrait:ident, $assign:ident) => {
        impl $Trait for Rational {
            type Output = Rational;
            fn $method(mut self, rhs: Rational) -> Rational {
                (self.0).$assign(rhs.0);
                self
            }
        }
        impl<'a> $Trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(mut self, rhs: &'a Rational) -> Rational {
                (self.0).$assign(&rhs.0);
                self
            }
        }
        impl<'a, 'b> $Trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational(rug::Rational::from((&self.0).$method(&rhs.0)))
            }
        }
        impl $AssignTrait for Rational {
            fn $assign(&mut self, rhs: Rational) {
                (self.0).$assign(rhs.0);
            }
        }
        impl<'a> $AssignTrait<&'a Rational> for Rational {
            fn $assign(&mut self, rhs: &'a Rational) {
                (self.0).$assign(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(rug::Rational::from(-&self.0))
    }
}

/// Rational division never leaves a remainder; `Rem` exists only to satisfy
/// `num_traits::Num` and returns `a - trunc(a / b) * b`.
impl Rem for Rational {
    type Output = Rational;
    fn rem(self, rhs: Rational) -> Rational {
        let q = rug::Rational::from(&self.0 / &rhs.0);
        let t = q.trunc();
        Rational(self.0 - t * rhs.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(rug::Rational::new())
    }
    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(rug::Rational::from(1))
    }
    fn is_one(&self) -> bool {
        *self.0.numer() == 1 && *self.0.denom() == 1
    }
}

impl Num for Rational {
    type FromStrRadixErr = ParseError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix == 10 {
            return s.parse();
        }
        let q = rug::Rational::from_str_radix(s, radix as i32).map_err(|_| ParseError::Rational(s.to_string()))?;
        Ok(Rational(q))
    }
}

impl Signed for Rational {
    fn abs(&self) -> Self {
        Rational(rug::Rational::from(self.0.abs_ref()))
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Rational::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Self {
        Rational::from_integer(self.signum_i32() as i64)
    }
    fn is_positive(&self) -> bool {
        self.0.cmp0() == Ordering::Greater
    }
    fn is_negative(&self) -> bool {
        self.0.cmp0() == Ordering::Less
    }
}

impl FromPrimitive for Rational {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Rational::from_integer(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Rational(rug::Rational::from(n)))
    }
    /// Exact conversion of the binary value.
    fn from_f64(x: f64) -> Option<Self> {
        rug::Rational::from_f64(x).map(Rational)
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
    fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.0.numer().to_u64()
        } else {
            None
        }
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.to_f64())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = Rational::new(6, -4);
        assert_eq!(a, Rational::new(-3, 2));
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(Rational::from_integer(7).to_string(), "7/1");
    }

    #[test]
    fn parse_fraction_and_decimal() {
        assert_eq!("1/3".parse::<Rational>().unwrap(), Rational::new(1, 3));
        assert_eq!("1.234".parse::<Rational>().unwrap(), Rational::new(1234, 1000));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert_eq!("100".parse::<Rational>().unwrap(), Rational::from_integer(100));
        assert_eq!("2.5e-3".parse::<Rational>().unwrap(), Rational::new(1, 400));
        assert_eq!("1e2".parse::<Rational>().unwrap(), Rational::from_integer(100));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn rem_matches_truncated_division() {
        let r = Rational::new(7, 2) % Rational::from_integer(1);
        assert_eq!(r, Rational::new(1, 2));
        let r = Rational::new(-7, 2) % Rational::from_integer(1);
        assert_eq!(r, Rational::new(-1, 2));
    }

    #[test]
    fn add_mul_accumulates() {
        let mut acc = Rational::new(1, 2);
        acc.add_mul(&Rational::new(1, 3), &Rational::new(3, 4));
        assert_eq!(acc, Rational::new(3, 4));
    }

    proptest::proptest! {
        #[test]
        fn display_round_trip(n in -1_000_000_000i64..1_000_000_000, d in 1i64..1_000_000) {
            let q = Rational::new(n, d);
            let back: Rational = q.to_string().parse().unwrap();
            proptest::prop_assert_eq!(back, q);
        }
    }
}
