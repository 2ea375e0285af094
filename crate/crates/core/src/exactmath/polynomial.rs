use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::multi_index::MultiIndex;
use super::scalar::Coefficient;
use crate::error::ParseError;

/// Sparse multivariate polynomial in `N` variables.
///
/// Terms are kept in a map ordered lexicographically by exponent, and zero
/// coefficients are never stored, so two polynomials are equal exactly when
/// their term maps are equal.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T, const N: usize> {
    terms: BTreeMap<MultiIndex<N>, T>,
}

/// Name of variable `i` in text form: `x1.. y1..` when `N` is even,
/// `v1..` otherwise.
pub fn variable_name<const N: usize>(i: usize) -> String {
    if N % 2 == 0 {
        if i < N / 2 {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - N / 2 + 1)
        }
    } else {
        format!("v{}", i + 1)
    }
}

impl<T: Coefficient, const N: usize> Polynomial<T, N> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, MultiIndex::ZERO)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn monomial(c: T, idx: MultiIndex<N>) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(idx, c);
        }
        p
    }

    /// The polynomial `v_i`.
    pub fn var(i: usize) -> Self {
        Self::monomial(T::one(), MultiIndex::unit(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, MultiIndex<N>, T> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex<N>) -> Option<&T> {
        self.terms.get(idx)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn max_exponent(&self, var: usize) -> u16 {
        self.terms.keys().map(|k| k[var]).max().unwrap_or(0)
    }

    /// `self += c · x^idx`.
    pub fn add_term(&mut self, idx: MultiIndex<N>, c: &T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += a · b · x^idx`.
    fn add_term_product(&mut self, idx: MultiIndex<N>, a: &T, b: &T) {
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                let mut p = a.clone();
                p *= b;
                if !p.is_zero() {
                    v.insert(p);
                }
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_mul(a, b);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale · x^shift · other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &T, shift: MultiIndex<N>) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term_product(*k + shift, c, scale);
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c, MultiIndex::ZERO);
        out
    }

    /// `c · x^shift · self`.
    pub fn mul_monomial(&self, c: &T, shift: MultiIndex<N>) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c, shift);
        out
    }

    /// Evaluates at `point` without rounding when `T` is exact. For inexact
    /// `T` the terms are combined with [`Coefficient::sum_terms`].
    pub fn eval(&self, point: &[T; N]) -> T {
        if self.terms.is_empty() {
            return T::zero();
        }
        let powers: Vec<Vec<T>> = (0..N)
            .map(|v| {
                let m = self.max_exponent(v) as usize;
                let mut pw = Vec::with_capacity(m + 1);
                pw.push(T::one());
                for e in 1..=m {
                    let next = pw[e - 1].clone() * point[v].clone();
                    pw.push(next);
                }
                pw
            })
            .collect();
        let term = |k: &MultiIndex<N>, c: &T| {
            let mut t = c.clone();
            for v in 0..N {
                if k[v] > 0 {
                    t *= &powers[v][k[v] as usize];
                }
            }
            t
        };
        if T::EXACT {
            let mut acc = T::zero();
            for (k, c) in &self.terms {
                acc += &term(k, c);
            }
            acc
        } else {
            T::sum_terms(self.terms.iter().map(|(k, c)| term(k, c)).collect())
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let e = k[var];
            if e == 0 {
                continue;
            }
            let f = T::from_u16(e).expect("exponent conversion");
            let mut d = c.clone();
            d *= &f;
            out.terms.insert(k.with(var, e - 1), d);
        }
        out
    }

    /// Formal antiderivative in `var` with zero constant of integration.
    pub fn integrate(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let e = k[var] + 1;
            let f = T::from_u16(e).expect("exponent conversion");
            let mut d = c.clone();
            d /= &f;
            out.terms.insert(k.with(var, e), d);
        }
        out
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn substitute(&self, var: usize, value: &T) -> Self {
        let mut out = Self::zero();
        let mut cache: Vec<T> = vec![T::one()];
        for (k, c) in &self.terms {
            let e = k[var] as usize;
            while cache.len() <= e {
                let next = cache[cache.len() - 1].clone() * value.clone();
                cache.push(next);
            }
            out.add_term_product(k.with(var, 0), c, &cache[e]);
        }
        out
    }

    /// Replaces every variable `v` by `images[v]`.
    pub fn compose(&self, images: &[Self; N]) -> Self {
        let mut out = Self::zero();
        let mut powers: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::one(), p.clone()]).collect();
        for (k, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for v in 0..N {
                let e = k[v] as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][e];
            }
            out += &t;
        }
        out
    }

    pub fn map_coefficients<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Polynomial<U, N> {
        let mut out = Polynomial::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }

    /// Moves variables through `perm`: variable `v` of `self` becomes
    /// variable `perm[v]` of the result.
    pub fn permute_variables(&self, perm: &[usize; N]) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut e = [0u16; N];
            for v in 0..N {
                e[perm[v]] = k[v];
            }
            out.terms.insert(MultiIndex(e), c.clone());
        }
        out
    }
}

impl<T: Coefficient, const N: usize> Default for Polynomial<T, N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient, const N: usize> AddAssign<&Polynomial<T, N>> for Polynomial<T, N> {
    fn add_assign(&mut self, rhs: &Self) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl<T: Coefficient, const N: usize> SubAssign<&Polynomial<T, N>> for Polynomial<T, N> {
    fn sub_assign(&mut self, rhs: &Self) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c.clone());
        }
    }
}

impl<T: Coefficient, const N: usize> Add for &Polynomial<T, N> {
    type Output = Polynomial<T, N>;
    fn add(self, rhs: Self) -> Polynomial<T, N> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Coefficient, const N: usize> Add for Polynomial<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<T: Coefficient, const N: usize> Sub for &Polynomial<T, N> {
    type Output = Polynomial<T, N>;
    fn sub(self, rhs: Self) -> Polynomial<T, N> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Coefficient, const N: usize> Sub for Polynomial<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<T: Coefficient, const N: usize> Neg for &Polynomial<T, N> {
    type Output = Polynomial<T, N>;
    fn neg(self) -> Polynomial<T, N> {
        Polynomial { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl<T: Coefficient, const N: usize> Neg for Polynomial<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

impl<T: Coefficient, const N: usize> Mul for &Polynomial<T, N> {
    type Output = Polynomial<T, N>;
    fn mul(self, rhs: Self) -> Polynomial<T, N> {
        let mut out = Polynomial::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term_product(*ka + *kb, ca, cb);
            }
        }
        out
    }
}

impl<T: Coefficient, const N: usize> Mul for Polynomial<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Scalar multiple.
impl<T: Coefficient, const N: usize> Mul<&T> for &Polynomial<T, N> {
    type Output = Polynomial<T, N>;
    fn mul(self, rhs: &T) -> Polynomial<T, N> {
        self.scale(rhs)
    }
}

impl<T: Coefficient, const N: usize> Zero for Polynomial<T, N> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Coefficient, const N: usize> One for Polynomial<T, N> {
    fn one() -> Self {
        Polynomial::one()
    }
}

impl<T: Coefficient, const N: usize> From<T> for Polynomial<T, N> {
    fn from(c: T) -> Self {
        Self::constant(c)
    }
}

impl<T: Coefficient, const N: usize> fmt::Debug for Polynomial<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for v in 0..N {
                match k[v] {
                    0 => {}
                    1 => write!(f, "*{}", variable_name::<N>(v))?,
                    e => write!(f, "*{}^{}", variable_name::<N>(v), e)?,
                }
            }
        }
        Ok(())
    }
}

/// One term per line, `coeff * x1^a y2^b`, in lexicographic exponent order.
/// A constant term is written as the bare coefficient. The zero polynomial
/// is the empty string.
impl<T: Coefficient, const N: usize> fmt::Display for Polynomial<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in &self.terms {
            write!(f, "{c}")?;
            let mut sep = " * ";
            for v in 0..N {
                if k[v] > 0 {
                    write!(f, "{sep}{}^{}", variable_name::<N>(v), k[v])?;
                    sep = " ";
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<T, const N: usize> Polynomial<T, N>
where
    T: Coefficient + FromStr,
    T::Err: fmt::Display,
{
    /// Parses the text written by `Display`. Blank lines are ignored.
    pub fn parse_lines<'a>(lines: impl IntoIterator<Item = (usize, &'a str)>) -> Result<Self, ParseError> {
        let names: Vec<String> = (0..N).map(variable_name::<N>).collect();
        let mut out = Self::zero();
        for (lineno, raw) in lines {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| ParseError::Polynomial { line: lineno, message };
            let (coeff, mono) = match line.split_once(" * ") {
                Some((c, m)) => (c.trim(), m.trim()),
                None => (line, ""),
            };
            let c: T = coeff.parse().map_err(|e: T::Err| bad(format!("coefficient {coeff:?}: {e}")))?;
            let mut idx = MultiIndex::<N>::ZERO;
            for factor in mono.split_whitespace() {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u16>().map_err(|_| bad(format!("exponent in {factor:?}")))?),
                    None => (factor, 1),
                };
                let v =
                    names.iter().position(|n| n == name).ok_or_else(|| bad(format!("unknown variable {name:?}")))?;
                idx[v] += exp;
            }
            out.add_term(idx, &c);
        }
        Ok(out)
    }
}

impl<T, const N: usize> FromStr for Polynomial<T, N>
where
    T: Coefficient + FromStr,
    T::Err: fmt::Display,
{
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Self::parse_lines(s.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}
