use std::fmt;
use std::ops::{Add, Index, IndexMut};
use std::str::FromStr;

use crate::error::ParseError;

/// Exponent tuple of a monomial in `N` variables.
///
/// For the 3D kernel `N = 6` with layout `(λ₁, λ₂, λ₃, μ₁, μ₂, μ₃)`: the
/// first half addresses the `x` variables and the second half the `y`
/// variables. Ordering is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex<const N: usize>(pub [u16; N]);

impl<const N: usize> MultiIndex<N> {
    pub const ZERO: Self = MultiIndex([0; N]);

    pub fn new(exponents: [u16; N]) -> Self {
        MultiIndex(exponents)
    }

    /// The index with a single 1 in position `var`.
    pub fn unit(var: usize) -> Self {
        let mut e = [0; N];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponents(&self) -> &[u16; N] {
        &self.0
    }

    /// Copy with exponent `var` replaced by `value`.
    pub fn with(mut self, var: usize, value: u16) -> Self {
        self.0[var] = value;
        self
    }

    /// Joins an `x` part and a `y` part of equal length `N / 2`.
    pub fn from_halves(x: &[u16], y: &[u16]) -> Self {
        assert!(x.len() == N / 2 && y.len() == N / 2 && N % 2 == 0);
        let mut e = [0; N];
        e[..N / 2].copy_from_slice(x);
        e[N / 2..].copy_from_slice(y);
        MultiIndex(e)
    }
}

impl<const N: usize> Default for MultiIndex<N> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const N: usize> Add for MultiIndex<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Index<usize> for MultiIndex<N> {
    type Output = u16;
    fn index(&self, i: usize) -> &u16 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for MultiIndex<N> {
    fn index_mut(&mut self, i: usize) -> &mut u16 {
        &mut self.0[i]
    }
}

impl<const N: usize> From<[u16; N]> for MultiIndex<N> {
    fn from(e: [u16; N]) -> Self {
        MultiIndex(e)
    }
}

impl<const N: usize> fmt::Debug for MultiIndex<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<const N: usize> fmt::Display for MultiIndex<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `"1,0,3"` or `"(1,0,3)"`.
impl<const N: usize> FromStr for MultiIndex<N> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let err = || ParseError::MultiIndex(s.to_string());
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != N {
            return Err(err());
        }
        let mut e = [0u16; N];
        for (slot, p) in e.iter_mut().zip(parts) {
            *slot = p.parse().map_err(|_| err())?;
        }
        Ok(MultiIndex(e))
    }
}
