//! The closed antiderivative family of the 3D Newton kernel,
//!
//! ```text
//! F = P₁/R + P₂R + P₃ atanh(X/R) + P₄ atanh(Y/R) + P₅ atanh(Z/R)
//!   + P₆ atan(XY/(ZR)) + P₇ atan(XZ/(YR)) + P₈ atan(YZ/(XR)),
//! ```
//!
//! with `X = x₁−y₁`, `Y = x₂−y₂`, `Z = x₃−y₃`, `R = √(X²+Y²+Z²)`, together
//! with exact integration in each of the six variables and evaluation.

mod eval;
mod integrate;

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::error::ParseError;
use crate::exactmath::{Coefficient, Polynomial};

pub(crate) use eval::Geometry;
pub use eval::{eval_3d, write_summands_3d, EvalConfig, SingularPolicy};
pub use integrate::{integrate_3d, integrate_box_kernel, integrate_box_kernel_in_order, Integrator3};

/// The eight transcendental factors of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term3 {
    InvR,
    R,
    AtanhX,
    AtanhY,
    AtanhZ,
    /// `atan(XY/(ZR))`
    AtanXY,
    /// `atan(XZ/(YR))`
    AtanXZ,
    /// `atan(YZ/(XR))`
    AtanYZ,
}

impl Term3 {
    pub const ALL: [Term3; 8] = [
        Term3::InvR,
        Term3::R,
        Term3::AtanhX,
        Term3::AtanhY,
        Term3::AtanhZ,
        Term3::AtanXY,
        Term3::AtanXZ,
        Term3::AtanYZ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Term3 {
        Self::ALL[i]
    }

    /// `atanh(D_axis / R)`.
    pub fn atanh(axis: usize) -> Term3 {
        Self::ALL[2 + axis]
    }

    /// The atan term whose argument has `D_axis` in the denominator.
    pub fn atan(denominator_axis: usize) -> Term3 {
        Self::ALL[7 - denominator_axis]
    }

    pub fn label(self) -> &'static str {
        match self {
            Term3::InvR => "P_Rinv",
            Term3::R => "P_R",
            Term3::AtanhX => "P_atanh_X",
            Term3::AtanhY => "P_atanh_Y",
            Term3::AtanhZ => "P_atanh_Z",
            Term3::AtanXY => "P_atan_XYoZ",
            Term3::AtanXZ => "P_atan_XZoY",
            Term3::AtanYZ => "P_atan_YZoX",
        }
    }

    /// Image under a permutation of the coordinate axes.
    pub(crate) fn permute_axes(self, perm: &[usize; 3]) -> Term3 {
        match self {
            Term3::InvR | Term3::R => self,
            Term3::AtanhX | Term3::AtanhY | Term3::AtanhZ => Term3::atanh(perm[self.index() - 2]),
            _ => Term3::atan(perm[7 - self.index()]),
        }
    }
}

/// One of the six integration variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var3 {
    X1,
    X2,
    X3,
    Y1,
    Y2,
    Y3,
}

impl Var3 {
    pub const ALL: [Var3; 6] = [Var3::X1, Var3::X2, Var3::X3, Var3::Y1, Var3::Y2, Var3::Y3];

    /// Position in the `(x₁, x₂, x₃, y₁, y₂, y₃)` layout.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn axis(self) -> usize {
        self.index() % 3
    }

    pub fn is_y(self) -> bool {
        self.index() >= 3
    }

    /// The variable on the other side of the same axis.
    pub fn partner(self) -> Var3 {
        Self::ALL[(self.index() + 3) % 6]
    }
}

impl fmt::Display for Var3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.axis() + 1;
        if self.is_y() {
            write!(f, "y{n}")
        } else {
            write!(f, "x{n}")
        }
    }
}

impl FromStr for Var3 {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Var3::ALL
            .into_iter()
            .find(|v| v.to_string() == s.trim())
            .ok_or_else(|| ParseError::Other(format!("unknown variable {s:?}")))
    }
}

/// A member of the family, stored as its eight polynomial weights.
#[derive(Clone, PartialEq)]
pub struct Antiderivative3<T: Coefficient> {
    weights: [Polynomial<T, 6>; 8],
}

impl<T: Coefficient> Antiderivative3<T> {
    pub fn zero() -> Self {
        Antiderivative3 { weights: std::array::from_fn(|_| Polynomial::zero()) }
    }

    /// `p · term`.
    pub fn single(term: Term3, p: Polynomial<T, 6>) -> Self {
        let mut f = Self::zero();
        f[term] = p;
        f
    }

    /// The integrand `p / R`.
    pub fn kernel(p: Polynomial<T, 6>) -> Self {
        Self::single(Term3::InvR, p)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Polynomial::is_zero)
    }

    pub fn weights(&self) -> &[Polynomial<T, 6>; 8] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (Term3, &Polynomial<T, 6>)> {
        Term3::ALL.into_iter().zip(self.weights.iter())
    }

    /// Total number of stored polynomial terms.
    pub fn term_count(&self) -> usize {
        self.weights.iter().map(Polynomial::len).sum()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Antiderivative3 { weights: std::array::from_fn(|i| self.weights[i].scale(c)) }
    }

    pub fn map_weights(&self, f: impl Fn(&Polynomial<T, 6>) -> Polynomial<T, 6>) -> Self {
        Antiderivative3 { weights: std::array::from_fn(|i| f(&self.weights[i])) }
    }

    pub fn map_coefficients<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Antiderivative3<U> {
        Antiderivative3 { weights: std::array::from_fn(|i| self.weights[i].map_coefficients(&f)) }
    }

    /// Replaces variable `var` by a constant in every weight.
    pub fn substitute(&self, var: Var3, value: &T) -> Self {
        self.map_weights(|p| p.substitute(var.index(), value))
    }
}

impl<T: Coefficient> Default for Antiderivative3<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Index<Term3> for Antiderivative3<T> {
    type Output = Polynomial<T, 6>;
    fn index(&self, t: Term3) -> &Polynomial<T, 6> {
        &self.weights[t.index()]
    }
}

impl<T: Coefficient> IndexMut<Term3> for Antiderivative3<T> {
    fn index_mut(&mut self, t: Term3) -> &mut Polynomial<T, 6> {
        &mut self.weights[t.index()]
    }
}

impl<T: Coefficient> fmt::Debug for Antiderivative3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_struct("Antiderivative3");
        for (t, p) in self.iter() {
            if !p.is_zero() {
                m.field(t.label(), p);
            }
        }
        m.finish()
    }
}

/// Eight labelled blocks, `[P_Rinv]` through `[P_atan_YZoX]`, each followed
/// by its polynomial in the line format of [`Polynomial`].
impl<T: Coefficient> fmt::Display for Antiderivative3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, p) in self.iter() {
            writeln!(f, "[{}]", t.label())?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl<T> FromStr for Antiderivative3<T>
where
    T: Coefficient + FromStr,
    T::Err: fmt::Display,
{
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let blocks = crate::textblocks::split_blocks(s, &Term3::ALL.map(Term3::label))?;
        let mut out = Self::zero();
        for (i, lines) in blocks.into_iter().enumerate() {
            out.weights[i] = Polynomial::parse_lines(lines)?;
        }
        Ok(out)
    }
}
