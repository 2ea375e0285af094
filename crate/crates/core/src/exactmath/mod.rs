//! Exact rationals, configurable-precision floats, multi-indices and sparse
//! multivariate polynomials.

mod multi_index;
mod polynomial;
mod rational;
mod scalar;
pub mod sum;

pub use multi_index::MultiIndex;
pub use polynomial::{variable_name, Polynomial};
pub use rational::Rational;
pub use scalar::{format_scientific, format_significant, significant_digits, BigFloat, Coefficient, Precision, Real};
