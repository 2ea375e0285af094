//! Analytic integration of the Newton potential of polynomials over
//! axis-aligned boxes, and a fast multipole Poisson solver whose near field
//! uses the exact integrals.
//!
//! The algebra is generic over the coefficient type ([`exactmath::Coefficient`])
//! and the evaluation type ([`exactmath::Real`]); the aliases below fix the
//! exact reference configuration.

pub mod antideriv2d;
pub mod antideriv3d;
pub mod boxquad;
pub mod error;
pub mod exactmath;
pub mod fmm;
pub mod quadrature;
mod textblocks;

pub use antideriv2d::{Antiderivative2, Term2, Var2};
pub use antideriv3d::{Antiderivative3, EvalConfig, SingularPolicy, Term3, Var3};
pub use error::{Error, ParseError, Result};
pub use exactmath::{BigFloat, MultiIndex, Polynomial, Precision, Rational};

/// The exact reference configuration of the 3D family.
pub type Antiderivative3Q = Antiderivative3<Rational>;
/// The exact reference configuration of the 2D family.
pub type Antiderivative2Q = Antiderivative2<Rational>;

/// Polynomial in `(x₁, x₂, x₃, y₁, y₂, y₃)`.
pub type Poly6<T = Rational> = Polynomial<T, 6>;
/// Polynomial in `(x₁, x₂, y₁, y₂)`.
pub type Poly4<T = Rational> = Polynomial<T, 4>;
pub type Idx6 = MultiIndex<6>;
pub type Idx4 = MultiIndex<4>;
pub type Idx3 = MultiIndex<3>;
pub type Idx2 = MultiIndex<2>;
