//! Definite double-box integrals of the Newton and logarithmic kernels by
//! corner evaluation of the antiderivatives, condition numbers, and Galerkin
//! interaction matrices in a Legendre basis.
//!
//! The definite integrals use the raw kernels `1/|x−y|` (3D) and
//! `ln|x−y|²` (2D). The physical constant `1/(4π)` enters only in the
//! interaction matrices.

mod grid_eval;
mod interactions;
mod legendre;

use std::fmt;
use std::str::FromStr;

use crate::antideriv2d::{integrate_box_kernel_2d, write_summands_2d, Antiderivative2};
use crate::antideriv3d::{integrate_box_kernel, write_summands_3d, Antiderivative3, EvalConfig};
use crate::error::{ParseError, Result};
use crate::exactmath::{BigFloat, Coefficient, MultiIndex, Precision, Rational, Real};

pub use interactions::{
    interaction_matrices, monomial_integrals, neighbour_offsets, pair_matrices, InteractionMatrixSet,
    MonomialIntegrals, OffsetMatrix,
};
pub use legendre::{basis_dimension, legendre_basis, shifted_legendre, BasisFunction, LegendreBasis};

/// Axis-aligned box `∏ [aᵢ, bᵢ]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cuboid<const D: usize> {
    intervals: [(Rational, Rational); D],
}

pub type Box3 = Cuboid<3>;
pub type Box2 = Cuboid<2>;

impl<const D: usize> Cuboid<D> {
    /// Panics if some `aᵢ > bᵢ`.
    pub fn new(intervals: [(Rational, Rational); D]) -> Self {
        for (a, b) in &intervals {
            assert!(a <= b, "box interval [{a}, {b}] is reversed");
        }
        Cuboid { intervals }
    }

    /// Box with integer endpoints.
    pub fn from_ints(intervals: [(i64, i64); D]) -> Self {
        Self::new(intervals.map(|(a, b)| (Rational::from_integer(a), Rational::from_integer(b))))
    }

    /// `[0,1]^D`.
    pub fn unit() -> Self {
        Self::from_ints([(0, 1); D])
    }

    pub fn intervals(&self) -> &[(Rational, Rational); D] {
        &self.intervals
    }

    pub fn lower(&self, axis: usize) -> &Rational {
        &self.intervals[axis].0
    }

    pub fn upper(&self, axis: usize) -> &Rational {
        &self.intervals[axis].1
    }

    pub fn is_degenerate(&self) -> bool {
        self.intervals.iter().any(|(a, b)| a == b)
    }

    pub fn translate(&self, t: &[Rational; D]) -> Self {
        Cuboid { intervals: std::array::from_fn(|i| (&self.intervals[i].0 + &t[i], &self.intervals[i].1 + &t[i])) }
    }

    pub fn scale(&self, h: &Rational) -> Self {
        Cuboid { intervals: std::array::from_fn(|i| (&self.intervals[i].0 * h, &self.intervals[i].1 * h)) }
    }
}

impl<const D: usize> fmt::Display for Cuboid<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{a},{b}")?;
        }
        Ok(())
    }
}

/// Parses `"a,b:c,d:e,f"`; endpoints are fractions or exact decimals.
impl<const D: usize> FromStr for Cuboid<D> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let err = || ParseError::Box(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != D {
            return Err(err());
        }
        let mut iv: Vec<(Rational, Rational)> = Vec::with_capacity(D);
        for p in parts {
            let (a, b) = p.split_once(',').ok_or_else(err)?;
            let a: Rational = a.trim().parse().map_err(|_| err())?;
            let b: Rational = b.trim().parse().map_err(|_| err())?;
            if a > b {
                return Err(err());
            }
            iv.push((a, b));
        }
        Ok(Cuboid { intervals: iv.try_into().map_err(|_| err())? })
    }
}

/// The corners of `Qx × Qy` in lexicographic order of the bit pattern
/// `(x₁ … x_D, y₁ … y_D)`, most significant bit first, bit 0 selecting the
/// lower limit. Each corner carries the sign `(−1)^(number of lower limits)`.
pub fn corners<const D: usize, const N: usize>(qy: &Cuboid<D>, qx: &Cuboid<D>) -> Vec<(bool, [Rational; N])> {
    assert_eq!(N, 2 * D);
    (0..1usize << N)
        .map(|s| {
            let mut lower = 0;
            let point = std::array::from_fn(|i| {
                let b = if i < D { &qx.intervals[i] } else { &qy.intervals[i - D] };
                if (s >> (N - 1 - i)) & 1 == 1 {
                    b.1.clone()
                } else {
                    lower += 1;
                    b.0.clone()
                }
            });
            (lower % 2 == 1, point)
        })
        .collect()
}

fn convert_point<T: Coefficient, const N: usize>(p: &[Rational; N]) -> [T; N] {
    std::array::from_fn(|i| T::from_rational(&p[i]))
}

/// All `8 × 64` signed summands of the corner sum of `f`, corner-major.
pub fn corner_summands_3d<T: Coefficient, F: Real>(
    f: &Antiderivative3<T>,
    qy: &Box3,
    qx: &Box3,
    cfg: &EvalConfig,
) -> Result<Vec<F>> {
    let mut out = Vec::with_capacity(512);
    for (negative, point) in corners::<3, 6>(qy, qx) {
        let s = write_summands_3d::<T, F>(f, &convert_point(&point), cfg)?;
        for v in s {
            out.push(if negative { -v } else { v });
        }
    }
    Ok(out)
}

/// Definite integral of the antiderivative `f` over `Qx × Qy`.
pub fn definite_integral_of<T: Coefficient, F: Real>(
    f: &Antiderivative3<T>,
    qy: &Box3,
    qx: &Box3,
    cfg: &EvalConfig,
) -> Result<F> {
    if qy.is_degenerate() || qx.is_degenerate() {
        return Ok(F::zero(cfg.precision));
    }
    let s = corner_summands_3d::<T, F>(f, qy, qx, cfg)?;
    Ok(F::sum(&s, cfg.precision))
}

/// `∫_Qx ∫_Qy x^λ y^μ / |x−y| dy dx` (no `1/(4π)`).
pub fn definite_integral_3d(
    lambda: MultiIndex<3>,
    mu: MultiIndex<3>,
    qy: &Box3,
    qx: &Box3,
    cfg: &EvalConfig,
) -> Result<BigFloat> {
    if qy.is_degenerate() || qx.is_degenerate() {
        return Ok(BigFloat::zero(cfg.precision));
    }
    let f: Antiderivative3<Rational> = integrate_box_kernel(lambda, mu);
    definite_integral_of(&f, qy, qx, cfg)
}

/// `∫_Qx ∫_Qy x^λ y^μ ln|x−y|² dy dx` (no `−1/(4π)`).
pub fn definite_integral_2d(
    lambda: MultiIndex<2>,
    mu: MultiIndex<2>,
    qy: &Box2,
    qx: &Box2,
    cfg: &EvalConfig,
) -> Result<BigFloat> {
    if qy.is_degenerate() || qx.is_degenerate() {
        return Ok(BigFloat::zero(cfg.precision));
    }
    let h: Antiderivative2<Rational> = integrate_box_kernel_2d(lambda, mu);
    definite_integral_2d_of(&h, qy, qx, cfg)
}

pub fn definite_integral_2d_of<T: Coefficient, F: Real>(
    h: &Antiderivative2<T>,
    qy: &Box2,
    qx: &Box2,
    cfg: &EvalConfig,
) -> Result<F> {
    if qy.is_degenerate() || qx.is_degenerate() {
        return Ok(F::zero(cfg.precision));
    }
    let mut terms = Vec::with_capacity(64);
    for (negative, point) in corners::<2, 4>(qy, qx) {
        let s = write_summands_2d::<T, F>(h, &convert_point(&point), cfg)?;
        for v in s {
            terms.push(if negative { -v } else { v });
        }
    }
    Ok(F::sum(&terms, cfg.precision))
}

/// Condition number `Σ|aₖ| / |Σaₖ|` of a list of summands; infinite when
/// the sum vanishes.
pub fn condition_of_sum<F: Real>(terms: &[F], prec: Precision) -> F {
    let abs: Vec<F> = terms.iter().map(|t| t.clone().abs()).collect();
    let num = F::sum(&abs, prec);
    let den = F::sum(terms, prec).abs();
    if den.is_zero() {
        return F::from_f64(f64::INFINITY, prec);
    }
    num / den
}

/// Condition number of the 512-summand corner sum for `x^λ y^μ / R`.
pub fn condition_number(
    lambda: MultiIndex<3>,
    mu: MultiIndex<3>,
    qy: &Box3,
    qx: &Box3,
    cfg: &EvalConfig,
) -> Result<BigFloat> {
    let f: Antiderivative3<Rational> = integrate_box_kernel(lambda, mu);
    let s = corner_summands_3d::<Rational, BigFloat>(&f, qy, qx, cfg)?;
    Ok(condition_of_sum(&s, cfg.precision))
}

/// The boxes of Hackbusch's cancellation example.
pub fn hackbusch_boxes() -> (Box3, Box3) {
    let qy = Box3::from_ints([(0, 1), (0, 100), (0, 1)]);
    let qx = Box3::from_ints([(0, 1), (0, 1), (0, 100)]);
    (qy, qx)
}

#[derive(Clone, Debug)]
pub struct HackbuschReport {
    pub value: BigFloat,
    pub kappa: BigFloat,
    /// Machine-double coefficients and evaluation with a correctly rounded
    /// sum of all summands.
    pub double_value: Option<f64>,
    /// The same in double precision with naive left-to-right summation.
    pub double_naive: Option<f64>,
}

/// `∫∫ 1/|x−y|` over the Hackbusch boxes with its condition number, and
/// optionally the machine-double computation.
pub fn hackbusch_example(cfg: &EvalConfig, double_mode: bool) -> Result<HackbuschReport> {
    let (qy, qx) = hackbusch_boxes();
    let zero = MultiIndex::ZERO;
    let f: Antiderivative3<Rational> = integrate_box_kernel(zero, zero);
    let s = corner_summands_3d::<Rational, BigFloat>(&f, &qy, &qx, cfg)?;
    let value = <BigFloat as Real>::sum(&s, cfg.precision);
    let kappa = condition_of_sum(&s, cfg.precision);
    let (double_value, double_naive) = if double_mode {
        let fd: Antiderivative3<f64> = integrate_box_kernel(zero, zero);
        let dcfg = EvalConfig::double();
        let sd = corner_summands_3d::<f64, f64>(&fd, &qy, &qx, &dcfg)?;
        (Some(f64::sum(&sd, dcfg.precision)), Some(crate::exactmath::sum::naive_sum(&sd)))
    } else {
        (None, None)
    };
    Ok(HackbuschReport { value, kappa, double_value, double_naive })
}
