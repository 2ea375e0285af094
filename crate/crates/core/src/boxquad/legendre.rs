use rug::Integer;

use crate::exactmath::{BigFloat, MultiIndex, Polynomial, Precision, Rational, Real};

/// Shifted Legendre polynomial `P_a(2t − 1)` with integer coefficients.
pub fn shifted_legendre(a: u16) -> Polynomial<Rational, 1> {
    // P_a(2t−1) = (−1)^a Σ_k C(a,k) C(a+k,k) (−t)^k
    let mut p = Polynomial::zero();
    for k in 0..=a as u32 {
        let c = Integer::from(Integer::binomial_u(a as u32, k)) * Integer::from(Integer::binomial_u(a as u32 + k, k));
        let sign = if (a as u32 + k) % 2 == 0 { 1 } else { -1 };
        p.add_term(MultiIndex([k as u16]), &Rational::from(c * sign));
    }
    p
}

/// `√((2a+1)(2b+1)(2c+1)) · P_a(2ξ₁−1) P_b(2ξ₂−1) P_c(2ξ₃−1)` on `[0,1]³`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction {
    pub degrees: [u16; 3],
    /// The product of shifted Legendre polynomials, without normalisation.
    pub poly: Polynomial<Rational, 3>,
    /// Square of the normalisation factor.
    pub norm_squared: u64,
}

impl BasisFunction {
    fn new(degrees: [u16; 3]) -> Self {
        let factors = degrees.map(shifted_legendre);
        let mut poly = Polynomial::<Rational, 3>::one();
        for (axis, f) in factors.iter().enumerate() {
            let mut lifted = Polynomial::zero();
            for (k, c) in f.terms() {
                lifted.add_term(MultiIndex::<3>::ZERO.with(axis, k[0]), c);
            }
            poly = &poly * &lifted;
        }
        let norm_squared = degrees.iter().map(|&d| 2 * d as u64 + 1).product();
        BasisFunction { degrees, poly, norm_squared }
    }

    pub fn degree(&self) -> u16 {
        self.degrees.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_squared as f64).sqrt()
    }

    pub fn norm_big(&self, prec: Precision) -> BigFloat {
        BigFloat::from_f64(self.norm_squared as f64, prec).sqrt()
    }

    /// Value at a point of the reference cell.
    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        let v: f64 = (0..3).map(|a| legendre_shifted_f64(self.degrees[a], xi[a])).product();
        self.norm() * v
    }
}

/// `P_a(2t−1)` by the three-term recurrence.
pub(crate) fn legendre_shifted_f64(a: u16, t: f64) -> f64 {
    let x = 2.0 * t - 1.0;
    let (mut p0, mut p1) = (1.0, x);
    if a == 0 {
        return 1.0;
    }
    for n in 1..a as u32 {
        let n = n as f64;
        let p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Orthonormal basis of polynomials of total degree `≤ n−1` on `[0,1]³`.
///
/// Functions are ordered by total degree, then by descending exponent tuple,
/// so the basis of order `n` is a prefix of the basis of any higher order.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreBasis {
    pub order: usize,
    pub functions: Vec<BasisFunction>,
}

impl LegendreBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// All basis values at `xi`.
    pub fn eval(&self, xi: [f64; 3]) -> Vec<f64> {
        let p: Vec<[f64; 3]> =
            (0..self.order).map(|a| std::array::from_fn(|axis| legendre_shifted_f64(a as u16, xi[axis]))).collect();
        self.functions
            .iter()
            .map(|f| f.norm() * p[f.degrees[0] as usize][0] * p[f.degrees[1] as usize][1] * p[f.degrees[2] as usize][2])
            .collect()
    }
}

/// Exponent triples of total degree `≤ max_degree` in graded order.
pub(crate) fn graded_triples(max_degree: u16) -> Vec<[u16; 3]> {
    let mut v = Vec::new();
    for d in 0..=max_degree {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                v.push([a, b, d - a - b]);
            }
        }
    }
    v
}

/// Dimension `C(n+2, 3)`.
pub fn basis_dimension(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

/// Panics if `n == 0`.
pub fn legendre_basis(n: usize) -> LegendreBasis {
    assert!(n >= 1, "basis order must be at least 1");
    let functions = graded_triples(n as u16 - 1).into_iter().map(BasisFunction::new).collect();
    LegendreBasis { order: n, functions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre_cube;

    #[test]
    fn dimensions() {
        assert_eq!(legendre_basis(1).dim(), 1);
        assert_eq!(legendre_basis(4).dim(), 20);
        assert_eq!(legendre_basis(6).dim(), 56);
        for n in 1..8 {
            assert_eq!(legendre_basis(n).dim(), basis_dimension(n));
        }
    }

    #[test]
    fn constant_function() {
        let b = legendre_basis(1);
        assert_eq!(b.functions[0].eval([0.3, 0.9, 0.1]), 1.0);
    }

    #[test]
    fn low_order_shifted_legendre() {
        let p2 = shifted_legendre(2);
        // 6t² − 6t + 1
        let expect: Polynomial<Rational, 1> = "1/1\n-6/1 * x1^1\n6/1 * x1^2\n".replace("x1", "v1").parse().unwrap();
        assert_eq!(p2, expect);
    }

    #[test]
    fn prefix_property() {
        let small = legendre_basis(4);
        let big = legendre_basis(6);
        assert_eq!(&big.functions[..small.dim()], &small.functions[..]);
    }

    #[test]
    fn gram_matrix_is_identity() {
        for n in 1..=6 {
            let b = legendre_basis(n);
            let q = gauss_legendre_cube(n);
            let mut g = vec![0.0; b.dim() * b.dim()];
            for (x, w) in &q {
                let v = b.eval(*x);
                for i in 0..b.dim() {
                    for j in 0..b.dim() {
                        g[i * b.dim() + j] += w * v[i] * v[j];
                    }
                }
            }
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((g[i * b.dim() + j] - e).abs() < 1e-14, "n={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn exact_polynomial_matches_recurrence() {
        let b = legendre_basis(5);
        let x = [0.2, 0.7, 0.45];
        let xr = x.map(|v| <Rational as num_traits::FromPrimitive>::from_f64(v).unwrap());
        for f in &b.functions {
            let exact = f.poly.eval(&xr).inner().to_f64() * f.norm();
            assert!((exact - f.eval(x)).abs() < 1e-12);
        }
    }
}
