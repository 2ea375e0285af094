//! Gauss–Legendre rules on the unit interval and their tensor products.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// `n`-point Gauss–Legendre rule on `[0, 1]` as `(node, weight)` pairs in
/// increasing node order; exact for polynomials of degree `2n − 1`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one quadrature point"));
    let mut pts: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

/// Tensor rule on `[0, 1]³` with `n` points per axis.
pub fn gauss_legendre_cube(n: usize) -> Vec<([f64; 3], f64)> {
    let g = gauss_legendre_unit(n);
    let mut out = Vec::with_capacity(n * n * n);
    for &(a, wa) in &g {
        for &(b, wb) in &g {
            for &(c, wc) in &g {
                out.push(([a, b, c], wa * wb * wc));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..12 {
            let g = gauss_legendre_unit(n);
            for k in 0..2 * n as i32 {
                let s: f64 = g.iter().map(|(x, w)| w * x.powi(k)).sum();
                assert!((s - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }
}
