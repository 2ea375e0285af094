//! Correctly rounded floating-point summation.
//!
//! Shewchuk's non-overlapping partials: the running sum is kept as an exact
//! expansion of `f64` values, and only the final result is rounded once, with
//! the half-way correction used by Python's `math.fsum`. This is used for
//! machine-precision evaluation, where the sums of antiderivative terms can
//! be badly conditioned.

/// Exact two-sum: `a + b = s + e` with `s = fl(a + b)`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bp = s - a;
    let e = (a - (s - bp)) + (b - bp);
    (s, e)
}

/// Sum of `values`, rounded to nearest from the exact real sum.
/// Non-finite inputs fall back to the plain IEEE sum.
pub fn correctly_rounded_sum(values: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::with_capacity(8);
    for &v in values {
        if !v.is_finite() {
            return values.iter().sum();
        }
        let mut x = v;
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let (hi, lo) = two_sum(x, y);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }

    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        n -= 1;
        let x = hi;
        let y = partials[n];
        let (s, e) = two_sum(x, y);
        hi = s;
        lo = e;
        if lo != 0.0 {
            break;
        }
    }
    // Round half-even across the remaining partials.
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Sum in the order given, with no compensation.
pub fn naive_sum(values: &[f64]) -> f64 {
    values.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_exactly() {
        let v = [1e100, 1.0, -1e100];
        assert_eq!(correctly_rounded_sum(&v), 1.0);
        assert_eq!(naive_sum(&v), 0.0);
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(correctly_rounded_sum(&[]), 0.0);
        assert_eq!(correctly_rounded_sum(&[3.5]), 3.5);
    }

    #[test]
    fn tenths() {
        let v = vec![0.1; 10];
        assert_eq!(correctly_rounded_sum(&v), 1.0);
    }

    #[test]
    fn matches_exact_rational_sum() {
        use crate::exactmath::Rational;
        use num_traits::FromPrimitive;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let v: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-20..20))).collect();
            let exact: Rational = v.iter().map(|&x| Rational::from_f64(x).unwrap()).sum();
            let s = correctly_rounded_sum(&v);
            // Correct rounding: no double is closer to the exact sum.
            let err = (Rational::from_f64(s).unwrap() - &exact).inner().to_f64().abs();
            let ulp = f64::EPSILON * s.abs().max(f64::MIN_POSITIVE);
            assert!(err <= 0.5 * ulp + f64::MIN_POSITIVE, "{err} > {ulp}");
        }
    }
}
