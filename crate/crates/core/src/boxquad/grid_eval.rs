use crate::exactmath::{Polynomial, Rational};

/// Values of `p` at every point of the tensor grid `values[0] × … ×
/// values[N−1]`, indexed in mixed radix with variable 0 most significant.
///
/// Variables are eliminated one at a time in `order`, so each partial
/// substitution is shared by all later grid coordinates.
pub(crate) fn eval_on_grid<const N: usize>(
    p: &Polynomial<Rational, N>,
    values: &[Vec<Rational>; N],
    order: &[usize; N],
) -> Vec<Rational> {
    let mut strides = [0usize; N];
    let mut s = 1;
    for v in (0..N).rev() {
        strides[v] = s;
        s *= values[v].len();
    }
    let mut out = vec![Rational::default(); s];
    fill(p, values, order, &strides, 0, &mut out);
    out
}

fn fill<const N: usize>(
    p: &Polynomial<Rational, N>,
    values: &[Vec<Rational>; N],
    order: &[usize],
    strides: &[usize; N],
    base: usize,
    out: &mut [Rational],
) {
    if p.is_zero() {
        return;
    }
    match order.split_first() {
        None => {
            if let Some(c) = p.coeff(&crate::exactmath::MultiIndex::ZERO) {
                out[base] = c.clone();
            }
        }
        Some((&v, rest)) => {
            for (i, x) in values[v].iter().enumerate() {
                let q = p.substitute(v, x);
                fill(&q, values, rest, strides, base + i * strides[v], out);
            }
        }
    }
}
