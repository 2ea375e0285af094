//! Oracles shared by the integration tests. None of this code uses the
//! library's integration rules or evaluation routines.
#![allow(dead_code)]

use newtonquad::boxquad::{Box2, Box3};
use newtonquad::{Antiderivative2Q, Antiderivative3Q, MultiIndex, Polynomial, Rational, Term2, Term3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type P7 = Polynomial<Rational, 7>;
pub type P6 = Polynomial<Rational, 6>;
pub type P4 = Polynomial<Rational, 4>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

// ---------------------------------------------------------------------------
// Symbolic differentiation, 3D. Variables x1..x3, y1..y3 and R (index 6).

const R: usize = 6;

fn lift(p: &P6) -> P7 {
    let mut out = P7::zero();
    for (m, c) in p.terms() {
        let e = m.exponents();
        out.add_term(MultiIndex::new([e[0], e[1], e[2], e[3], e[4], e[5], 0]), c);
    }
    out
}

fn dd(a: usize) -> P7 {
    &P7::var(a) - &P7::var(a + 3)
}

fn sq_pair(a: usize, b: usize) -> P7 {
    &(&dd(a) * &dd(a)) + &(&dd(b) * &dd(b))
}

fn r_pow(k: u16) -> P7 {
    P7::monomial(q(1, 1), MultiIndex::unit(R).with(R, k))
}

fn c7(v: Rational) -> P7 {
    P7::constant(v)
}

/// Replaces `R²` by `X²+Y²+Z²`.
pub fn reduce(p: &P7) -> P7 {
    let s = &(&sq_pair(0, 1) + &(&dd(2) * &dd(2)));
    let mut powers = vec![P7::one()];
    let mut out = P7::zero();
    for (m, c) in p.terms() {
        let e = m[R];
        while powers.len() <= (e / 2) as usize {
            let next = powers.last().unwrap() * s;
            powers.push(next);
        }
        let base = P7::monomial(c.clone(), m.with(R, e % 2));
        out += &(&base * &powers[(e / 2) as usize]);
    }
    out
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// `∂g/∂ξ = num / (R^k · Π pairs)`; `pairs` indexes [`PAIRS`].
struct Derivative {
    num: P7,
    r: u16,
    pairs: Vec<usize>,
}

fn pair_id(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    PAIRS.iter().position(|&p| p == (a, b)).unwrap()
}

/// The derivative of each transcendental factor, written out by hand.
fn factor_derivative(term: Term3, var: usize) -> Derivative {
    let a = var % 3;
    let sigma = if var < 3 { q(1, 1) } else { q(-1, 1) };
    let s = |p: P7| p.scale(&sigma);
    let delta = |i: usize, j: usize| if i == j { P7::one() } else { P7::zero() };
    match term {
        Term3::InvR => Derivative { num: s(-dd(a)), r: 3, pairs: vec![] },
        Term3::R => Derivative { num: s(dd(a)), r: 1, pairs: vec![] },
        Term3::AtanhX | Term3::AtanhY | Term3::AtanhZ => {
            let b = match term {
                Term3::AtanhX => 0,
                Term3::AtanhY => 1,
                _ => 2,
            };
            if a == b {
                Derivative { num: s(P7::one()), r: 1, pairs: vec![] }
            } else {
                let c = 3 - a - b;
                Derivative { num: s(-(&dd(a) * &dd(b))), r: 1, pairs: vec![pair_id(a, c)] }
            }
        }
        Term3::AtanXY | Term3::AtanXZ | Term3::AtanYZ => {
            // atan(D_p D_q / (D_c R))
            let c = match term {
                Term3::AtanXY => 2,
                Term3::AtanXZ => 1,
                _ => 0,
            };
            let (p, qq) = match c {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let r2 = r_pow(2);
            let dn = s(&(&delta(a, p) * &dd(qq)) + &(&delta(a, qq) * &dd(p)));
            let first = &(&dn * &dd(c)) * &r2;
            let inner = &(&delta(a, c) * &r2) + &(&dd(c) * &dd(a));
            let second = s(&(&dd(p) * &dd(qq)) * &inner);
            Derivative { num: &first - &second, r: 1, pairs: vec![pair_id(p, c), pair_id(qq, c)] }
        }
    }
}

const TRANSCENDENTAL3: [Term3; 6] =
    [Term3::AtanhX, Term3::AtanhY, Term3::AtanhZ, Term3::AtanXY, Term3::AtanXZ, Term3::AtanYZ];

/// Checks `∂g/∂ξ = f` in the quotient ring.
pub fn check_derivative_3d(g: &Antiderivative3Q, f: &Antiderivative3Q, var: usize) -> Result<(), String> {
    if !g[Term3::InvR].is_zero() {
        return Err("P_Rinv of an integral is nonzero".into());
    }
    for t in TRANSCENDENTAL3 {
        if g[t].partial_derivative(var) != f[t] {
            return Err(format!("coefficient of {} differs", t.label()));
        }
    }
    // common denominator R³ · Π pairs
    let all_pairs = PAIRS.iter().fold(P7::one(), |acc, &(a, b)| &acc * &sq_pair(a, b));
    let mut e = P7::zero();
    // algebraic part of ∂g and of f, times the denominator
    let alg = |inv_r: &P6, r: &P6| -> P7 { &(&lift(inv_r) * &r_pow(2)) + &(&lift(r) * &r_pow(4)) };
    e += &(&alg(&g[Term3::InvR].partial_derivative(var), &g[Term3::R].partial_derivative(var)) * &all_pairs);
    e -= &(&alg(&f[Term3::InvR], &f[Term3::R]) * &all_pairs);
    for t in Term3::ALL {
        if g[t].is_zero() {
            continue;
        }
        let d = factor_derivative(t, var);
        let mut m = r_pow(3 - d.r);
        for (i, &(a, b)) in PAIRS.iter().enumerate() {
            if !d.pairs.contains(&i) {
                m = &m * &sq_pair(a, b);
            }
        }
        e += &(&(&lift(&g[t]) * &d.num) * &m);
    }
    let e = reduce(&e);
    if e.is_zero() {
        Ok(())
    } else {
        Err(format!("algebraic remainder has {} terms", e.len()))
    }
}

// ---------------------------------------------------------------------------
// Symbolic differentiation, 2D. Variables x1, x2, y1, y2.

fn dd2(a: usize) -> P4 {
    &P4::var(a) - &P4::var(a + 2)
}

pub fn check_derivative_2d(g: &Antiderivative2Q, f: &Antiderivative2Q, var: usize) -> Result<(), String> {
    for t in [Term2::Ln, Term2::AtanXoY, Term2::AtanYoX] {
        if g[t].partial_derivative(var) != f[t] {
            return Err(format!("coefficient of {} differs", t.label()));
        }
    }
    let a = var % 2;
    let sigma = if var < 2 { q(1, 1) } else { q(-1, 1) };
    let delta = |i: usize| if i == a { P4::one() } else { P4::zero() };
    let t2 = &(&dd2(0) * &dd2(0)) + &(&dd2(1) * &dd2(1));
    // numerators over X²+Y²
    let num = |t: Term2| -> P4 {
        match t {
            Term2::Ln => dd2(a).scale(&(sigma.clone() * q(2, 1))),
            Term2::AtanXoY => (&(&delta(0) * &dd2(1)) - &(&delta(1) * &dd2(0))).scale(&sigma),
            Term2::AtanYoX => (&(&delta(1) * &dd2(0)) - &(&delta(0) * &dd2(1))).scale(&sigma),
            Term2::Plain => P4::zero(),
        }
    };
    let mut e = &(&g[Term2::Plain].partial_derivative(var) - &f[Term2::Plain]) * &t2;
    for t in [Term2::Ln, Term2::AtanXoY, Term2::AtanYoX] {
        e += &(&g[t] * &num(t));
    }
    if e.is_zero() {
        Ok(())
    } else {
        Err(format!("algebraic remainder has {} terms", e.len()))
    }
}

// ---------------------------------------------------------------------------
// Random sparse inputs.

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=5);
    if n == 0 {
        q(1, d)
    } else {
        q(n, d)
    }
}

pub fn random_poly<const N: usize>(rng: &mut ChaCha8Rng, terms: usize, max_exp: u16) -> Polynomial<Rational, N> {
    let mut p = Polynomial::zero();
    while p.len() < terms {
        let mut m = MultiIndex::<N>::ZERO;
        for _ in 0..rng.gen_range(0..=2) {
            let v = rng.gen_range(0..N);
            m[v] = rng.gen_range(0..=max_exp);
        }
        p.add_term(m, &random_rational(rng));
    }
    p
}

pub fn random_antiderivative_3d(rng: &mut ChaCha8Rng) -> Antiderivative3Q {
    let mut f = Antiderivative3Q::zero();
    let k = rng.gen_range(1..=2);
    for _ in 0..k {
        let t = Term3::ALL[rng.gen_range(0..8)];
        let n = rng.gen_range(1..=2);
        f[t] = random_poly(rng, n, 2);
    }
    f
}

pub fn random_antiderivative_2d(rng: &mut ChaCha8Rng) -> Antiderivative2Q {
    let mut f = Antiderivative2Q::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let t = Term2::ALL[rng.gen_range(0..4)];
        let n = rng.gen_range(1..=2);
        f[t] = random_poly(rng, n, 2);
    }
    f
}

/// A rational point with all coordinate differences bounded away from zero.
pub fn random_point<const N: usize>(rng: &mut ChaCha8Rng) -> [Rational; N] {
    let half = N / 2;
    loop {
        let p: [Rational; N] = std::array::from_fn(|_| q(rng.gen_range(-40i64..=40), rng.gen_range(7i64..=13)));
        let ok = (0..half).all(|a| {
            let d = p[a].clone() - p[a + half].clone();
            d.inner().to_f64().abs() > 0.3
        });
        if ok {
            return p;
        }
    }
}

// ---------------------------------------------------------------------------
// Tensor Gauss quadrature of the kernels over separated boxes, in f64.

pub type Boxf<const D: usize> = [(f64, f64); D];

fn gauss_rule(n: usize, (a, b): (f64, f64)) -> Vec<(f64, f64)> {
    newtonquad::quadrature::gauss_legendre_unit(n).into_iter().map(|(t, w)| (a + (b - a) * t, (b - a) * w)).collect()
}

fn tensor_points<const D: usize>(n: usize, bx: &Boxf<D>) -> Vec<([f64; D], f64)> {
    let rules: Vec<Vec<(f64, f64)>> = bx.iter().map(|&iv| gauss_rule(n, iv)).collect();
    let mut out = vec![([0.0; D], 1.0)];
    for (axis, rule) in rules.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * rule.len());
        for (p, w) in &out {
            for (x, wx) in rule {
                let mut p = *p;
                p[axis] = *x;
                next.push((p, w * wx));
            }
        }
        out = next;
    }
    out
}

/// Exponent tuples of total degree `≤ d`.
pub fn exponents<const D: usize>(d: u16) -> Vec<[u16; D]> {
    let mut out = Vec::new();
    let mut e = [0u16; D];
    loop {
        if e.iter().sum::<u16>() <= d {
            out.push(e);
        }
        let mut i = 0;
        loop {
            if i == D {
                return out;
            }
            e[i] += 1;
            if e[i] <= d {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

fn monomial<const D: usize>(x: &[f64; D], e: &[u16; D]) -> f64 {
    x.iter().zip(e).map(|(x, &k)| x.powi(k as i32)).product()
}

/// `∫_Qx ∫_Qy x^λ y^μ k(x−y)` for all pairs `|λ|+|μ| ≤ max_degree`, with
/// `k = 1/|·|` in 3D and `ln|·|²` in 2D, at `n` points per axis.
pub fn tensor_moments<const D: usize>(
    n: usize,
    qy: &Boxf<D>,
    qx: &Boxf<D>,
    pairs: &[([u16; D], [u16; D])],
) -> Vec<f64> {
    let mus: Vec<[u16; D]> = exponents(3);
    let ys = tensor_points(n, qy);
    let xs = tensor_points(n, qx);
    let ypow: Vec<Vec<f64>> = ys.iter().map(|(y, w)| mus.iter().map(|m| w * monomial(y, m)).collect()).collect();
    let mut out = vec![0.0; pairs.len()];
    let mut inner = vec![0.0; mus.len()];
    for (x, wx) in &xs {
        inner.iter_mut().for_each(|v| *v = 0.0);
        for ((y, _), yp) in ys.iter().zip(&ypow) {
            let r2: f64 = (0..D).map(|a| (x[a] - y[a]).powi(2)).sum();
            let k = if D == 3 { 1.0 / r2.sqrt() } else { r2.ln() };
            for (s, v) in inner.iter_mut().zip(yp) {
                *s += k * v;
            }
        }
        for (o, (l, m)) in out.iter_mut().zip(pairs) {
            let j = mus.iter().position(|e| e == m).unwrap();
            *o += wx * monomial(x, l) * inner[j];
        }
    }
    out
}

/// Raises the point count until two successive refinements agree to `tol`
/// relative in every entry.
pub fn adaptive_moments<const D: usize>(
    qy: &Boxf<D>,
    qx: &Boxf<D>,
    pairs: &[([u16; D], [u16; D])],
    tol: f64,
) -> Vec<f64> {
    let mut n = 4;
    let mut prev = tensor_moments(n, qy, qx, pairs);
    loop {
        n += 2;
        let cur = tensor_moments(n, qy, qx, pairs);
        let agree = cur.iter().zip(&prev).all(|(a, b)| (a - b).abs() <= tol * a.abs());
        if agree || n >= 30 {
            assert!(agree, "tensor quadrature did not settle");
            return cur;
        }
        prev = cur;
    }
}

/// All `(λ, μ)` with `|λ|+|μ| ≤ d`.
pub fn exponent_pairs<const D: usize>(d: u16) -> Vec<([u16; D], [u16; D])> {
    let all = exponents::<D>(d);
    let mut out = Vec::new();
    for l in &all {
        for m in &all {
            if l.iter().sum::<u16>() + m.iter().sum::<u16>() <= d {
                out.push((*l, *m));
            }
        }
    }
    out
}

pub fn to_boxf<const D: usize>(b: &newtonquad::boxquad::Cuboid<D>) -> Boxf<D> {
    std::array::from_fn(|a| (b.lower(a).inner().to_f64(), b.upper(a).inner().to_f64()))
}

// ---------------------------------------------------------------------------
// Box geometries.

pub fn separated_pairs_3d() -> Vec<(Box3, Box3)> {
    let b = |s: &str| s.parse::<Box3>().unwrap();
    vec![
        (b("0,1:0,1:0,1"), b("2,3:0,1:0,1")),
        (b("0,1:0,1:0,1"), b("2,3:2,3:1/2,3/2")),
        (b("1/2,1:0,2:0,1/3"), b("0,1:3,4:1,2")),
    ]
}

pub fn separated_pairs_2d() -> Vec<(Box2, Box2)> {
    let b = |s: &str| s.parse::<Box2>().unwrap();
    vec![(b("0,1:0,1"), b("2,3:0,1")), (b("0,1:0,1"), b("2,3:2,3")), (b("1/2,1:0,2"), b("0,1:3,4"))]
}

pub fn touching_pairs() -> Vec<(&'static str, Box3, Box3)> {
    let unit = Box3::unit();
    let b = |s: &str| s.parse::<Box3>().unwrap();
    vec![
        ("identical", unit.clone(), unit.clone()),
        ("face", unit.clone(), b("1,2:0,1:0,1")),
        ("edge", unit.clone(), b("1,2:1,2:0,1")),
        ("vertex", unit.clone(), b("1,2:1,2:1,2")),
    ]
}
