//! The closed antiderivative family of the 2D logarithmic kernel,
//!
//! ```text
//! H = P₁ ln(X²+Y²) + P₂ atan(X/Y) + P₃ atan(Y/X) + P₄,
//! ```
//!
//! with `X = x₁−y₁`, `Y = x₂−y₂`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::antideriv3d::{EvalConfig, SingularPolicy};
use crate::error::{Error, ParseError, Result};
use crate::exactmath::{Coefficient, MultiIndex, Polynomial, Real};

type Poly4<T> = Polynomial<T, 4>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term2 {
    /// `ln(X²+Y²)`
    Ln,
    /// `atan(X/Y)`
    AtanXoY,
    /// `atan(Y/X)`
    AtanYoX,
    /// Stand-alone polynomial.
    Plain,
}

impl Term2 {
    pub const ALL: [Term2; 4] = [Term2::Ln, Term2::AtanXoY, Term2::AtanYoX, Term2::Plain];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Term2::Ln => "P_ln",
            Term2::AtanXoY => "P_atan_XoY",
            Term2::AtanYoX => "P_atan_YoX",
            Term2::Plain => "P_plain",
        }
    }

    fn swap_axes(self) -> Term2 {
        match self {
            Term2::AtanXoY => Term2::AtanYoX,
            Term2::AtanYoX => Term2::AtanXoY,
            t => t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var2 {
    X1,
    X2,
    Y1,
    Y2,
}

impl Var2 {
    pub const ALL: [Var2; 4] = [Var2::X1, Var2::X2, Var2::Y1, Var2::Y2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn axis(self) -> usize {
        self.index() % 2
    }

    pub fn is_y(self) -> bool {
        self.index() >= 2
    }

    pub fn partner(self) -> Var2 {
        Self::ALL[(self.index() + 2) % 4]
    }
}

impl fmt::Display for Var2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.axis() + 1;
        if self.is_y() {
            write!(f, "y{n}")
        } else {
            write!(f, "x{n}")
        }
    }
}

impl FromStr for Var2 {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Var2::ALL
            .into_iter()
            .find(|v| v.to_string() == s.trim())
            .ok_or_else(|| ParseError::Other(format!("unknown variable {s:?}")))
    }
}

#[derive(Clone, PartialEq)]
pub struct Antiderivative2<T: Coefficient> {
    weights: [Poly4<T>; 4],
}

impl<T: Coefficient> Antiderivative2<T> {
    pub fn zero() -> Self {
        Antiderivative2 { weights: std::array::from_fn(|_| Polynomial::zero()) }
    }

    pub fn single(term: Term2, p: Poly4<T>) -> Self {
        let mut h = Self::zero();
        h[term] = p;
        h
    }

    /// The integrand `p · ln(X²+Y²)`.
    pub fn kernel(p: Poly4<T>) -> Self {
        Self::single(Term2::Ln, p)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Polynomial::is_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Term2, &Poly4<T>)> {
        Term2::ALL.into_iter().zip(self.weights.iter())
    }

    pub fn term_count(&self) -> usize {
        self.weights.iter().map(Polynomial::len).sum()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Antiderivative2 { weights: std::array::from_fn(|i| self.weights[i].scale(c)) }
    }

    pub fn map_weights(&self, f: impl Fn(&Poly4<T>) -> Poly4<T>) -> Self {
        Antiderivative2 { weights: std::array::from_fn(|i| f(&self.weights[i])) }
    }
}

impl<T: Coefficient> Default for Antiderivative2<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Index<Term2> for Antiderivative2<T> {
    type Output = Poly4<T>;
    fn index(&self, t: Term2) -> &Poly4<T> {
        &self.weights[t.index()]
    }
}

impl<T: Coefficient> IndexMut<Term2> for Antiderivative2<T> {
    fn index_mut(&mut self, t: Term2) -> &mut Poly4<T> {
        &mut self.weights[t.index()]
    }
}

impl<T: Coefficient> fmt::Debug for Antiderivative2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_struct("Antiderivative2");
        for (t, p) in self.iter() {
            if !p.is_zero() {
                m.field(t.label(), p);
            }
        }
        m.finish()
    }
}

impl<T: Coefficient> fmt::Display for Antiderivative2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, p) in self.iter() {
            writeln!(f, "[{}]", t.label())?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl<T> FromStr for Antiderivative2<T>
where
    T: Coefficient + FromStr,
    T::Err: fmt::Display,
{
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let blocks = crate::textblocks::split_blocks(s, &Term2::ALL.map(Term2::label))?;
        let mut out = Self::zero();
        for (i, lines) in blocks.into_iter().enumerate() {
            out.weights[i] = Polynomial::parse_lines(lines)?;
        }
        Ok(out)
    }
}

/// `∫ g dD₀ = α·D₀·g + Σ c_h·h + p`, with `p` a polynomial that may depend
/// on `D₀`.
struct Rule<T: Coefficient> {
    alpha: T,
    rest: Vec<(Term2, Poly4<T>)>,
    plain: Poly4<T>,
}

fn difference<T: Coefficient>(axis: usize) -> Poly4<T> {
    &Poly4::var(axis) - &Poly4::var(axis + 2)
}

fn rule<T: Coefficient>(term: Term2, axis: usize) -> Rule<T> {
    let swap = axis == 1;
    let frame = |t: Term2| if swap { t.swap_axes() } else { t };
    let d0 = difference::<T>(axis);
    let d1 = difference::<T>(1 - axis);
    let (alpha, rest, plain) = match frame(term) {
        // X ln − 2X + 2Y atan(X/Y). The other branch, −2Y atan(Y/X), differs by
        // π|Y|·sign(X) and jumps at X = 0, which breaks the corner sum.
        Term2::Ln => (T::one(), vec![(Term2::AtanXoY, d1.scale(&T::ratio(2, 1)))], d0.scale(&T::ratio(-2, 1))),
        Term2::AtanXoY => (T::one(), vec![(Term2::Ln, d1.scale(&T::ratio(-1, 2)))], Poly4::zero()),
        Term2::AtanYoX => (T::one(), vec![(Term2::Ln, d1.scale(&T::ratio(1, 2)))], Poly4::zero()),
        Term2::Plain => unreachable!("plain weights are integrated directly"),
    };
    Rule { alpha, rest: rest.into_iter().map(|(h, c)| (frame(h), c)).collect(), plain }
}

/// Integrates members of the 2D family with cached monomial integrals.
pub struct Integrator2<T: Coefficient> {
    rules: [Vec<Rule<T>>; 4],
    memo: [HashMap<(Term2, u16), Antiderivative2<T>>; 4],
}

impl<T: Coefficient> Default for Integrator2<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Coefficient> Integrator2<T> {
    pub fn new() -> Self {
        Integrator2 {
            rules: std::array::from_fn(|v| Term2::ALL[..3].iter().map(|&g| rule(g, v % 2)).collect()),
            memo: std::array::from_fn(|_| HashMap::new()),
        }
    }

    fn ensure(&mut self, var: Var2, g: Term2, k: u16) {
        let v = var.index();
        if self.memo[v].contains_key(&(g, k)) {
            return;
        }
        if k > 0 {
            self.ensure(var, g, k - 1);
            let deps: Vec<Term2> = self.rules[v][g.index()].rest.iter().map(|(h, _)| *h).collect();
            for h in deps {
                self.ensure(var, h, k - 1);
            }
        }
        let value = self.compute(var, g, k);
        self.memo[v].insert((g, k), value);
    }

    /// `(1+kα) I_k(g) = σ t^k G_g + kα s I_{k−1}(g) − σk Σ c_h I_{k−1}(h) − σk ∫ t^{k−1} p dt`.
    fn compute(&self, var: Var2, g: Term2, k: u16) -> Antiderivative2<T> {
        let v = var.index();
        let rule = &self.rules[v][g.index()];
        let sigma = if var.is_y() { -T::one() } else { T::one() };
        let t_k = MultiIndex::<4>::ZERO.with(v, k);

        let mut out = Antiderivative2::zero();
        out[g].add_scaled(&difference(var.axis()), &(rule.alpha.clone() * sigma.clone()), t_k);
        for (h, c) in &rule.rest {
            out[*h].add_scaled(c, &sigma, t_k);
        }
        out[Term2::Plain].add_scaled(&rule.plain, &sigma, t_k);
        if k == 0 {
            return out;
        }

        let kt = T::from_u16(k).expect("exponent conversion");
        let memo = &self.memo[v];
        let prev = &memo[&(g, k - 1)];
        let s = MultiIndex::<4>::unit(var.partner().index());
        let scale = kt.clone() * rule.alpha.clone();
        for (term, p) in prev.iter() {
            out[term].add_scaled(p, &scale, s);
        }
        let scale = -(kt.clone() * sigma);
        for (h, c) in &rule.rest {
            for (term, p) in memo[&(*h, k - 1)].iter() {
                if !p.is_zero() {
                    out[term] += &(c * p).scale(&scale);
                }
            }
        }
        let shifted = rule.plain.mul_monomial(&T::one(), MultiIndex::ZERO.with(v, k - 1));
        out[Term2::Plain].add_scaled(&shifted.integrate(v), &scale, MultiIndex::ZERO);

        let inv = T::one() / (T::one() + kt * rule.alpha.clone());
        out.scale(&inv)
    }

    pub fn integrate(&mut self, h: &Antiderivative2<T>, var: Var2) -> Antiderivative2<T> {
        let v = var.index();
        for (g, p) in h.iter().take(3) {
            for k in p.terms().map(|(m, _)| m[v]).collect::<BTreeSet<_>>() {
                self.ensure(var, g, k);
            }
        }
        let memo = &self.memo[v];
        let mut out = Antiderivative2::zero();
        out[Term2::Plain] = h[Term2::Plain].integrate(v);
        for (g, p) in h.iter().take(3) {
            for (m, c) in p.terms() {
                let table = &memo[&(g, m[v])];
                let shift = m.with(v, 0);
                for (term, q) in table.iter() {
                    out[term].add_scaled(q, c, shift);
                }
            }
        }
        out
    }

    pub fn integrate_all(&mut self, h: &Antiderivative2<T>, order: &[Var2]) -> Antiderivative2<T> {
        let mut h = h.clone();
        for &v in order {
            h = self.integrate(&h, v);
        }
        h
    }
}

pub fn integrate_2d<T: Coefficient>(h: &Antiderivative2<T>, var: Var2) -> Antiderivative2<T> {
    Integrator2::new().integrate(h, var)
}

/// Four-fold antiderivative of `x^λ y^μ ln(X²+Y²)`, integrating `y₁, y₂,
/// x₁, x₂` in turn.
pub fn integrate_box_kernel_2d<T: Coefficient>(lambda: MultiIndex<2>, mu: MultiIndex<2>) -> Antiderivative2<T> {
    integrate_box_kernel_2d_in_order(lambda, mu, &[Var2::Y1, Var2::Y2, Var2::X1, Var2::X2])
}

pub fn integrate_box_kernel_2d_in_order<T: Coefficient>(
    lambda: MultiIndex<2>,
    mu: MultiIndex<2>,
    order: &[Var2],
) -> Antiderivative2<T> {
    let weight = Poly4::monomial(T::one(), MultiIndex::from_halves(&lambda.0, &mu.0));
    Integrator2::new().integrate_all(&Antiderivative2::kernel(weight), order)
}

fn factor<T: Coefficient, F: Real>(term: Term2, d: &[T; 2], cfg: &EvalConfig) -> Result<F> {
    let prec = cfg.precision;
    let singular = || Error::SingularTerm { term: term.label() };
    let df: [F; 2] = [d[0].to_real(prec), d[1].to_real(prec)];
    match term {
        Term2::Plain => Ok(F::from_f64(1.0, prec)),
        Term2::Ln => {
            let r2 = d[0].clone() * d[0].clone() + d[1].clone() * d[1].clone();
            if r2.is_zero() {
                return Err(singular());
            }
            Ok(r2.to_real::<F>(prec).ln())
        }
        Term2::AtanXoY | Term2::AtanYoX => {
            let (num, den) = if term == Term2::AtanXoY { (0, 1) } else { (1, 0) };
            if d[den].is_zero() {
                return match cfg.policy {
                    SingularPolicy::ExactSkip => Err(singular()),
                    SingularPolicy::EpsGuard { .. } => {
                        let zero = F::zero(prec);
                        let half_pi = F::pi(prec) / F::from_f64(2.0, prec);
                        Ok(if df[num] > zero {
                            half_pi
                        } else if df[num] < zero {
                            -half_pi
                        } else {
                            zero
                        })
                    }
                };
            }
            Ok((df[num].clone() / df[den].clone()).atan())
        }
    }
}

/// The four weighted terms of `h` at `point = (x₁,x₂,y₁,y₂)`, in
/// [`Term2::ALL`] order.
pub fn write_summands_2d<T: Coefficient, F: Real>(
    h: &Antiderivative2<T>,
    point: &[T; 4],
    cfg: &EvalConfig,
) -> Result<[F; 4]> {
    let d = [point[0].clone() - point[2].clone(), point[1].clone() - point[3].clone()];
    let mut out: [F; 4] = std::array::from_fn(|_| F::zero(cfg.precision));
    for (term, p) in h.iter() {
        let w = p.eval(point);
        if w.is_zero() {
            continue;
        }
        out[term.index()] = w.to_real::<F>(cfg.precision) * factor::<T, F>(term, &d, cfg)?;
    }
    Ok(out)
}

pub fn eval_2d<T: Coefficient, F: Real>(h: &Antiderivative2<T>, point: &[T; 4], cfg: &EvalConfig) -> Result<F> {
    let s = write_summands_2d::<T, F>(h, point, cfg)?;
    Ok(F::sum(&s, cfg.precision))
}
