use std::collections::HashMap;

use super::{Antiderivative3, Term3, Var3};
use crate::exactmath::{Coefficient, MultiIndex, Polynomial};

type Poly6<T> = Polynomial<T, 6>;

/// `∫ g dD₀ = α·D₀·g + Σ c_h·h`, where `D₀` is the coordinate difference
/// along the integration axis and the `c_h` do not depend on it.
struct Rule<T: Coefficient> {
    alpha: T,
    rest: Vec<(Term3, Poly6<T>)>,
}

fn difference<T: Coefficient>(axis: usize) -> Poly6<T> {
    &Poly6::var(axis) - &Poly6::var(axis + 3)
}

/// Basic integral of `term` along `axis`, obtained from the `x₁` table by
/// exchanging axis 0 with `axis`.
fn rule<T: Coefficient>(term: Term3, axis: usize) -> Rule<T> {
    let mut perm = [0, 1, 2];
    perm.swap(0, axis);
    let d = |a: usize| difference::<T>(perm[a]);
    let one = Poly6::<T>::one;
    let half = T::ratio(1, 2);
    let (alpha, rest): (T, Vec<(Term3, Poly6<T>)>) = match term.permute_axes(&perm) {
        Term3::InvR => (T::zero(), vec![(Term3::atanh(0), one())]),
        Term3::R => {
            let (d1, d2) = (d(1), d(2));
            let w = (&(&d1 * &d1) + &(&d2 * &d2)).scale(&half);
            (half, vec![(Term3::atanh(0), w)])
        }
        Term3::AtanhX => (T::one(), vec![(Term3::R, -one())]),
        Term3::AtanhY => (T::one(), vec![(Term3::atanh(0), d(1)), (Term3::atan(2), -d(2))]),
        Term3::AtanhZ => (T::one(), vec![(Term3::atanh(0), d(2)), (Term3::atan(1), -d(1))]),
        Term3::AtanXY => (T::one(), vec![(Term3::atanh(1), d(2))]),
        Term3::AtanXZ => (T::one(), vec![(Term3::atanh(2), d(1))]),
        Term3::AtanYZ => (T::one(), vec![(Term3::atanh(2), -d(1)), (Term3::atanh(1), -d(2))]),
    };
    Rule { alpha, rest: rest.into_iter().map(|(h, c)| (h.permute_axes(&perm), c)).collect() }
}

/// Integrates members of the family, caching the monomial integrals
/// `∫ t^k g dt` per variable, generator and exponent.
///
/// The cache makes repeated integrations cheap; an integrator is meant to be
/// owned by one thread.
pub struct Integrator3<T: Coefficient> {
    rules: [Vec<Rule<T>>; 6],
    memo: [HashMap<(Term3, u16), Antiderivative3<T>>; 6],
}

impl<T: Coefficient> Default for Integrator3<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Coefficient> Integrator3<T> {
    pub fn new() -> Self {
        Integrator3 {
            rules: std::array::from_fn(|v| Term3::ALL.iter().map(|&g| rule(g, v % 3)).collect()),
            memo: std::array::from_fn(|_| HashMap::new()),
        }
    }

    /// Number of cached monomial integrals.
    pub fn cache_len(&self) -> usize {
        self.memo.iter().map(HashMap::len).sum()
    }

    fn ensure(&mut self, var: Var3, g: Term3, k: u16) {
        let v = var.index();
        if self.memo[v].contains_key(&(g, k)) {
            return;
        }
        if k > 0 {
            self.ensure(var, g, k - 1);
            let deps: Vec<Term3> = self.rules[v][g.index()].rest.iter().map(|(h, _)| *h).collect();
            for h in deps {
                self.ensure(var, h, k - 1);
            }
        }
        let value = self.compute(var, g, k);
        self.memo[v].insert((g, k), value);
    }

    /// Integration by parts on `t^k · g`, with `t` the integration variable,
    /// `s` its partner on the same axis and `σ = ±1` the sign of `dD₀/dt`:
    ///
    /// `(1+kα) I_k(g) = σ t^k G_g + kα s I_{k−1}(g) − σk Σ c_h I_{k−1}(h)`.
    fn compute(&self, var: Var3, g: Term3, k: u16) -> Antiderivative3<T> {
        let v = var.index();
        let rule = &self.rules[v][g.index()];
        let sigma = if var.is_y() { -T::one() } else { T::one() };
        let t_k = MultiIndex::<6>::ZERO.with(v, k);

        let mut out = Antiderivative3::zero();
        out[g].add_scaled(&difference(var.axis()), &(rule.alpha.clone() * sigma.clone()), t_k);
        for (h, c) in &rule.rest {
            out[*h].add_scaled(c, &sigma, t_k);
        }
        if k == 0 {
            return out;
        }

        let kt = T::from_u16(k).expect("exponent conversion");
        let memo = &self.memo[v];
        if !rule.alpha.is_zero() {
            let prev = &memo[&(g, k - 1)];
            let scale = kt.clone() * rule.alpha.clone();
            let s = MultiIndex::<6>::unit(var.partner().index());
            for (term, p) in prev.iter() {
                out[term].add_scaled(p, &scale, s);
            }
        }
        let scale = -(kt.clone() * sigma);
        for (h, c) in &rule.rest {
            let prev = &memo[&(*h, k - 1)];
            for (term, p) in prev.iter() {
                if !p.is_zero() {
                    out[term] += &(c * p).scale(&scale);
                }
            }
        }
        let denom = T::one() + kt * rule.alpha.clone();
        if denom != T::one() {
            let inv = T::one() / denom;
            out = out.scale(&inv);
        }
        out
    }

    /// Antiderivative of `f` with respect to `var` within the family.
    pub fn integrate(&mut self, f: &Antiderivative3<T>, var: Var3) -> Antiderivative3<T> {
        let v = var.index();
        for (g, p) in f.iter() {
            for k in p.terms().map(|(m, _)| m[v]).collect::<std::collections::BTreeSet<_>>() {
                self.ensure(var, g, k);
            }
        }
        let memo = &self.memo[v];
        let mut out = Antiderivative3::zero();
        for (g, p) in f.iter() {
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

    /// Integrates successively in each variable of `order`.
    pub fn integrate_all(&mut self, f: &Antiderivative3<T>, order: &[Var3]) -> Antiderivative3<T> {
        let mut f = f.clone();
        for &v in order {
            f = self.integrate(&f, v);
        }
        f
    }
}

/// Antiderivative of `f` with respect to `var`. Uses a fresh cache; for
/// repeated integration hold an [`Integrator3`].
pub fn integrate_3d<T: Coefficient>(f: &Antiderivative3<T>, var: Var3) -> Antiderivative3<T> {
    Integrator3::new().integrate(f, var)
}

/// Six-fold antiderivative of `x^λ y^μ / R`, integrating `y₁, y₂, y₃, x₁,
/// x₂, x₃` in turn.
pub fn integrate_box_kernel<T: Coefficient>(lambda: MultiIndex<3>, mu: MultiIndex<3>) -> Antiderivative3<T> {
    integrate_box_kernel_in_order(lambda, mu, &[Var3::Y1, Var3::Y2, Var3::Y3, Var3::X1, Var3::X2, Var3::X3])
}

/// As [`integrate_box_kernel`] with an explicit integration order.
pub fn integrate_box_kernel_in_order<T: Coefficient>(
    lambda: MultiIndex<3>,
    mu: MultiIndex<3>,
    order: &[Var3],
) -> Antiderivative3<T> {
    let weight = Poly6::monomial(T::one(), MultiIndex::from_halves(&lambda.0, &mu.0));
    Integrator3::new().integrate_all(&Antiderivative3::kernel(weight), order)
}
