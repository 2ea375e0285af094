use super::{Antiderivative3, Term3};
use crate::error::{Error, Result};
use crate::exactmath::{Coefficient, Precision, Real};

/// How a transcendental factor that is undefined at the evaluation point is
/// treated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularPolicy {
    /// A term with an exactly zero weight contributes zero; a singular factor
    /// with a nonzero weight is an error.
    ExactSkip,
    /// atanh arguments are scaled by `1 − c·eps`, and an atan with a vanishing
    /// denominator takes its limit from the positive side. Intended for
    /// machine-precision coefficients.
    EpsGuard { c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    pub precision: Precision,
    pub policy: SingularPolicy,
}

impl EvalConfig {
    /// Exact-skip evaluation at `digits` decimal digits.
    pub fn digits(digits: u32) -> Self {
        EvalConfig { precision: Precision::digits(digits), policy: SingularPolicy::ExactSkip }
    }

    /// Machine-double evaluation with the eps-guard (`c = 4`).
    pub fn double() -> Self {
        EvalConfig { precision: Precision::digits(16), policy: SingularPolicy::EpsGuard { c: 4.0 } }
    }

    /// Panics unless `c > 1`.
    pub fn with_eps_guard(mut self, c: f64) -> Self {
        assert!(c > 1.0, "eps-guard constant must exceed 1");
        self.policy = SingularPolicy::EpsGuard { c };
        self
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::digits(100)
    }
}

/// The values entering an evaluation of the family at one point.
pub(crate) struct Geometry<T, F> {
    d: [T; 3],
    r2_zero: bool,
    df: [F; 3],
    r: F,
}

impl<T: Coefficient, F: Real> Geometry<T, F> {
    pub(crate) fn new(d: [T; 3], prec: Precision) -> Self {
        let r2 = d[0].clone() * d[0].clone() + d[1].clone() * d[1].clone() + d[2].clone() * d[2].clone();
        let df = std::array::from_fn(|a| d[a].to_real::<F>(prec));
        let r = r2.to_real::<F>(prec).sqrt();
        Geometry { r2_zero: r2.is_zero(), d, df, r }
    }

    /// Value of the transcendental factor of `term`.
    pub(crate) fn factor(&self, term: Term3, cfg: &EvalConfig) -> Result<F> {
        let prec = cfg.precision;
        let singular = || Error::SingularTerm { term: term.label() };
        match term {
            Term3::InvR => {
                if self.r2_zero {
                    return Err(singular());
                }
                Ok(F::from_f64(1.0, prec) / self.r.clone())
            }
            Term3::R => Ok(self.r.clone()),
            Term3::AtanhX | Term3::AtanhY | Term3::AtanhZ => {
                let a = term.index() - 2;
                if self.r2_zero {
                    return Err(singular());
                }
                let ratio = self.df[a].clone() / self.r.clone();
                match cfg.policy {
                    SingularPolicy::ExactSkip => {
                        if self.d[(a + 1) % 3].is_zero() && self.d[(a + 2) % 3].is_zero() {
                            return Err(singular());
                        }
                        Ok(ratio.atanh())
                    }
                    SingularPolicy::EpsGuard { c } => {
                        let shrink = F::from_f64(1.0, prec) - F::from_f64(c, prec) * F::epsilon(prec);
                        Ok((ratio * shrink).atanh())
                    }
                }
            }
            Term3::AtanXY | Term3::AtanXZ | Term3::AtanYZ => {
                let c = 7 - term.index();
                let (a, b) = ((c + 1) % 3, (c + 2) % 3);
                if self.r2_zero {
                    return Err(singular());
                }
                if self.d[c].is_zero() {
                    return match cfg.policy {
                        SingularPolicy::ExactSkip => Err(singular()),
                        SingularPolicy::EpsGuard { .. } => {
                            let num = self.df[a].clone() * self.df[b].clone();
                            let zero = F::zero(prec);
                            let half_pi = F::pi(prec) / F::from_f64(2.0, prec);
                            Ok(if num > zero {
                                half_pi
                            } else if num < zero {
                                -half_pi
                            } else {
                                zero
                            })
                        }
                    };
                }
                let num = self.df[a].clone() * self.df[b].clone();
                Ok((num / (self.df[c].clone() * self.r.clone())).atan())
            }
        }
    }
}

/// The eight weighted terms of `f` at `point = (x₁,x₂,x₃,y₁,y₂,y₃)`, in
/// [`Term3::ALL`] order. Weights are evaluated in the coefficient type, so
/// exactly when `T` is exact.
pub fn write_summands_3d<T: Coefficient, F: Real>(
    f: &Antiderivative3<T>,
    point: &[T; 6],
    cfg: &EvalConfig,
) -> Result<[F; 8]> {
    let d = std::array::from_fn(|a| point[a].clone() - point[a + 3].clone());
    let geo = Geometry::<T, F>::new(d, cfg.precision);
    let mut out: [F; 8] = std::array::from_fn(|_| F::zero(cfg.precision));
    for (term, p) in f.iter() {
        let w = p.eval(point);
        if w.is_zero() {
            continue;
        }
        out[term.index()] = w.to_real::<F>(cfg.precision) * geo.factor(term, cfg)?;
    }
    Ok(out)
}

/// Value of `f` at `point`: the summands of [`write_summands_3d`] added in
/// term order.
pub fn eval_3d<T: Coefficient, F: Real>(f: &Antiderivative3<T>, point: &[T; 6], cfg: &EvalConfig) -> Result<F> {
    let s = write_summands_3d::<T, F>(f, point, cfg)?;
    Ok(F::sum(&s, cfg.precision))
}
