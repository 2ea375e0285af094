mod common;

use common::*;
use newtonquad::antideriv3d::integrate_box_kernel;
use newtonquad::boxquad::*;
use newtonquad::{Antiderivative3Q, BigFloat, Error, EvalConfig, MultiIndex, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn matches_tensor_quadrature_3d() {
    let cfg = EvalConfig::digits(40);
    let pairs = exponent_pairs::<3>(3);
    for (qy, qx) in separated_pairs_3d() {
        let oracle = adaptive_moments(&to_boxf(&qy), &to_boxf(&qx), &pairs, 1e-11);
        for ((l, m), o) in pairs.iter().zip(&oracle) {
            let v = definite_integral_3d(MultiIndex(*l), MultiIndex(*m), &qy, &qx, &cfg).unwrap().to_f64();
            assert!(rel(v, *o) < 1e-10, "{qy} {qx} λ={l:?} μ={m:?}: {v} vs {o}");
        }
    }
}

#[test]
fn matches_tensor_quadrature_2d() {
    let cfg = EvalConfig::digits(40);
    let pairs = exponent_pairs::<2>(3);
    for (qy, qx) in separated_pairs_2d() {
        let oracle = adaptive_moments(&to_boxf(&qy), &to_boxf(&qx), &pairs, 1e-11);
        for ((l, m), o) in pairs.iter().zip(&oracle) {
            let v = definite_integral_2d(MultiIndex(*l), MultiIndex(*m), &qy, &qx, &cfg).unwrap().to_f64();
            assert!(rel(v, *o) < 1e-10, "{qy} {qx} λ={l:?} μ={m:?}: {v} vs {o}");
        }
    }
}

#[test]
fn touching_boxes_are_finite_and_continuous() {
    let cfg = EvalConfig::digits(60);
    let eps = q(1, 10).pow(10);
    let cases = [([0, 0, 0], [0, 0, 0]), ([1, 0, 0], [0, 0, 1]), ([0, 2, 0], [1, 0, 0])];
    for (name, qy, qx) in touching_pairs() {
        for (l, m) in cases {
            let (l, m) = (MultiIndex(l), MultiIndex(m));
            let v = definite_integral_3d(l, m, &qy, &qx, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(v.is_finite() && v.to_f64() > 0.0, "{name}");
            for axis in 0..3 {
                for sign in [-1, 1] {
                    let mut t = [Rational::from_integer(0), Rational::from_integer(0), Rational::from_integer(0)];
                    t[axis] = eps.clone() * q(sign, 1);
                    let w = definite_integral_3d(l, m, &qy, &qx.translate(&t), &cfg).unwrap();
                    let change = rel(w.to_f64(), v.to_f64());
                    assert!(change < 1e-8, "{name} axis {axis}: relative change {change:e}");
                }
            }
        }
    }
}

#[test]
fn identical_unit_cubes() {
    let v =
        definite_integral_3d(MultiIndex::ZERO, MultiIndex::ZERO, &Box3::unit(), &Box3::unit(), &EvalConfig::digits(50))
            .unwrap();
    let direct = {
        // 8 ∫_{[0,1]³} Π(1−tᵢ)/|t| dt by the midpoint rule
        let n = 200;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h];
                    let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
                    s += (1.0 - t[0]) * (1.0 - t[1]) * (1.0 - t[2]) / r;
                }
            }
        }
        8.0 * s * h * h * h
    };
    assert!(rel(v.to_f64(), direct) < 1e-3, "{} vs {direct}", v.to_f64());
}

#[test]
fn touching_squares_are_finite_and_continuous() {
    let cfg = EvalConfig::digits(60);
    let eps = q(1, 10).pow(10);
    let b = |s: &str| s.parse::<Box2>().unwrap();
    let unit = Box2::unit();
    for (name, qx) in [("identical", unit.clone()), ("edge", b("1,2:0,1")), ("vertex", b("1,2:1,2"))] {
        for (l, m) in [([0, 0], [0, 0]), ([1, 0], [0, 2]), ([0, 1], [1, 1])] {
            let (l, m) = (MultiIndex(l), MultiIndex(m));
            let v = definite_integral_2d(l, m, &unit, &qx, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(v.is_finite(), "{name}");
            for axis in 0..2 {
                for sign in [-1, 1] {
                    let mut t = [Rational::from_integer(0), Rational::from_integer(0)];
                    t[axis] = eps.clone() * q(sign, 1);
                    let w = definite_integral_2d(l, m, &unit, &qx.translate(&t), &cfg).unwrap();
                    let change = (w.to_f64() - v.to_f64()).abs();
                    assert!(change < 1e-8, "{name} axis {axis}: change {change:e}");
                }
            }
        }
    }
}

#[test]
fn identical_unit_squares() {
    let v =
        definite_integral_2d(MultiIndex::ZERO, MultiIndex::ZERO, &Box2::unit(), &Box2::unit(), &EvalConfig::digits(40))
            .unwrap()
            .to_f64();
    // 4 ∫_{[0,1]²} (1−t₁)(1−t₂) ln(t₁²+t₂²) dt by the midpoint rule
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            s += (1.0 - a) * (1.0 - b) * (a * a + b * b).ln();
        }
    }
    let direct = 4.0 * s * h * h;
    assert!(rel(v, direct) < 1e-5, "{v} vs {direct}");
}

#[test]
fn exchange_symmetry() {
    let cfg = EvalConfig::digits(50);
    let (qy, qx) = (&separated_pairs_3d()[2].0, &separated_pairs_3d()[2].1);
    for (l, m) in [([1, 0, 0], [0, 0, 2]), ([0, 1, 1], [1, 0, 0]), ([0, 0, 0], [0, 3, 0])] {
        let (l, m) = (MultiIndex(l), MultiIndex(m));
        let a = definite_integral_3d(l, m, qy, qx, &cfg).unwrap();
        let b = definite_integral_3d(m, l, qx, qy, &cfg).unwrap();
        let d = BigFloat::with_val(a.prec(), &a - &b).abs().to_f64();
        assert!(d < 1e-40 * a.to_f64().abs(), "{d}");
    }
    // also for touching boxes
    let (_, qy, qx) = &touching_pairs()[1];
    let l = MultiIndex([2, 0, 0]);
    let a = definite_integral_3d(l, MultiIndex::ZERO, qy, qx, &cfg).unwrap();
    let b = definite_integral_3d(MultiIndex::ZERO, l, qx, qy, &cfg).unwrap();
    assert!(BigFloat::with_val(a.prec(), &a - &b).abs().to_f64() < 1e-40);
}

#[test]
fn bilinear_in_the_weight() {
    let cfg = EvalConfig::digits(50);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (qy, qx) = separated_pairs_3d().remove(1);
    for _ in 0..5 {
        let w: P6 = random_poly(&mut rng, 3, 2);
        let f = newtonquad::antideriv3d::Integrator3::new().integrate_all(
            &Antiderivative3Q::kernel(w.clone()),
            &newtonquad::Var3::ALL[3..].iter().chain(&newtonquad::Var3::ALL[..3]).copied().collect::<Vec<_>>(),
        );
        let whole: BigFloat = definite_integral_of(&f, &qy, &qx, &cfg).unwrap();
        let mut parts = BigFloat::with_val(whole.prec(), 0);
        for (m, c) in w.terms() {
            let e = m.exponents();
            let v =
                definite_integral_3d(MultiIndex([e[0], e[1], e[2]]), MultiIndex([e[3], e[4], e[5]]), &qy, &qx, &cfg)
                    .unwrap();
            parts += v * BigFloat::with_val(whole.prec(), c.inner());
        }
        let d = BigFloat::with_val(whole.prec(), &whole - &parts).abs().to_f64();
        assert!(d < 1e-40 * whole.to_f64().abs().max(1.0), "{d}");
    }
}

#[test]
fn degenerate_boxes_give_zero() {
    let cfg = EvalConfig::digits(30);
    let flat: Box3 = "0,1:1/2,1/2:0,1".parse().unwrap();
    let v = definite_integral_3d(MultiIndex([1, 0, 0]), MultiIndex::ZERO, &flat, &Box3::unit(), &cfg).unwrap();
    assert!(v.is_zero());
    let flat2: Box2 = "0,0:0,1".parse().unwrap();
    let v = definite_integral_2d(MultiIndex::ZERO, MultiIndex::ZERO, &Box2::unit(), &flat2, &cfg).unwrap();
    assert!(v.is_zero());
}

#[test]
fn partial_integral_at_a_singular_point_is_an_error() {
    // ∫ dy₁ of 1/R has atanh(X/R) with weight 1, singular where Y = Z = 0
    let f = newtonquad::antideriv3d::integrate_3d(&Antiderivative3Q::kernel(P6::one()), newtonquad::Var3::Y1);
    let p = [q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)];
    let r: Result<BigFloat, _> = newtonquad::antideriv3d::eval_3d(&f, &p, &EvalConfig::digits(30));
    assert!(matches!(r, Err(Error::SingularTerm { .. })));
}

#[test]
fn hackbusch_reference() {
    let rep = hackbusch_example(&EvalConfig::digits(100), true).unwrap();
    let s = newtonquad::exactmath::format_significant(&rep.value, 50);
    assert_eq!(s, "181.43931117544219248665837073310890818752885155281");
    let kappa = rep.kappa.to_f64();
    assert!(kappa > 0.55e8 && kappa < 2.2e8, "{kappa}");
    // double coefficients lose about log10(κ) digits
    let d = rep.double_value.unwrap();
    assert!(rel(d, 181.43931117544219) < 1e-6, "{d}");
}

#[test]
fn precision_only_affects_trailing_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f: Antiderivative3Q = integrate_box_kernel(MultiIndex([1, 1, 0]), MultiIndex([0, 0, 2]));
    for _ in 0..5 {
        let p: [Rational; 6] = std::array::from_fn(|_| q(rng.gen_range(-30..30), 7));
        let a: BigFloat = newtonquad::antideriv3d::eval_3d(&f, &p, &EvalConfig::digits(100)).unwrap();
        let b: BigFloat = newtonquad::antideriv3d::eval_3d(&f, &p, &EvalConfig::digits(200)).unwrap();
        let d = BigFloat::with_val(b.prec(), &a - &b).abs().to_f64();
        assert!(d <= 1e-95 * b.to_f64().abs().max(1.0), "{d:e}");
    }
}
