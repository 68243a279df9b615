//! Worked values checked against oracles written out in the test itself.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qeuler::families::*;
use qeuler::integrator::*;
use qeuler::numeric::rational::{rat, rat_int, Rational};
use qeuler::numeric::*;
use qeuler::qkit::*;
use qeuler::NumericError;

fn rf(s: &str) -> RationalFunction {
    RationalFunction::parse(s).unwrap()
}

fn rpow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        (0..e).fold(Rational::one(), |a, _| a * q)
    } else {
        Rational::one() / rpow(q, -e)
    }
}

/// `(1-q^x)/(1-q)` straight from the definition.
fn bracket_oracle(q: &Rational, x: i64) -> Rational {
    (Rational::one() - rpow(q, x)) / (Rational::one() - q)
}

#[test]
fn padic_embeddings() {
    let a = PadicNumber::from_rational(&rat(1, 2), 3, 2).unwrap();
    assert_eq!(a.valuation(), Some(0));
    assert_eq!(a.unit(), &BigInt::from(5));
    let b = PadicNumber::from_rational(&rat_int(9), 3, 4).unwrap();
    assert_eq!((b.valuation(), b.unit().clone()), (Some(2), BigInt::one()));
    let c = PadicNumber::from_rational(&rat(1, 3), 3, 3).unwrap();
    assert_eq!((c.valuation(), c.unit().clone()), (Some(-1), BigInt::one()));
}

#[test]
fn padic_division_loses_divisor_valuation() {
    let a = PadicNumber::from_rational(&rat_int(18), 3, 5).unwrap();
    let b = PadicNumber::from_rational(&rat_int(-3), 3, 5).unwrap();
    let c = a.div(&b).unwrap();
    assert_eq!(c.precision(), 4);
    assert_eq!(c.valuation(), Some(1));
    let exact = PadicNumber::from_rational(&rat_int(-6), 3, 4).unwrap();
    assert!(c.eq_at_precision(&exact));

    let unit = PadicNumber::from_rational(&rat_int(2), 3, 5).unwrap();
    assert_eq!(a.div(&unit).unwrap().precision(), 5);
}

#[test]
fn padic_precision_exhausts_under_repeated_division() {
    let f = PadicField::new(3, 4, &rat_int(4)).unwrap();
    let omq = f.sub(&f.one(), &f.q());
    let den = f.pow(&omq, 4).unwrap();
    let err = f.div(&f.one(), &den).unwrap_err();
    assert!(matches!(err, NumericError::PrecisionExhausted(_)), "{err}");
}

#[test]
fn padic_render_round_trips() {
    for (r, p, k) in [(rat(1, 2), 3, 6), (rat(-7, 25), 5, 4), (rat(0, 1), 7, 3), (rat(10, 3), 3, 5)] {
        let a = PadicNumber::from_rational(&r, p, k).unwrap();
        assert_eq!(PadicNumber::parse(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn function_field_limits() {
    assert_eq!(rf("(1-q^2)/(1-q)").eval_at(&Rational::one()).unwrap(), rat_int(2));
    assert_eq!(rf("1/(1+q)").eval_at(&Rational::one()).unwrap(), rat(1, 2));
    let f = FunctionField::new();
    let e1 = euler_q(&f, 1, &Point::Int(0)).unwrap();
    assert_eq!(e1.eval_at(&Rational::one()).unwrap(), rat(-1, 2));
}

#[test]
fn brackets() {
    let f = FunctionField::new();
    assert!(q_bracket(&f, 0).unwrap().is_zero());
    assert_eq!(q_bracket(&f, 3).unwrap(), rf("1+q+q^2"));
    assert_eq!(q_bracket_signed(&f, 2).unwrap(), rf("1-q"));
    assert_eq!(q_bracket_signed(&f, 1).unwrap(), RationalFunction::one());
    let g = RationalField::new(rat(1, 2)).unwrap();
    assert_eq!(q_bracket(&g, 2).unwrap(), rat(3, 2));
    for x in -4..=6 {
        let q = rat(-2, 7);
        let h = RationalField::new(q.clone()).unwrap();
        assert_eq!(q_bracket(&h, x).unwrap(), bracket_oracle(&q, x), "x = {x}");
    }
}

#[test]
fn gaussian_binomials() {
    let f = FunctionField::new();
    assert_eq!(gauss_binomial(&f, 4, 0).unwrap(), RationalFunction::one());
    assert_eq!(gauss_binomial(&f, 4, 2).unwrap(), rf("1+q+2*q^2+q^3+q^4"));
    let c = gauss_binomial(&f, 5, 2).unwrap();
    assert_eq!(c.eval_at(&Rational::one()).unwrap(), rat_int(10));
    // factorial quotient at a rational point
    let q = rat(3, 5);
    let g = RationalField::new(q.clone()).unwrap();
    let fact = |n: i64| (1..=n).fold(Rational::one(), |a, k| a * bracket_oracle(&q, k));
    for n in 0..=7 {
        for k in 0..=n {
            let expect = fact(n) / (fact(k) * fact(n - k));
            assert_eq!(gauss_binomial(&g, n, k).unwrap(), expect);
        }
    }
}

#[test]
fn pochhammer_products() {
    let q = rat(2, 3);
    let g = RationalField::new(q.clone()).unwrap();
    let b = rat(5, 7);
    assert_eq!(q_pochhammer(&g, &b, 0), Rational::one());
    let direct = (Rational::one() - &b) * (Rational::one() - &b * &q);
    assert_eq!(q_pochhammer(&g, &b, 2), direct);
    let expanded = Rational::one() - bracket_oracle(&q, 2) * &b + &q * &b * &b;
    assert_eq!(direct, expanded);
    let rep = q_binomial_finite_check(&g, &b, 5).unwrap();
    assert!(rep.equal);
    assert!(q_binomial_finite_check(&g, &Rational::zero(), 3).unwrap().equal);
}

#[test]
fn q_binomial_series_at_half() {
    for n in 0..=3 {
        let rep = q_binomial_series_check(&rat(1, 2), &rat(1, 4), n, 60).unwrap();
        let tol = Rational::new(BigInt::one(), BigInt::from(2).pow(40u32));
        assert!(rep.error < tol, "n = {n}");
        assert!(rep.error <= rep.remainder_bound);
    }
    assert!(matches!(
        q_binomial_series_check(&rat(2, 1), &rat(1, 4), 2, 10),
        Err(NumericError::Divergent(_))
    ));
}

#[test]
fn q_differences() {
    let f = FunctionField::new();
    let values: Vec<_> = (0..4).map(|x| q_bracket(&f, x).unwrap()).collect();
    assert_eq!(q_difference(&f, &values, 0).unwrap(), values[0]);
    assert_eq!(q_difference(&f, &values, 1).unwrap(), RationalFunction::one());
}

#[test]
fn stirling_values() {
    let f = FunctionField::new();
    assert_eq!(q_stirling2(&f, 2, 1).unwrap(), RationalFunction::one());
    let row = q_stirling1(&f, 2).unwrap();
    assert_eq!(row[0], RationalFunction::one());
    assert_eq!(row[1], rf("2+q"));
    assert_eq!(row[2], rf("1+q"));
    assert_eq!(q_stirling1(&f, 0).unwrap(), vec![RationalFunction::one()]);
}

/// The level-`N` Riemann sum computed by a plain loop over exact rationals.
fn riemann_oracle(p: u64, q: &Rational, level: u32, delta: i64, g: impl Fn(i64) -> Rational) -> Rational {
    let m = p.pow(level) as i64;
    let qd = rpow(q, delta);
    let pre = (Rational::one() + &qd) / (Rational::one() + rpow(q, delta * m));
    let mut acc = Rational::zero();
    let mut w = Rational::one();
    for x in 0..m {
        acc += g(x) * &w;
        w = -(&w * &qd);
    }
    pre * acc
}

#[test]
fn riemann_sum_matches_direct_loop() {
    let q = rat_int(4);
    let f = PadicField::new(3, 12, &q).unwrap();
    let ctx = IntegrationContext::new(3, 12).unwrap();
    for delta in [0, 1] {
        for level in 1..=3 {
            let g = Integrand::bracket_power(0, vec![1], 2, 0).unwrap();
            let got = fermionic_sum_level(&ctx, &f, &g, delta, level).unwrap();
            let want = riemann_oracle(3, &q, level, delta, |x| {
                let b = bracket_oracle(&q, x);
                &b * &b
            });
            assert!(f.equal(&got, &f.embed(&want)), "delta {delta} level {level}");
        }
    }
}

#[test]
fn normalization_is_exact() {
    for p in [3u64, 5, 7] {
        let f = PadicField::new(p, 10, &rat_int(p as i64 + 1)).unwrap();
        let ctx = IntegrationContext::new(p, 10).unwrap();
        for delta in [0, 1] {
            for level in 1..=4 {
                let v = fermionic_sum_level(&ctx, &f, &Integrand::one(1).unwrap(), delta, level).unwrap();
                assert!(f.equal(&v, &f.one()));
            }
        }
    }
}

#[test]
fn identity_integrand_tends_to_minus_half() {
    let f = PadicField::new(3, 10, &rat_int(4)).unwrap();
    let ctx = IntegrationContext::new(3, 10).unwrap();
    let g = Integrand::univariate(|f: &PadicField, x| Ok(f.from_int(x)));
    for level in 2..=4 {
        let v = fermionic_sum_level(&ctx, &f, &g, 0, level).unwrap();
        let d = f.sub(&v, &f.embed(&rat(-1, 2)));
        assert!(d.valuation().map_or(true, |v| v >= level as i64 - 1));
    }
}

#[test]
fn basic_closed_form_is_the_mu_minus_one_integral() {
    let f = PadicField::new(3, 20, &rat_int(4)).unwrap();
    let ctx = IntegrationContext::new(3, 20).unwrap();
    let g = Integrand::bracket_power(0, vec![1], 2, 0).unwrap();
    let closed = euler_q(&f, 2, &Point::Int(0)).unwrap();
    let plain = fermionic_integral(&ctx, &f, &g, 0, 4).unwrap();
    let d = f.sub(&closed, &plain.value).valuation();
    assert!(d.map_or(true, |v| v >= plain.achieved_precision));
    // against mu_-q the sums settle on a different limit
    let weighted = fermionic_integral(&ctx, &f, &g, 1, 6).unwrap();
    let d = f.sub(&closed, &weighted.value).valuation().unwrap();
    let last = weighted.diff_valuations.last().unwrap().unwrap();
    assert!(d < last, "gap valuation {d}, level agreement {last}");
}

#[test]
fn multivariate_cases() {
    let f = PadicField::new(3, 14, &rat_int(4)).unwrap();
    let ctx = IntegrationContext::new(3, 14).unwrap();
    let one = multivariate_fermionic_integral(&ctx, &f, &Integrand::one(2).unwrap(), &MeasureSpec::plain(2), 3).unwrap();
    assert!(f.equal(&one.value, &f.one()));

    let g = Integrand::bracket_power(0, vec![1, 1], 2, 0).unwrap();
    let m = MeasureSpec::new(vec![0, 0], vec![1, 0]).unwrap();
    let res = multivariate_fermionic_integral(&ctx, &f, &g, &m, 3).unwrap();
    let closed = euler_hr(&f, 2, 2, 2, &Point::Int(0)).unwrap();
    let d = f.sub(&closed, &res.value).valuation();
    assert!(d.map_or(true, |v| v >= res.achieved_precision));

    let g = Integrand::bracket_power(0, vec![1, 1], 2, 0).unwrap();
    let res = multivariate_fermionic_integral(&ctx, &f, &g, &MeasureSpec::plain(2), 3).unwrap();
    let closed = euler_order_r(&f, 2, 2, &Point::Int(0)).unwrap();
    let d = f.sub(&closed, &res.value).valuation();
    assert!(d.map_or(true, |v| v >= res.achieved_precision));

    // moment with m = 1, r = 2
    let g = Integrand::bracket_power(0, vec![1, 1], 0, 1).unwrap();
    let m = MeasureSpec::new(vec![0, 0], vec![-1, -2]).unwrap();
    let res = multivariate_fermionic_integral(&ctx, &f, &g, &m, 3).unwrap();
    let b = f.neg(&f.q_pow(-1).unwrap());
    let closed = f.div(&f.from_int(4), &q_pochhammer(&f, &b, 2)).unwrap();
    let d = f.sub(&closed, &res.value).valuation();
    assert!(d.map_or(true, |v| v >= res.achieved_precision));

    // weighted measures mu_-q^delta
    let g = Integrand::bracket_power(0, vec![1, 1], 1, 0).unwrap();
    let m = MeasureSpec::new(vec![1, 2], vec![0, 0]).unwrap();
    let res = multivariate_fermionic_integral(&ctx, &f, &g, &m, 3).unwrap();
    let closed = euler_weighted(&f, 1, &Point::Int(0), &[1, 1], &[1, 2]).unwrap();
    let d = f.sub(&closed, &res.value).valuation();
    assert!(d.map_or(true, |v| v >= res.achieved_precision));
}

#[test]
fn shift_relation_defects() {
    let f = PadicField::new(3, 12, &rat_int(4)).unwrap();
    let ctx = IntegrationContext::new(3, 12).unwrap();
    let rep = shift_relation_check(&ctx, &f, &Integrand::one(1).unwrap(), 1, 1..=3).unwrap();
    assert!(rep.rows.iter().all(|r| r.defect_valuation.is_none()));
    let g = Integrand::bracket_power(0, vec![1], 1, 0).unwrap();
    let rep = shift_relation_check(&ctx, &f, &g, 2, 2..=4).unwrap();
    for row in &rep.rows {
        assert!(row.defect_valuation.map_or(true, |v| v >= row.level as i64 - 1));
    }
}

#[test]
fn family_small_values() {
    let f = FunctionField::new();
    let x0 = Point::Int(0);
    assert_eq!(euler_q(&f, 0, &x0).unwrap(), RationalFunction::one());
    for r in 1..=3 {
        assert_eq!(euler_order_r(&f, 0, r, &x0).unwrap(), RationalFunction::one());
        assert_eq!(euler_order_neg_r(&f, 0, r, &x0).unwrap(), RationalFunction::one());
    }
    assert_eq!(euler_order_neg_r(&f, 1, 1, &x0).unwrap(), rf("1/2"));
    // n = 0: 2^r/(-q^(h-r);q)_r
    for (h, r) in [(0i64, 1u32), (2, 2), (3, 1), (-1, 3)] {
        let b = f.neg(&f.q_pow(h - r as i64).unwrap());
        let want = f.div(&f.pow(&f.from_int(2), r as i64).unwrap(), &q_pochhammer(&f, &b, r)).unwrap();
        assert_eq!(euler_hr(&f, 0, h, r, &x0).unwrap(), want);
        let inv = f.div(&f.one(), &want).unwrap();
        assert_eq!(euler_h_neg_r(&f, 0, h, r, &x0).unwrap(), inv);
    }
    assert_eq!(
        euler_h_neg_r(&f, 2, 2, 2, &x0).unwrap(),
        euler_h_neg_r_lform(&f, 2, 2, 2, &x0).unwrap()
    );
    assert_eq!(
        euler_weighted(&f, 0, &x0, &[1, 2], &[1, 3]).unwrap(),
        RationalFunction::one()
    );
    let star0 = euler_weighted_star(&f, 0, &x0, &[1, 2], &[1, 3]).unwrap();
    let want = f
        .div(&f.from_int(4), &f.mul(&rf("1+q"), &rf("1+q^3")))
        .unwrap();
    assert_eq!(star0, want);
}

#[test]
fn classical_oracles_agree() {
    // E_n(0) for n = 0..6 from the tangent-number table
    let table = [rat(1, 1), rat(-1, 2), rat(0, 1), rat(1, 4), rat(0, 1), rat(-1, 2), rat(0, 1)];
    for (n, want) in table.iter().enumerate() {
        assert_eq!(&classical_euler(n as u32, &Rational::zero(), 1), want, "n = {n}");
    }
    for n in 0..=6 {
        for r in 1..=3 {
            for x in 0..=2 {
                let x = rat_int(x);
                assert_eq!(classical_euler(n, &x, r), classical_euler_umbral(n, &x, r));
            }
        }
    }
}

#[test]
fn series_requires_convergent_parameters() {
    let spec = EulerFamilySpec::new(FamilyKind::Hr, 2).with_r(2).with_h(2).with_x(0);
    assert!(matches!(series_tail_eval(&rat(1, 2), &spec, 20), Err(NumericError::Divergent(_))));
    let spec = EulerFamilySpec::new(FamilyKind::Hr, 2).with_r(2).with_h(3).with_x(1);
    let rep = series_tail_eval(&rat(1, 2), &spec, 40).unwrap();
    assert!(rep.error <= rep.remainder_bound);
}
