use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qeuler::families::*;
use qeuler::integrator::*;
use qeuler::numeric::poly::Poly;
use qeuler::numeric::rational::{binomial, factorial, rat, rat_int, Rational};
use qeuler::numeric::*;
use qeuler::qkit::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn sample_q() -> impl Strategy<Value = Rational> {
    small_rat().prop_filter("q must avoid 0 and 1", |q| !q.is_zero() && !q.is_one())
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..6, 1..5).prop_map(|c| Poly::from_i64s(&c))
}

fn small_ratfunc() -> impl Strategy<Value = RationalFunction> {
    (small_poly(), small_poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

proptest! {
    #[test]
    fn ratfunc_field_axioms(a in small_ratfunc(), b in small_ratfunc(), c in small_ratfunc()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.recip().unwrap()), RationalFunction::one());
        }
    }

    #[test]
    fn ratfunc_canonical_form_round_trips(a in small_ratfunc()) {
        let back = RationalFunction::parse(&a.to_string()).unwrap();
        prop_assert_eq!(&back, &a);
        let again = RationalFunction::new(a.numer().clone(), a.denom().clone()).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn padic_embedding_is_a_homomorphism(a in small_rat(), b in small_rat(), pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let k = 8;
        let e = |r: &Rational| PadicNumber::from_rational(r, p, k).unwrap();
        prop_assert!(e(&a).add(&e(&b)).eq_at_precision(&e(&(&a + &b))));
        prop_assert!(e(&a).sub(&e(&b)).eq_at_precision(&e(&(&a - &b))));
        prop_assert!(e(&a).mul(&e(&b)).eq_at_precision(&e(&(&a * &b))));
        if !b.is_zero() {
            prop_assert!(e(&a).div(&e(&b)).unwrap().eq_at_precision(&e(&(&a / &b))));
        }
    }

    #[test]
    fn padic_render_round_trips(a in small_rat(), pi in 0usize..3, k in 1i64..10) {
        let p = [3u64, 5, 7][pi];
        let x = PadicNumber::from_rational(&a, p, k).unwrap();
        prop_assert_eq!(PadicNumber::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn q_power_is_additive_in_the_exponent(y1 in -200i64..200, y2 in -200i64..200) {
        let f = PadicField::new(3, 10, &rat_int(4)).unwrap();
        let pt = |y: i64| Point::Padic(PadicNumber::from_int(y, 3, 10).unwrap());
        let lhs = q_power_extended(&f, &pt(y1 + y2)).unwrap();
        let rhs = f.mul(&q_power_extended(&f, &pt(y1)).unwrap(), &q_power_extended(&f, &pt(y2)).unwrap());
        prop_assert!(f.equal(&lhs, &rhs));
        let direct = q_power_extended(&f, &Point::Int(y1)).unwrap();
        prop_assert!(f.equal(&q_power_extended(&f, &pt(y1)).unwrap(), &direct));
    }

    #[test]
    fn separable_integrands_factor(a in -3i64..4, b in -3i64..4, level in 1u32..3) {
        let f = PadicField::new(3, 10, &rat_int(4)).unwrap();
        let ctx = IntegrationContext::new(3, 10).unwrap().with_route(SumRoute::Grid);
        let g = Integrand::grid(2, move |f: &PadicField, x: &[i64]| {
            Ok(f.mul(&f.q_pow(a * x[0])?, &f.from_int(x[1] * x[1] + b)))
        }).unwrap();
        let joint = multivariate_sum_level(&ctx, &f, &g, &MeasureSpec::plain(2), level).unwrap();
        let g1 = Integrand::univariate(move |f: &PadicField, x| f.q_pow(a * x));
        let g2 = Integrand::univariate(move |f: &PadicField, x| Ok(f.from_int(x * x + b)));
        let s1 = fermionic_sum_level(&ctx, &f, &g1, 0, level).unwrap();
        let s2 = fermionic_sum_level(&ctx, &f, &g2, 0, level).unwrap();
        prop_assert!(f.equal(&joint, &f.mul(&s1, &s2)));
    }

    #[test]
    fn rational_verdicts_follow_function_field(q in sample_q(), n in 0u32..5, h in -1i64..4, x in 0i64..3) {
        // equal in Q(q) means equal at every q away from poles
        let ff = FunctionField::new();
        let rf = RationalField::new(q.clone()).unwrap();
        let pt = Point::Int(x);
        for r in 1..=3u32 {
            let sym = euler_hr(&ff, n, h, r, &pt).unwrap();
            if let (Ok(at), Ok(direct)) = (sym.eval_at(&q), euler_hr(&rf, n, h, r, &pt)) {
                prop_assert_eq!(at, direct);
            }
        }
    }
}

#[test]
fn both_pascal_rules() {
    let f = FunctionField::new();
    for n in 0..12i64 {
        for k in 0..=n + 1 {
            let next = gauss_binomial(&f, n + 1, k).unwrap();
            let a = f.add(
                &gauss_binomial(&f, n, k - 1).unwrap(),
                &f.mul(&f.q_pow(k).unwrap(), &gauss_binomial(&f, n, k).unwrap()),
            );
            let b = f.add(
                &f.mul(&f.q_pow(n + 1 - k).unwrap(), &gauss_binomial(&f, n, k - 1).unwrap()),
                &gauss_binomial(&f, n, k).unwrap(),
            );
            assert_eq!(next, a, "({n},{k})");
            assert_eq!(next, b, "({n},{k})");
        }
    }
}

#[test]
fn finite_q_binomial_at_sampled_b() {
    let f = FunctionField::new();
    for b in [rat(1, 3), rat(-2, 1), rat(5, 7), rat(3, 1), rat(-1, 4)] {
        let b = RationalFunction::from_rational(&b);
        for n in 0..=8 {
            assert!(q_binomial_finite_check(&f, &b, n).unwrap().equal, "n = {n}");
        }
    }
}

#[test]
fn stirling_routes_and_falling_products() {
    let f = FunctionField::new();
    for n in 0..=8 {
        for k in 0..=8 {
            assert_eq!(q_stirling2(&f, n, k).unwrap(), q_stirling2_by_operator(&f, n, k).unwrap());
        }
    }
    assert_eq!(q_stirling2(&f, 0, 0).unwrap(), RationalFunction::one());
    assert!(q_stirling2(&f, 3, 5).unwrap().is_zero());
    for m in 1..=6u32 {
        let row = q_stirling1(&f, m - 1).unwrap();
        for r in 0..=6 {
            let br = q_bracket(&f, r).unwrap();
            let mut lhs = RationalFunction::one();
            for k in 0..m as i64 {
                lhs = lhs.mul(&br.sub(&q_bracket(&f, k).unwrap()));
            }
            let mut rhs = RationalFunction::zero();
            for (k, s) in row.iter().enumerate() {
                let t = s.mul(&br.pow(m as i64 - k as i64).unwrap());
                rhs = if k % 2 == 0 { rhs.add(&t) } else { rhs.sub(&t) };
            }
            assert_eq!(lhs, rhs, "m = {m}, r = {r}");
        }
    }
}

#[test]
fn q_analogs_at_one() {
    let f = FunctionField::new();
    let one = Rational::one();
    for n in 0..=8u32 {
        assert_eq!(q_factorial(&f, n).unwrap().eval_at(&one).unwrap(), Rational::from_integer(factorial(n)));
        let s1 = q_stirling1(&f, n).unwrap();
        let c1 = classical_stirling1_row(n);
        for k in 0..=n {
            let c = gauss_binomial(&f, n as i64, k as i64).unwrap().eval_at(&one).unwrap();
            assert_eq!(c, Rational::from_integer(binomial(n as i64, k as i64)));
            let s2 = q_stirling2(&f, n, k).unwrap().eval_at(&one).unwrap();
            assert_eq!(s2, Rational::from_integer(classical_stirling2(n, k)));
            assert_eq!(s1[k as usize].eval_at(&one).unwrap(), Rational::from_integer(c1[k as usize].clone()));
        }
    }
    // signless first kind: n! S_1 row sums to (n+1)!
    for n in 0..=8u32 {
        let sum: BigInt = classical_stirling1_row(n).into_iter().sum();
        assert_eq!(sum, factorial(n + 1));
    }
}

#[test]
fn e0_h1_closed_value() {
    let f = FunctionField::new();
    for h in -2..=4i64 {
        let e0 = euler_hr(&f, 0, h, 1, &Point::Int(0)).unwrap();
        let base = f.q_pow(h - 1).unwrap();
        let want = f.div(&f.from_int(2), &f.add(&f.one(), &base)).unwrap();
        assert_eq!(e0, want, "h = {h}");
    }
}

#[test]
fn family_denominators_are_cyclotomic_type() {
    // den | q^a (1-q)^n prod_j (1+q^j)^(r+1)
    let f = FunctionField::new();
    for n in 0..=4u32 {
        for r in 1..=3u32 {
            for h in -1..=r as i64 + 1 {
                let v = euler_hr(&f, n, h, r, &Point::Int(1)).unwrap();
                let mut bound = Poly::one();
                for _ in 0..n {
                    bound = &bound * &Poly::from_i64s(&[1, -1]);
                }
                for j in 1..=(n as i64 + 2 * r as i64 + 4) {
                    let mut c = vec![0i64; j as usize + 1];
                    c[0] = 1;
                    c[j as usize] = 1;
                    for _ in 0..=r {
                        bound = &bound * &Poly::from_i64s(&c);
                    }
                }
                bound = bound.shift(3 * r as usize + n as usize + 4);
                assert!(
                    bound.exact_div(&v.denom().primitive_part()).is_some(),
                    "n={n} r={r} h={h}: {}",
                    v.denom()
                );
            }
        }
    }
}

#[test]
fn stabilization_is_monotone_on_the_corpus() {
    let mut violations = Vec::new();
    for p in [3u64, 5] {
        let f = PadicField::new(p, 16, &rat_int(p as i64 + 1)).unwrap();
        let ctx = IntegrationContext::new(p, 16).unwrap();
        for r in 1..=2u32 {
            for n in 0..=3 {
                let g = Integrand::bracket_power(0, vec![1; r as usize], n, 0).unwrap();
                let res = multivariate_fermionic_integral(&ctx, &f, &g, &MeasureSpec::plain(r as usize), 3).unwrap();
                assert!(res.achieved_precision <= 16);
                if !res.monotone {
                    violations.push((p, r, n, res.diff_valuations.clone()));
                }
            }
        }
    }
    // reported, not fatal
    if !violations.is_empty() {
        eprintln!("non-monotone stabilization: {violations:?}");
    }
}
