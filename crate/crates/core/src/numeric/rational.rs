//! Exact rational scalars and small integer helpers shared by every backend.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent of `p` in a nonzero integer. `None` for zero.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return Some(v);
        }
        n = quot;
        v += 1;
    }
}

/// `v_p(num) - v_p(den)`; `None` for zero.
pub fn rat_valuation(r: &Rational, p: &BigInt) -> Option<i64> {
    let vn = int_valuation(r.numer(), p)?;
    let vd = int_valuation(r.denom(), p).unwrap_or(0);
    Some(vn - vd)
}

/// Strips every factor `p` from `n`, returning `(v_p(n), n / p^v)`.
pub fn split_p(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    if n.is_zero() {
        return (0, n);
    }
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return (v, n);
        }
        n = quot;
        v += 1;
    }
}

pub fn is_odd_prime(p: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *p <= two || p.is_even() {
        return false;
    }
    // trial division is plenty for the primes used as p-adic bases
    let Some(pv) = p.to_u64() else {
        return false;
    };
    let mut d = 3u64;
    while d.saturating_mul(d) <= pv {
        if pv % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Modular inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn rat_pow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), e.unsigned_abs() as usize)
    }
}

/// Ordinary binomial coefficient C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn parse_bigint(s: &str, whole: &str) -> Result<BigInt, ParseError> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(whole, "expected an integer"));
    }
    t.parse::<BigInt>()
        .map_err(|_| ParseError::new(whole, "expected an integer"))
}

/// Parses `"a"` or `"a/b"` with `b != 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (parse_bigint(n, s)?, parse_bigint(d, s)?),
        None => (parse_bigint(s, s)?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(ParseError::new(s, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Renders `a` or `a/b`; the inverse of [`parse_rational`].
pub fn render_rational(r: &Rational) -> String {
    r.to_string()
}

/// Absolute value helper used by remainder bounds.
pub fn rat_abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let three = BigInt::from(3);
        assert_eq!(int_valuation(&BigInt::from(54), &three), Some(3));
        assert_eq!(int_valuation(&BigInt::from(0), &three), None);
        assert_eq!(rat_valuation(&rat(1, 9), &three), Some(-2));
        assert_eq!(rat_valuation(&rat(18, 5), &three), Some(2));
    }

    #[test]
    fn primes() {
        let odd: Vec<i64> = (0..40).filter(|&n| is_odd_prime(&BigInt::from(n))).collect();
        assert_eq!(odd, vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn inverse_mod_nine() {
        // 2 * 5 = 10 = 1 mod 9
        assert_eq!(
            mod_inverse(&BigInt::from(2), &BigInt::from(9)),
            Some(BigInt::from(5))
        );
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(9)), None);
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("a").is_err());
        assert!(parse_rational("--1").is_err());
        assert_eq!(render_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(render_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
