//! The field `Q(q)` as reduced ratios of integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, PolyParser};
use super::rational::Rational;
use crate::error::{NumericError, ParseError, Result};

/// `num / den` with `gcd(num, den) = 1` in `Z[q]` and `lc(den) > 0`.
///
/// Reduction includes integer content, so two equal rational functions have
/// identical fields and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        if den.lead().is_negative() {
            num = -&num;
            den = -&den;
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::constant(BigInt::from(n)))
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::reduce(
            Poly::constant(r.numer().clone()),
            Poly::constant(r.denom().clone()),
        )
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::from_poly(Poly::monomial(BigInt::one(), 1))
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = Poly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            Self {
                num: Poly::one(),
                den: m,
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Returns the value as a rational constant when it does not depend on `q`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| {
            Rational::new(self.num.coeff(0), self.den.coeff(0))
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            return Self::reduce(n, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            // coprime denominators give an already reduced sum
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let d = &self.den * &rhs.den;
            return Self::normalize_sign(n, d);
        }
        let b1 = self.den.exact_div(&g).expect("gcd divides");
        let d1 = rhs.den.exact_div(&g).expect("gcd divides");
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = t.gcd(&g);
        let (t, g) = if g2.is_one() {
            (t, g)
        } else {
            (
                t.exact_div(&g2).expect("gcd divides"),
                g.exact_div(&g2).expect("gcd divides"),
            )
        };
        let d = &(&b1 * &d1) * &g;
        Self::normalize_sign(t, d)
    }

    fn normalize_sign(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.lead().is_negative() {
            Self {
                num: -&num,
                den: -&den,
            }
        } else {
            Self { num, den }
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let div = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.exact_div(g).expect("gcd divides")
            }
        };
        let n = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let d = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        Self::normalize_sign(n, d)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::normalize_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        // reduced inputs stay reduced under powers
        Ok(Self::normalize_sign(base.num.pow(e), base.den.pow(e)))
    }

    /// Exact value at `q = q0`; fails when the reduced denominator vanishes.
    pub fn eval_at(&self, q0: &Rational) -> Result<Rational> {
        let d = self.den.eval_rational(q0);
        if d.is_zero() {
            return Err(NumericError::Pole(q0.to_string()));
        }
        Ok(self.num.eval_rational(q0) / d)
    }

    /// The substitution `q -> 1/q`, followed by canonicalization.
    pub fn substitute_inverse(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        // num(1/q)/den(1/q) = q^dd rev(num) / (q^dn rev(den))
        let mut n = self.num.reversed(dn);
        let mut d = self.den.reversed(dd);
        if dd >= dn {
            n = n.shift(dd - dn);
        } else {
            d = d.shift(dn - dd);
        }
        Self::reduce(n, d)
    }

    pub fn parse(s: &str) -> std::result::Result<Self, ParseError> {
        let mut p = PolyParser {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let num = side(&mut p)?;
        let den = if p.peek() == Some(b'/') {
            p.pos += 1;
            side(&mut p)?
        } else {
            Poly::one()
        };
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(ParseError::new(s, "trailing input"));
        }
        Self::new(num, den).map_err(|_| ParseError::new(s, "zero denominator"))
    }
}

fn side(p: &mut PolyParser<'_>) -> std::result::Result<Poly, ParseError> {
    if p.peek() == Some(b'(') {
        p.pos += 1;
        let inner = p.poly()?;
        if p.peek() != Some(b')') {
            return Err(ParseError::new(p.src, "unbalanced parenthesis"));
        }
        p.pos += 1;
        Ok(inner)
    } else {
        p.poly()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let plain_den = self.den.is_constant() && self.den.coeff(0).is_positive();
        if plain_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}
