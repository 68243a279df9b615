//! Finite-precision elements of `Q_p` for odd `p`.
//!
//! A nonzero value is `p^v * u` with `u` a unit known modulo `p^(K - v)`, where
//! `K` is the absolute precision: the value is known modulo `p^K`. A value that
//! is `0 mod p^K` is the zero of precision `K`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rational::{is_odd_prime, mod_inverse, split_p, Rational};
use crate::error::{NumericError, ParseError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    precision: i64,
    /// `None` is the zero sentinel.
    valuation: Option<i64>,
    unit: BigInt,
}

pub(crate) fn p_pow(p: u64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    num_traits::pow(BigInt::from(p), e as usize)
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(&BigInt::from(p)) {
        Ok(())
    } else {
        Err(NumericError::InvalidPrime(p.to_string()))
    }
}

impl PadicNumber {
    pub fn zero(prime: u64, precision: i64) -> Self {
        Self {
            prime,
            precision,
            valuation: None,
            unit: BigInt::zero(),
        }
    }

    /// `p^base * s` known modulo `p^precision`, brought to normal form.
    fn normalize(prime: u64, base: i64, s: BigInt, precision: i64) -> Self {
        let rel = precision - base;
        if rel <= 0 || s.is_zero() {
            return Self::zero(prime, precision);
        }
        let p = BigInt::from(prime);
        let s = s.mod_floor(&p_pow(prime, rel));
        if s.is_zero() {
            return Self::zero(prime, precision);
        }
        let (t, unit) = split_p(&s, &p);
        Self {
            prime,
            precision,
            valuation: Some(base + t),
            unit,
        }
    }

    /// Embeds a rational number into `Q_p` to absolute precision `p^precision`.
    pub fn from_rational(r: &Rational, prime: u64, precision: i64) -> Result<Self> {
        check_prime(prime)?;
        if precision < 1 {
            return Err(NumericError::InvalidPrecision(precision));
        }
        if r.numer().is_zero() {
            return Ok(Self::zero(prime, precision));
        }
        let p = BigInt::from(prime);
        let (vn, un) = split_p(r.numer(), &p);
        let (vd, ud) = split_p(r.denom(), &p);
        let v = vn - vd;
        let rel = precision - v;
        if rel <= 0 {
            return Ok(Self::zero(prime, precision));
        }
        let modulus = p_pow(prime, rel);
        let inv = mod_inverse(&ud, &modulus).expect("denominator unit is invertible");
        Ok(Self::normalize(prime, v, un * inv, precision))
    }

    pub fn from_int(n: i64, prime: u64, precision: i64) -> Result<Self> {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)), prime, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Absolute precision `K`: the value is known modulo `p^K`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// `None` for zero (to the known precision).
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Number of significant digits, `K - v`; zero for zero.
    pub fn relative_precision(&self) -> i64 {
        self.valuation.map_or(0, |v| self.precision - v)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// Lowers the absolute precision to at most `cap`.
    pub fn with_precision_cap(&self, cap: i64) -> Self {
        if self.precision <= cap {
            return self.clone();
        }
        match self.valuation {
            None => Self::zero(self.prime, cap),
            Some(v) => Self::normalize(self.prime, v, self.unit.clone(), cap),
        }
    }

    /// `p^v * u` as an exact rational; a representative of the class.
    pub fn to_rational(&self) -> Rational {
        match self.valuation {
            None => Rational::zero(),
            Some(v) if v >= 0 => Rational::from_integer(&self.unit * p_pow(self.prime, v)),
            Some(v) => Rational::new(self.unit.clone(), p_pow(self.prime, -v)),
        }
    }

    /// Integer representative in `[0, p^K)` of a `p`-adic integer.
    pub fn integer_representative(&self) -> Option<BigInt> {
        match self.valuation {
            None => Some(BigInt::zero()),
            Some(v) if v >= 0 => Some(&self.unit * p_pow(self.prime, v)),
            Some(_) => None,
        }
    }

    /// Base-`p` digits of the unit, least significant first, `K - v` of them.
    pub fn digits(&self) -> Vec<u64> {
        let n = self.relative_precision();
        let p = BigInt::from(self.prime);
        let mut u = self.unit.clone();
        let mut out = Vec::with_capacity(n.max(0) as usize);
        for _ in 0..n {
            let (quot, rem) = u.div_rem(&p);
            out.push(rem.to_u64().unwrap_or(0));
            u = quot;
        }
        out
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "p-adic numbers over different primes");
    }

    pub fn neg(&self) -> Self {
        match self.valuation {
            None => self.clone(),
            Some(v) => Self::normalize(self.prime, v, -&self.unit, self.precision),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_prime(other);
        let k = self.precision.min(other.precision);
        match (self.valuation, other.valuation) {
            (None, None) => Self::zero(self.prime, k),
            (None, Some(_)) => other.with_precision_cap(k),
            (Some(_), None) => self.with_precision_cap(k),
            (Some(va), Some(vb)) => {
                let vm = va.min(vb);
                let s = &self.unit * p_pow(self.prime, va - vm)
                    + &other.unit * p_pow(self.prime, vb - vm);
                Self::normalize(self.prime, vm, s, k)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_prime(other);
        match (self.valuation, other.valuation) {
            (None, None) => Self::zero(self.prime, self.precision + other.precision),
            (None, Some(vb)) => Self::zero(self.prime, self.precision + vb),
            (Some(va), None) => Self::zero(self.prime, other.precision + va),
            (Some(va), Some(vb)) => {
                let rel = self.relative_precision().min(other.relative_precision());
                let v = va + vb;
                Self::normalize(self.prime, v, &self.unit * &other.unit, v + rel)
            }
        }
    }

    /// Quotient with tracked precision: the relative precision of the result
    /// is the smaller of the operands' relative precisions.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other);
        let Some(vb) = other.valuation else {
            return Err(NumericError::PrecisionExhausted(format!(
                "divisor is 0 mod {}^{}",
                self.prime, other.precision
            )));
        };
        match self.valuation {
            None => Ok(Self::zero(self.prime, self.precision - vb)),
            Some(va) => {
                let rel = self.relative_precision().min(other.relative_precision());
                let modulus = p_pow(self.prime, rel);
                let inv = mod_inverse(&other.unit, &modulus).expect("unit");
                let v = va - vb;
                Ok(Self::normalize(self.prime, v, &self.unit * inv, v + rel))
            }
        }
    }

    /// Equality up to the smaller of the two precisions.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Parses the rendering produced by `Display`.
    pub fn parse(s: &str) -> std::result::Result<Self, ParseError> {
        let err = |m: &str| ParseError::new(s, m);
        let mut parts = s.split_whitespace();
        let head = parts.next().ok_or_else(|| err("empty input"))?;
        let prime: u64 = head
            .strip_suffix("-adic")
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| err("expected '<p>-adic'"))?;
        if prime > u32::MAX as u64 || check_prime(prime).is_err() {
            return Err(err("p must be an odd prime below 2^32"));
        }
        let val = parts
            .next()
            .and_then(|t| t.strip_prefix("val="))
            .ok_or_else(|| err("expected val="))?;
        let valuation = if val == "inf" {
            None
        } else {
            Some(val.parse::<i64>().map_err(|_| err("bad valuation"))?)
        };
        let digits_tok = parts
            .next()
            .and_then(|t| t.strip_prefix("digits=["))
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("expected digits=[...]"))?;
        let digits: Vec<u64> = if digits_tok.is_empty() {
            Vec::new()
        } else {
            digits_tok
                .split(',')
                .map(|d| d.parse::<u64>().ok().filter(|&d| d < prime))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("digits must be integers below p"))?
        };
        let precision: i64 = parts
            .next()
            .and_then(|t| t.strip_prefix("prec="))
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("expected prec="))?;
        if parts.next().is_some() {
            return Err(err("trailing input"));
        }
        if precision < 1 || precision > 1_000_000 {
            return Err(err("precision out of range"));
        }
        let Some(v) = valuation else {
            if !digits.is_empty() {
                return Err(err("zero carries no digits"));
            }
            return Ok(Self::zero(prime, precision));
        };
        if v.checked_sub(precision).is_none() || v.abs() > 1_000_000 {
            return Err(err("valuation out of range"));
        }
        if digits.len() as i64 != precision - v {
            return Err(err("digit count must equal prec - val"));
        }
        if digits[0] == 0 {
            return Err(err("leading digit must be a unit"));
        }
        let p = BigInt::from(prime);
        let unit = digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &p + BigInt::from(d));
        Ok(Self {
            prime,
            precision,
            valuation: Some(v),
            unit,
        })
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        let val = self
            .valuation
            .map_or_else(|| "inf".to_string(), |v| v.to_string());
        write!(
            f,
            "{}-adic val={} digits=[{}] prec={}",
            self.prime,
            val,
            digits.join(","),
            self.precision
        )
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber({self})")
    }
}

#[cfg(test)]
fn is_unit_mod_p(u: &BigInt, p: u64) -> bool {
    !(u % BigInt::from(p)).is_zero()
}
