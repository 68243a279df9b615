//! Dense univariate polynomials in `q` with integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::ParseError;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Lowest power of `q` carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `q^k`; the low `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Coefficient list reversed over `0..=d`, i.e. `q^d * p(1/q)`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        // Horner over the numerator with a common power of the denominator.
        let (n, d) = (x.numer(), x.denom());
        let deg = match self.degree() {
            Some(d) => d,
            None => return Rational::zero(),
        };
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        Rational::new(acc, num_traits::pow(d.clone(), deg))
    }

    /// Exact quotient over the integers, or `None` when `divisor` does not
    /// divide `self` in `Z[q]`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let sd = self.degree()?;
        if sd < dd {
            return None;
        }
        let lead = divisor.lead();
        if divisor.is_constant() {
            let mut out = Vec::with_capacity(self.coeffs.len());
            for c in &self.coeffs {
                let (quot, rem) = c.div_rem(&lead);
                if !rem.is_zero() {
                    return None;
                }
                out.push(quot);
            }
            return Some(Self::new(out));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &qk * dc;
            }
            quot[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quot))
    }

    /// Pseudo-remainder: a multiple of `lc(b)^e * self mod b`.
    fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().cloned().unwrap();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Gcd via the primitive polynomial remainder sequence. Always succeeds.
    pub fn gcd_prs(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part().scale_content_of(other);
        }
        if other.is_zero() {
            return self.primitive_part().scale_content_of(self);
        }
        let c = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                a = Poly::one();
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    fn scale_content_of(self, src: &Poly) -> Poly {
        self.scale(&src.content())
    }

    /// Heuristic gcd by evaluation at a large integer and balanced
    /// digit reconstruction. Returns `None` when the heuristic gives up.
    fn gcd_heuristic(a: &Poly, b: &Poly) -> Option<Poly> {
        let da = a.degree()?;
        let db = b.degree()?;
        let norm = a.max_norm().min(b.max_norm());
        let mut xi: BigInt = norm * 2u32 + 29u32;
        for _ in 0..6 {
            if xi.bits() as usize * da.max(db) > 200_000 {
                return None;
            }
            let ga = a.eval_int(&xi);
            let gb = b.eval_int(&xi);
            let gamma = ga.gcd(&gb);
            if !gamma.is_zero() {
                let cand = Poly::from_balanced_digits(gamma, &xi).primitive_part();
                if !cand.is_zero() && a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some()
                {
                    return Some(cand);
                }
            }
            xi = xi * 73794u32 / 27011u32;
        }
        None
    }

    fn from_balanced_digits(mut gamma: BigInt, xi: &BigInt) -> Poly {
        let half = xi / 2u32;
        let mut out = Vec::new();
        while !gamma.is_zero() {
            let mut c = gamma.mod_floor(xi);
            if c > half {
                c -= xi;
            }
            gamma = (gamma - &c) / xi;
            out.push(c);
        }
        Poly::new(out)
    }

    /// Greatest common divisor in `Z[q]`, normalized with positive leading
    /// coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return self.gcd_prs(other);
        }
        let c = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return Poly::constant(c);
        }
        let a = self.primitive_part();
        let b = other.primitive_part();
        // common powers of q are cheap to split off first
        let low = a.low_degree().unwrap().min(b.low_degree().unwrap());
        let (a, b) = if low > 0 {
            (a.unshift(low), b.unshift(low))
        } else {
            (a, b)
        };
        let g = if a == b {
            a
        } else if a.is_constant() || b.is_constant() {
            Poly::one()
        } else {
            Self::gcd_heuristic(&a, &b).unwrap_or_else(|| a.gcd_prs(&b))
        };
        g.shift(low).scale(&c)
    }

    /// `self` raised to a nonnegative power.
    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn parse(s: &str) -> Result<Poly, ParseError> {
        let mut p = PolyParser {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let poly = p.poly()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(ParseError::new(s, "trailing input"));
        }
        Ok(poly)
    }
}

/// Exponents above this bound are rejected by the parser.
pub const MAX_PARSED_DEGREE: usize = 100_000;

pub(crate) struct PolyParser<'a> {
    pub(crate) src: &'a str,
    pub(crate) bytes: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> PolyParser<'a> {
    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::new(self.src, format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let src: &'a str = self.src;
        (self.pos > start).then(|| &src[start..self.pos])
    }

    pub(crate) fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut acc: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    Sign::Plus
                }
                Some(b'-') => {
                    self.pos += 1;
                    Sign::Minus
                }
                _ if first => Sign::Plus,
                _ => break,
            };
            first = false;
            let (c, k) = self.term()?;
            if acc.len() <= k {
                acc.resize(k + 1, BigInt::zero());
            }
            if sign == Sign::Minus {
                acc[k] -= c;
            } else {
                acc[k] += c;
            }
        }
        Ok(Poly::new(acc))
    }

    fn term(&mut self) -> Result<(BigInt, usize), ParseError> {
        let coeff = match self.digits() {
            Some(d) => Some(d.parse::<BigInt>().map_err(|_| self.err("bad integer"))?),
            None => None,
        };
        let has_q = match (coeff.is_some(), self.peek()) {
            (true, Some(b'*')) => {
                self.pos += 1;
                if self.peek() != Some(b'q') {
                    return Err(self.err("expected q after '*'"));
                }
                true
            }
            (_, Some(b'q')) => true,
            (true, _) => false,
            (false, _) => return Err(self.err("expected a term")),
        };
        let mut k = 0usize;
        if has_q {
            self.pos += 1;
            k = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                k = d
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k <= MAX_PARSED_DEGREE)
                    .ok_or_else(|| self.err("exponent out of range"))?;
            }
        }
        Ok((coeff.unwrap_or_else(BigInt::one), k))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("q")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o += s;
        }
        Poly::new(out)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (o, s) in out.iter_mut().zip(&rhs.coeffs) {
            *o -= s;
        }
        Poly::new(out)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_constant() {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.is_constant() {
            return rhs.scale(&self.coeffs[0]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
