//! Closed forms of the q-Euler families, the classical oracle, and the series
//! evaluator for the absolutely convergent regime.
//!
//! Every closed form is a finite sum over `l = 0..=n` of
//! `C(n, l) (-1)^l q^{lx} K(l)` scaled by `1/(1-q)^n`, where `K(l)` is the
//! value of the measure on `q^{l y}`: `2/(1+q^l)` for `mu_{-1}`, a product of
//! such factors for the higher orders, and a q-Pochhammer symbol once the
//! weights `q^{(h-j) x_j}` are present.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::numeric::rational::{binomial, factorial, Rational};
use crate::numeric::{q_power_extended, Field, Point, RationalField};
use crate::qkit::{choose2, gauss_binomial, q_bracket, q_bracket_at, q_pochhammer};

/// `(q^x)^l`.
fn qx_pow<F: Field>(f: &F, x: &Point, l: i64) -> Result<F::Elem> {
    match x {
        Point::Int(k) => f.q_pow(k * l),
        Point::Padic(_) => f.pow(&q_power_extended(f, x)?, l),
    }
}

/// `[x + m]_q = [m]_q + q^m [x]_q`.
pub fn bracket_shift<F: Field>(f: &F, x: &Point, m: i64) -> Result<F::Elem> {
    match x {
        Point::Int(k) => q_bracket(f, k + m),
        Point::Padic(_) => Ok(f.add(
            &q_bracket(f, m)?,
            &f.mul(&f.q_pow(m)?, &q_bracket_at(f, x)?),
        )),
    }
}

/// `1/(1-q)^n sum_l C(n,l) (-1)^l q^{lx} kernel(l)`.
pub(crate) fn l_sum<F: Field>(
    f: &F,
    n: u32,
    x: &Point,
    mut kernel: impl FnMut(i64) -> Result<F::Elem>,
) -> Result<F::Elem> {
    let mut acc = f.zero();
    for l in 0..=n as i64 {
        let c = f.from_bigint(&binomial(n as i64, l));
        let term = f.mul(&f.mul(&c, &qx_pow(f, x, l)?), &kernel(l)?);
        acc = if l % 2 == 0 {
            f.add(&acc, &term)
        } else {
            f.sub(&acc, &term)
        };
    }
    let one_minus_q = f.sub(&f.one(), &f.q());
    f.div(&acc, &f.pow(&one_minus_q, n as i64)?)
}

fn checked_div<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, what: &str) -> Result<F::Elem> {
    if f.is_zero(b) {
        return Err(NumericError::VanishingDenominator(format!(
            "{what} vanishes at q = {}",
            f.render(&f.q())
        )));
    }
    f.div(a, b)
}

/// `1 + q^e`.
fn one_plus_q_pow<F: Field>(f: &F, e: i64) -> Result<F::Elem> {
    Ok(f.add(&f.one(), &f.q_pow(e)?))
}

/// `E_{n,q}(x) = 2/(1-q)^n sum_l C(n,l) (-1)^l q^{lx}/(1+q^l)`, the
/// `mu_{-1}` integral of `[x+y]_q^n`.
pub fn euler_q<F: Field>(f: &F, n: u32, x: &Point) -> Result<F::Elem> {
    let two = f.from_int(2);
    l_sum(f, n, x, |l| checked_div(f, &two, &one_plus_q_pow(f, l)?, "1 + q^l"))
}

/// `E_{n,q}^{(r)}(x) = 2^r/(1-q)^n sum_l C(n,l) (-1)^l q^{lx} (1+q^l)^{-r}`.
pub fn euler_order_r<F: Field>(f: &F, n: u32, r: u32, x: &Point) -> Result<F::Elem> {
    require_order(r)?;
    let two_r = f.pow(&f.from_int(2), r as i64)?;
    l_sum(f, n, x, |l| {
        let den = f.pow(&one_plus_q_pow(f, l)?, r as i64)?;
        checked_div(f, &two_r, &den, "(1 + q^l)^r")
    })
}

/// `E_{n,q}^{(-r)}(x) = 2^{-r} sum_{m=0}^r C(r,m) [m+x]_q^n`.
pub fn euler_order_neg_r<F: Field>(f: &F, n: u32, r: u32, x: &Point) -> Result<F::Elem> {
    require_order(r)?;
    let mut acc = f.zero();
    for m in 0..=r as i64 {
        let c = f.from_bigint(&binomial(r as i64, m));
        acc = f.add(&acc, &f.mul(&c, &f.pow(&bracket_shift(f, x, m)?, n as i64)?));
    }
    f.div(&acc, &f.pow(&f.from_int(2), r as i64)?)
}

/// `1/(2^r (1-q)^n) sum_l C(n,l) (-1)^l q^{lx} (1+q^l)^r`.
pub fn euler_order_neg_r_lform<F: Field>(f: &F, n: u32, r: u32, x: &Point) -> Result<F::Elem> {
    require_order(r)?;
    let two_r = f.pow(&f.from_int(2), r as i64)?;
    let v = l_sum(f, n, x, |l| f.pow(&one_plus_q_pow(f, l)?, r as i64))?;
    f.div(&v, &two_r)
}

/// `(-q^{h-r+l}; q)_r = prod_{j=1}^r (1 + q^{h-j+l})`.
fn hr_pochhammer<F: Field>(f: &F, h: i64, r: u32, l: i64) -> Result<F::Elem> {
    let b = f.neg(&f.q_pow(h - r as i64 + l)?);
    Ok(q_pochhammer(f, &b, r))
}

/// `E_{n,q}^{(h,r)}(x) = 2^r/(1-q)^n sum_l C(n,l) (-1)^l q^{lx}/(-q^{h-r+l}; q)_r`.
pub fn euler_hr<F: Field>(f: &F, n: u32, h: i64, r: u32, x: &Point) -> Result<F::Elem> {
    require_order(r)?;
    let two_r = f.pow(&f.from_int(2), r as i64)?;
    l_sum(f, n, x, |l| {
        checked_div(f, &two_r, &hr_pochhammer(f, h, r, l)?, "(-q^{h-r+l}; q)_r")
    })
}

/// The same family with the denominator written as `(-q^{h-1+l}; q^{-1})_r`,
/// evaluated in the field with `q` replaced by `1/q`.
pub fn euler_hr_inverse_base<F: Field>(
    f: &F,
    n: u32,
    h: i64,
    r: u32,
    x: &Point,
) -> Result<F::Elem> {
    require_order(r)?;
    let inv = f.with_q(f.div(&f.one(), &f.q())?)?;
    let two_r = f.pow(&f.from_int(2), r as i64)?;
    l_sum(f, n, x, |l| {
        let b = f.neg(&f.q_pow(h - 1 + l)?);
        checked_div(f, &two_r, &q_pochhammer(&inv, &b, r), "(-q^{h-1+l}; q^{-1})_r")
    })
}

/// `E_{n,q}^{(h,-r)}(x) = 2^{-r} sum_{m=0}^r q^{C(m,2)} q^{(h-r)m} C(r,m)_q [m+x]_q^n`.
pub fn euler_h_neg_r<F: Field>(f: &F, n: u32, h: i64, r: u32, x: &Point) -> Result<F::Elem> {
    require_order(r)?;
    let mut acc = f.zero();
    for m in 0..=r as i64 {
        let c = f.mul(
            &gauss_binomial(f, r as i64, m)?,
            &f.q_pow(choose2(m) + (h - r as i64) * m)?,
        );
        acc = f.add(&acc, &f.mul(&c, &f.pow(&bracket_shift(f, x, m)?, n as i64)?));
    }
    f.div(&acc, &f.pow(&f.from_int(2), r as i64)?)
}

/// `1/(2^r (1-q)^n) sum_l C(n,l) (-1)^l q^{lx} (-q^{h-r+l}; q)_r`.
pub fn euler_h_neg_r_lform<F: Field>(
    f: &F,
    n: u32,
    h: i64,
    r: u32,
    x: &Point,
) -> Result<F::Elem> {
    require_order(r)?;
    let two_r = f.pow(&f.from_int(2), r as i64)?;
    let v = l_sum(f, n, x, |l| hr_pochhammer(f, h, r, l))?;
    f.div(&v, &two_r)
}

fn require_order(r: u32) -> Result<()> {
    if r == 0 {
        return Err(NumericError::InvalidArgument("order r must be >= 1".into()));
    }
    Ok(())
}

fn require_weights(w: &[i64], d: &[i64]) -> Result<()> {
    if w.is_empty() || w.len() != d.len() {
        return Err(NumericError::InvalidArgument(format!(
            "need equal nonzero counts of weights ({}) and exponents ({})",
            w.len(),
            d.len()
        )));
    }
    Ok(())
}

/// `prod_j (1 + q^{delta_j}) / (1 + q^{delta_j + l w_j})`.
fn weighted_kernel<F: Field>(f: &F, l: i64, w: &[i64], d: &[i64]) -> Result<F::Elem> {
    let mut acc = f.one();
    for (wj, dj) in w.iter().zip(d) {
        let den = one_plus_q_pow(f, dj + l * wj)?;
        acc = f.mul(&acc, &checked_div(f, &one_plus_q_pow(f, *dj)?, &den, "1 + q^{delta + l w}")?);
    }
    Ok(acc)
}

/// `2^r / prod_j (1 + q^{l w_j + delta_j})`.
fn weighted_star_kernel<F: Field>(f: &F, l: i64, w: &[i64], d: &[i64]) -> Result<F::Elem> {
    let mut den = f.one();
    for (wj, dj) in w.iter().zip(d) {
        den = f.mul(&den, &one_plus_q_pow(f, l * wj + dj)?);
    }
    let two_r = f.pow(&f.from_int(2), w.len() as i64)?;
    checked_div(f, &two_r, &den, "prod (1 + q^{l w + delta})")
}

/// The integral of `[x + sum_j w_j x_j]_q^n` against `prod_j mu_{-q^{delta_j}}`:
/// `1/(1-q)^n sum_l C(n,l) (-1)^l q^{lx} prod_j (1+q^{delta_j})/(1+q^{delta_j+l w_j})`.
pub fn euler_weighted<F: Field>(
    f: &F,
    n: u32,
    x: &Point,
    w: &[i64],
    d: &[i64],
) -> Result<F::Elem> {
    require_weights(w, d)?;
    l_sum(f, n, x, |l| weighted_kernel(f, l, w, d))
}

/// The weighted sum without `1/(1-q)^n`.
pub fn euler_weighted_literal<F: Field>(
    f: &F,
    n: u32,
    x: &Point,
    w: &[i64],
    d: &[i64],
) -> Result<F::Elem> {
    let v = euler_weighted(f, n, x, w, d)?;
    Ok(f.mul(&v, &f.pow(&f.sub(&f.one(), &f.q()), n as i64)?))
}

/// The integral of `[x + sum_j w_j x_j]_q^n q^{sum_j delta_j x_j}` against
/// `mu_{-1}` in each coordinate:
/// `2^r/(1-q)^n sum_l C(n,l) (-1)^l q^{lx} / prod_j (1+q^{l w_j+delta_j})`.
pub fn euler_weighted_star<F: Field>(
    f: &F,
    n: u32,
    x: &Point,
    w: &[i64],
    d: &[i64],
) -> Result<F::Elem> {
    require_weights(w, d)?;
    l_sum(f, n, x, |l| weighted_star_kernel(f, l, w, d))
}

/// The starred sum without `1/(1-q)^n`.
pub fn euler_weighted_star_literal<F: Field>(
    f: &F,
    n: u32,
    x: &Point,
    w: &[i64],
    d: &[i64],
) -> Result<F::Elem> {
    let v = euler_weighted_star(f, n, x, w, d)?;
    Ok(f.mul(&v, &f.pow(&f.sub(&f.one(), &f.q()), n as i64)?))
}

/// Coefficients `a_0..a_M` of an ordinary power series.
type Series = Vec<Rational>;

fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Series {
    let mut out = vec![Rational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_recip(a: &[Rational], len: usize) -> Series {
    let mut out = vec![Rational::zero(); len];
    out[0] = a[0].recip();
    for k in 1..len {
        let mut s = Rational::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &out[k - j];
        }
        out[k] = -s * &out[0];
    }
    out
}

fn exp_series(x: &Rational, len: usize) -> Series {
    (0..len)
        .map(|k| num_traits::pow(x.clone(), k) / Rational::from_integer(factorial(k as u32)))
        .collect()
}

/// `E_n^{(r)}(x)` from `(2/(e^t+1))^r e^{xt}` by power-series division and
/// powering.
pub fn classical_euler(n: u32, x: &Rational, r: u32) -> Rational {
    let len = n as usize + 1;
    let mut denom = exp_series(&Rational::one(), len);
    denom[0] += Rational::one();
    let kernel: Series = series_recip(&denom, len)
        .into_iter()
        .map(|c| c * Rational::from_integer(2.into()))
        .collect();
    let mut acc = exp_series(x, len);
    for _ in 0..r {
        acc = series_mul(&acc, &kernel, len);
    }
    &acc[n as usize] * Rational::from_integer(factorial(n))
}

/// `E_0..E_max` from `(E+1)^n + E_n = 2 delta_{n,0}`.
pub fn classical_euler_numbers_umbral(max: u32) -> Vec<Rational> {
    let mut e: Vec<Rational> = Vec::with_capacity(max as usize + 1);
    for n in 0..=max as i64 {
        let mut s = if n == 0 {
            Rational::from_integer(2.into())
        } else {
            Rational::zero()
        };
        for (k, ek) in e.iter().enumerate() {
            s -= Rational::from_integer(binomial(n, k as i64)) * ek;
        }
        e.push(s / Rational::from_integer(2.into()));
    }
    e
}

/// `E_n^{(r)}(x)` from the umbral numbers: the order-`r` numbers are the
/// `r`-fold binomial convolution, then `E_n^{(r)}(x) = sum_k C(n,k) E_k^{(r)} x^{n-k}`.
pub fn classical_euler_umbral(n: u32, x: &Rational, r: u32) -> Rational {
    let base = classical_euler_numbers_umbral(n);
    let mut order = vec![Rational::zero(); n as usize + 1];
    order[0] = Rational::one();
    for _ in 0..r {
        order = (0..=n as i64)
            .map(|m| {
                (0..=m).fold(Rational::zero(), |acc, k| {
                    acc + Rational::from_integer(binomial(m, k))
                        * &order[k as usize]
                        * &base[(m - k) as usize]
                })
            })
            .collect();
    }
    (0..=n as i64).fold(Rational::zero(), |acc, k| {
        acc + Rational::from_integer(binomial(n as i64, k))
            * &order[k as usize]
            * num_traits::pow(x.clone(), (n as i64 - k) as usize)
    })
}

/// Which family an [`EulerFamilySpec`] selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Basic,
    #[serde(rename = "r")]
    OrderR,
    NegR,
    Hr,
    HNegR,
    Weighted,
    WeightedStar,
    Classical,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::Basic,
        FamilyKind::OrderR,
        FamilyKind::NegR,
        FamilyKind::Hr,
        FamilyKind::HNegR,
        FamilyKind::Weighted,
        FamilyKind::WeightedStar,
        FamilyKind::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Basic => "basic",
            FamilyKind::OrderR => "r",
            FamilyKind::NegR => "neg-r",
            FamilyKind::Hr => "hr",
            FamilyKind::HNegR => "h-neg-r",
            FamilyKind::Weighted => "weighted",
            FamilyKind::WeightedStar => "weighted-star",
            FamilyKind::Classical => "classical",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn uses_r(self) -> bool {
        matches!(
            self,
            FamilyKind::OrderR | FamilyKind::NegR | FamilyKind::Hr | FamilyKind::HNegR
        )
    }

    fn uses_h(self) -> bool {
        matches!(self, FamilyKind::Hr | FamilyKind::HNegR)
    }

    fn uses_weights(self) -> bool {
        matches!(self, FamilyKind::Weighted | FamilyKind::WeightedStar)
    }
}

/// One member of one family. Parameters a kind does not use must be absent.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFamilySpec {
    pub kind: FamilyKind,
    pub n: u32,
    pub r: Option<u32>,
    pub h: Option<i64>,
    pub x: Point,
    pub weights: Vec<i64>,
    pub deltas: Vec<i64>,
}

impl EulerFamilySpec {
    pub fn new(kind: FamilyKind, n: u32) -> Self {
        Self {
            kind,
            n,
            r: None,
            h: None,
            x: Point::Int(0),
            weights: Vec::new(),
            deltas: Vec::new(),
        }
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_h(mut self, h: i64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_x(mut self, x: impl Into<Point>) -> Self {
        self.x = x.into();
        self
    }

    pub fn with_weights(mut self, weights: Vec<i64>, deltas: Vec<i64>) -> Self {
        self.weights = weights;
        self.deltas = deltas;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.kind;
        let bad = |what: &str| {
            Err(NumericError::InvalidArgument(format!(
                "family {} {what}",
                k.name()
            )))
        };
        match (k.uses_r(), self.r) {
            (true, None) => return bad("needs r"),
            (true, Some(0)) => return bad("needs r >= 1"),
            (false, Some(_)) if k != FamilyKind::Classical => return bad("does not take r"),
            _ => {}
        }
        match (k.uses_h(), self.h) {
            (true, None) => return bad("needs h"),
            (false, Some(_)) => return bad("does not take h"),
            _ => {}
        }
        if k.uses_weights() {
            if self.weights.is_empty() || self.weights.len() != self.deltas.len() {
                return bad("needs equally long nonempty weight and exponent lists");
            }
        } else if !self.weights.is_empty() || !self.deltas.is_empty() {
            return bad("does not take weights");
        }
        if k == FamilyKind::Classical && matches!(self.x, Point::Padic(_)) {
            return bad("takes an integer x");
        }
        Ok(())
    }
}

/// The family value selected by `spec`.
pub fn evaluate<F: Field>(f: &F, spec: &EulerFamilySpec) -> Result<F::Elem> {
    spec.validate()?;
    let (n, x) = (spec.n, &spec.x);
    let r = spec.r.unwrap_or(1);
    let h = spec.h.unwrap_or(0);
    match spec.kind {
        FamilyKind::Basic => euler_q(f, n, x),
        FamilyKind::OrderR => euler_order_r(f, n, r, x),
        FamilyKind::NegR => euler_order_neg_r(f, n, r, x),
        FamilyKind::Hr => euler_hr(f, n, h, r, x),
        FamilyKind::HNegR => euler_h_neg_r(f, n, h, r, x),
        FamilyKind::Weighted => euler_weighted(f, n, x, &spec.weights, &spec.deltas),
        FamilyKind::WeightedStar => euler_weighted_star(f, n, x, &spec.weights, &spec.deltas),
        FamilyKind::Classical => {
            let Point::Int(xi) = x else { unreachable!("validated") };
            let xr = Rational::from_integer(BigInt::from(*xi));
            Ok(f.from_rational(&classical_euler(n, &xr, r)))
        }
    }
}

/// Coefficients `c_0..c_M` of `sum_n c_n t^n/n!` for the family of `spec`
/// (whose own `n` is ignored).
#[derive(Debug, Clone)]
pub struct GeneratingSeries<E> {
    pub order: u32,
    pub coeffs: Vec<E>,
}

pub fn generating_series<F: Field>(
    f: &F,
    spec: &EulerFamilySpec,
    order: u32,
) -> Result<GeneratingSeries<F::Elem>> {
    let coeffs = (0..=order)
        .map(|n| {
            let mut s = spec.clone();
            s.n = n;
            evaluate(f, &s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratingSeries { order, coeffs })
}

/// A truncated convergent series against the closed form.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub terms: usize,
    pub partial: Rational,
    pub closed_form: Rational,
    pub error: Rational,
    pub remainder_bound: Rational,
}

/// `M`-term partial sums of the two series that converge absolutely for
/// `|q| < 1`:
///
/// * `hr` with `h > r`: `2^r sum_m q^{(h-r)m} (-1)^m C(m+r-1, m)_q [x+m]_q^n`;
/// * `weighted` with `r = 1`, `w = 1`, `delta >= 1`:
///   `(1+q^delta) sum_m (-1)^m q^{delta m} [x+m]_q^n`.
///
/// Anything else diverges as an ordinary series; those identities are
/// verified algebraically through the finite q-binomial formula instead.
pub fn series_tail_eval(q: &Rational, spec: &EulerFamilySpec, terms: usize) -> Result<SeriesReport> {
    spec.validate()?;
    let one = Rational::one();
    let aq = q.abs();
    if aq >= one {
        return Err(NumericError::Divergent(format!(
            "series evaluation needs |q| < 1, got q = {q}; use the q-binomial check instead"
        )));
    }
    let f = RationalField::new(q.clone())?;
    let Point::Int(x) = spec.x else {
        return Err(NumericError::InvalidArgument("series evaluation takes an integer x".into()));
    };
    let n = spec.n as i64;
    // |[y]_q| <= 2/(1-|q|) for |q| < 1
    let bracket_bound = num_traits::pow(Rational::from_integer(2.into()) / (&one - &aq), spec.n as usize);
    let (decay, lead, coeff_bound, term): (i64, Rational, Rational, Box<dyn Fn(i64) -> Result<Rational>>) =
        match spec.kind {
            FamilyKind::Hr => {
                let (h, r) = (spec.h.unwrap(), spec.r.unwrap());
                if h <= r as i64 {
                    return Err(NumericError::Divergent(format!(
                        "the (h, r) series needs h > r (got h = {h}, r = {r}); \
                         use the q-binomial check for the algebraic identity"
                    )));
                }
                let mut b = one.clone();
                let mut qj = one.clone();
                for _ in 1..r {
                    qj *= &aq;
                    b = b * (&one + &qj) / (&one - &qj);
                }
                let two_r = num_traits::pow(Rational::from_integer(2.into()), r as usize);
                let f2 = f.clone();
                (
                    h - r as i64,
                    two_r.clone(),
                    b,
                    Box::new(move |m| {
                        let c = gauss_binomial(&f2, m + r as i64 - 1, m)?;
                        let v = &two_r * c * f2.q_pow((h - r as i64) * m)? * f2.pow(&q_bracket(&f2, x + m)?, n)?;
                        Ok(if m % 2 == 0 { v } else { -v })
                    }),
                )
            }
            FamilyKind::Weighted
                if spec.weights == [1] && spec.deltas.len() == 1 && spec.deltas[0] >= 1 =>
            {
                let d = spec.deltas[0];
                let pre = &one + f.q_pow(d)?;
                let f2 = f.clone();
                let pre2 = pre.clone();
                (
                    d,
                    pre.abs(),
                    one.clone(),
                    Box::new(move |m| {
                        let v = &pre2 * f2.q_pow(d * m)? * f2.pow(&q_bracket(&f2, x + m)?, n)?;
                        Ok(if m % 2 == 0 { v } else { -v })
                    }),
                )
            }
            _ => {
                return Err(NumericError::Divergent(format!(
                    "no absolutely convergent series for family {}",
                    spec.kind.name()
                )))
            }
        };
    let mut partial = Rational::zero();
    for m in 0..terms as i64 {
        partial += term(m)?;
    }
    let closed_form = evaluate(&f, spec)?;
    let error = (&partial - &closed_form).abs();
    let ratio = num_traits::pow(aq.clone(), decay as usize);
    let remainder_bound =
        lead * coeff_bound * bracket_bound * num_traits::pow(ratio.clone(), terms) / (&one - &ratio);
    Ok(SeriesReport {
        terms,
        partial,
        closed_form,
        error,
        remainder_bound,
    })
}
