//! Scalar backends: exact rationals, the rational function field `Q(q)`, and
//! finite-precision `p`-adic numbers.
//!
//! Every algorithm in the crate is written against [`Field`], which bundles
//! the arithmetic of one backend with the value of `q` it uses. The dynamic
//! [`FieldContext`] and [`Scalar`] pair exists for callers that choose the
//! backend at run time.

pub mod padic;
pub mod poly;
pub mod ratfunc;
pub mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use padic::PadicNumber;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::Rational;

use crate::error::{NumericError, ParseError, Result};
use rational::{rat_pow, rat_valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Function,
    Padic,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rat",
            Backend::Function => "func",
            Backend::Padic => "padic",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field of scalars together with its distinguished element `q`.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn backend(&self) -> Backend;
    fn q(&self) -> Self::Elem;
    /// The same backend with `q` replaced, e.g. by `1/q`.
    fn with_q(&self, q: Self::Elem) -> Result<Self>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Exact equality, or indistinguishability at shared precision (`p`-adic).
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let base = if e < 0 {
            self.div(&self.one(), a)?
        } else {
            a.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    fn q_pow(&self, e: i64) -> Result<Self::Elem> {
        self.pow(&self.q(), e)
    }

    /// `q^y` for a `p`-adic integer exponent; only the `p`-adic backend has one.
    fn q_power_padic(&self, y: &PadicNumber) -> Result<Self::Elem> {
        Err(NumericError::UnsupportedExponent(format!(
            "p-adic exponent {y} needs the p-adic backend"
        )))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn scale_int(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        self.mul(a, &self.from_bigint(n))
    }
}

/// Fields whose elements carry a `p`-adic valuation.
pub trait Valued: Field {
    /// `v_p(a)`, `None` for zero (or zero to the known precision).
    fn p_valuation(&self, a: &Self::Elem, p: u64) -> Option<i64>;
}

/// `Q` with a rational `q != 0, 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalField {
    q: Rational,
}

impl RationalField {
    pub fn new(q: Rational) -> Result<Self> {
        if q.is_one() || q.is_zero() {
            return Err(NumericError::InvalidQ(format!(
                "q = {q} is not allowed in the exact-rational backend"
            )));
        }
        Ok(Self { q })
    }

    pub fn q_value(&self) -> &Rational {
        &self.q
    }
}

impl Field for RationalField {
    type Elem = Rational;

    fn backend(&self) -> Backend {
        Backend::Rational
    }
    fn q(&self) -> Rational {
        self.q.clone()
    }
    fn with_q(&self, q: Rational) -> Result<Self> {
        Self::new(q)
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_bigint(&self, n: &BigInt) -> Rational {
        Rational::from_integer(n.clone())
    }
    fn from_rational(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if b.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(a / b)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
    fn render(&self, a: &Rational) -> String {
        rational::render_rational(a)
    }
    fn pow(&self, a: &Rational, e: i64) -> Result<Rational> {
        if e < 0 && a.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(rat_pow(a, e))
    }
}

impl Valued for RationalField {
    fn p_valuation(&self, a: &Rational, p: u64) -> Option<i64> {
        rat_valuation(a, &BigInt::from(p))
    }
}

/// `Q(q)`; `q` is the indeterminate unless replaced with [`Field::with_q`].
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionField {
    q: RationalFunction,
}

impl FunctionField {
    pub fn new() -> Self {
        Self {
            q: RationalFunction::q(),
        }
    }

    /// The field evaluated with `q` replaced by `1/q`.
    pub fn inverted() -> Self {
        Self {
            q: RationalFunction::q_pow(-1),
        }
    }
}

impl Default for FunctionField {
    fn default() -> Self {
        Self::new()
    }
}

impl Field for FunctionField {
    type Elem = RationalFunction;

    fn backend(&self) -> Backend {
        Backend::Function
    }
    fn q(&self) -> RationalFunction {
        self.q.clone()
    }
    fn with_q(&self, q: RationalFunction) -> Result<Self> {
        if q.is_zero() || q == RationalFunction::one() {
            return Err(NumericError::InvalidQ(q.to_string()));
        }
        Ok(Self { q })
    }
    fn zero(&self) -> RationalFunction {
        RationalFunction::zero()
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::one()
    }
    fn from_bigint(&self, n: &BigInt) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(n.clone()))
    }
    fn from_rational(&self, r: &Rational) -> RationalFunction {
        RationalFunction::from_rational(r)
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        a.div(b)
    }
    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        a == b
    }
    fn render(&self, a: &RationalFunction) -> String {
        a.to_string()
    }
    fn pow(&self, a: &RationalFunction, e: i64) -> Result<RationalFunction> {
        a.pow(e)
    }
    fn q_pow(&self, e: i64) -> Result<RationalFunction> {
        if self.q == RationalFunction::q() {
            return Ok(RationalFunction::q_pow(e));
        }
        self.q.pow(e)
    }
}

/// `Q_p` truncated at absolute precision `p^K`, with `|1 - q|_p < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicField {
    prime: u64,
    precision: i64,
    q: PadicNumber,
}

impl PadicField {
    pub fn new(prime: u64, precision: i64, q: &Rational) -> Result<Self> {
        let q = PadicNumber::from_rational(q, prime, precision)?;
        Self::with_padic_q(prime, precision, q)
    }

    pub fn with_padic_q(prime: u64, precision: i64, q: PadicNumber) -> Result<Self> {
        padic::check_prime(prime)?;
        if precision < 1 {
            return Err(NumericError::InvalidPrecision(precision));
        }
        let one = PadicNumber::from_int(1, prime, precision)?;
        let d = q.sub(&one);
        if d.valuation().is_some_and(|v| v < 1) {
            return Err(NumericError::InvalidQ(format!(
                "need |1 - q|_p < 1, got v_p(q - 1) = {}",
                d.valuation().unwrap()
            )));
        }
        Ok(Self {
            prime,
            precision,
            q: q.with_precision_cap(precision),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    fn cap(&self, a: PadicNumber) -> PadicNumber {
        a.with_precision_cap(self.precision)
    }

    pub fn embed(&self, r: &Rational) -> PadicNumber {
        PadicNumber::from_rational(r, self.prime, self.precision).expect("validated field")
    }
}

impl Field for PadicField {
    type Elem = PadicNumber;

    fn backend(&self) -> Backend {
        Backend::Padic
    }
    fn q(&self) -> PadicNumber {
        self.q.clone()
    }
    fn with_q(&self, q: PadicNumber) -> Result<Self> {
        Self::with_padic_q(self.prime, self.precision, q)
    }
    fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.prime, self.precision)
    }
    fn one(&self) -> PadicNumber {
        self.from_int(1)
    }
    fn from_bigint(&self, n: &BigInt) -> PadicNumber {
        self.embed(&Rational::from_integer(n.clone()))
    }
    fn from_rational(&self, r: &Rational) -> PadicNumber {
        self.embed(r)
    }
    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        self.cap(a.add(b))
    }
    fn sub(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        self.cap(a.sub(b))
    }
    fn mul(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        self.cap(a.mul(b))
    }
    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        a.neg()
    }
    fn div(&self, a: &PadicNumber, b: &PadicNumber) -> Result<PadicNumber> {
        Ok(self.cap(a.div(b)?))
    }
    fn is_zero(&self, a: &PadicNumber) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &PadicNumber, b: &PadicNumber) -> bool {
        a.eq_at_precision(b)
    }
    fn render(&self, a: &PadicNumber) -> String {
        a.to_string()
    }

    fn q_power_padic(&self, y: &PadicNumber) -> Result<PadicNumber> {
        padic_q_power(&self.q, y, self.precision)
    }
}

/// `q^y = sum_i C(y, i) (q - 1)^i` for a `p`-adic integer `y`.
///
/// `C(Y, i)` is an integer for the representative `Y` of `y`, so the term
/// valuation is at least `i * v_p(q - 1)` and the sum stops once that reaches
/// the working precision.
pub(crate) fn padic_q_power(q: &PadicNumber, y: &PadicNumber, cap: i64) -> Result<PadicNumber> {
    let p = q.prime();
    let one = PadicNumber::from_int(1, p, cap)?;
    let dq = q.sub(&one);
    let step = match dq.valuation() {
        Some(v) if v < 1 => {
            return Err(NumericError::UnsupportedExponent(
                "v_p(q - 1) = 0: q^y is not continuous in y".into(),
            ))
        }
        Some(v) => v,
        None => cap.max(1),
    };
    let big_y = y.integer_representative().ok_or_else(|| {
        NumericError::UnsupportedExponent(format!("exponent {y} is not a p-adic integer"))
    })?;
    // q^y - q^Y has valuation >= v_p(y - Y) + v_p(q - 1)
    let precision = cap.min(q.precision()).min(y.precision() + step);
    if precision < 1 {
        return Err(NumericError::PrecisionExhausted("q^y".into()));
    }
    let modulus = padic::p_pow(p, precision);
    let dq_int = dq.integer_representative().expect("v_p(q - 1) >= 1");
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    let mut dq_pow = BigInt::one();
    let mut i: i64 = 0;
    while i * step < precision {
        acc = (acc + &binom * &dq_pow) % &modulus;
        binom = binom * (&big_y - i) / (i + 1);
        dq_pow = (dq_pow * &dq_int) % &modulus;
        i += 1;
    }
    Ok(PadicNumber::from_rational(
        &Rational::from_integer(acc),
        p,
        precision,
    )?)
}

impl Valued for PadicField {
    fn p_valuation(&self, a: &PadicNumber, p: u64) -> Option<i64> {
        debug_assert_eq!(p, self.prime);
        a.valuation()
    }
}

/// An exponent or polynomial argument `x`: an integer, or (in the `p`-adic
/// backend) a `p`-adic integer.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Int(i64),
    Padic(PadicNumber),
}

impl From<i64> for Point {
    fn from(x: i64) -> Self {
        Point::Int(x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(x) => write!(f, "{x}"),
            Point::Padic(x) => write!(f, "{x}"),
        }
    }
}

/// `q^y` for an integer or `p`-adic `y`, realizing `q^y = (q - 1)[y]_q + 1`.
pub fn q_power_extended<F: Field>(field: &F, y: &Point) -> Result<F::Elem> {
    match y {
        Point::Int(k) => field.q_pow(*k),
        Point::Padic(y) => field.q_power_padic(y),
    }
}

/// A scalar from any backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Function(RationalFunction),
    Padic(PadicNumber),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Function(_) => Backend::Function,
            Scalar::Padic(_) => Backend::Padic,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(r) => rational::render_rational(r),
            Scalar::Function(f) => f.to_string(),
            Scalar::Padic(x) => x.to_string(),
        }
    }

    pub fn parse(backend: Backend, s: &str) -> std::result::Result<Self, ParseError> {
        Ok(match backend {
            Backend::Rational => Scalar::Rational(rational::parse_rational(s)?),
            Backend::Function => Scalar::Function(RationalFunction::parse(s)?),
            Backend::Padic => Scalar::Padic(PadicNumber::parse(s)?),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Run-time choice of backend.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldContext {
    Rational(RationalField),
    Function(FunctionField),
    Padic(PadicField),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

impl FieldContext {
    pub fn backend(&self) -> Backend {
        match self {
            FieldContext::Rational(_) => Backend::Rational,
            FieldContext::Function(_) => Backend::Function,
            FieldContext::Padic(_) => Backend::Padic,
        }
    }

    pub fn q(&self) -> Scalar {
        match self {
            FieldContext::Rational(f) => Scalar::Rational(f.q()),
            FieldContext::Function(f) => Scalar::Function(f.q()),
            FieldContext::Padic(f) => Scalar::Padic(f.q()),
        }
    }

    pub fn from_rational(&self, r: &Rational) -> Scalar {
        match self {
            FieldContext::Rational(f) => Scalar::Rational(f.from_rational(r)),
            FieldContext::Function(f) => Scalar::Function(f.from_rational(r)),
            FieldContext::Padic(f) => Scalar::Padic(f.from_rational(r)),
        }
    }
}

fn mismatch(ctx: &FieldContext, s: &Scalar) -> NumericError {
    NumericError::BackendMismatch(ctx.backend().name(), s.backend().name())
}

fn binary<F: Field>(
    f: &F,
    op: ArithOp,
    a: &F::Elem,
    b: &F::Elem,
) -> Result<F::Elem> {
    Ok(match op {
        ArithOp::Add => f.add(a, b),
        ArithOp::Sub => f.sub(a, b),
        ArithOp::Mul => f.mul(a, b),
        ArithOp::Div => f.div(a, b)?,
        ArithOp::Neg => f.neg(a),
    })
}

/// Arithmetic on run-time scalars; both operands must belong to `ctx`.
/// For [`ArithOp::Neg`] the second operand is ignored.
pub fn scalar_arith(ctx: &FieldContext, op: ArithOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
    match (ctx, a, b) {
        (FieldContext::Rational(f), Scalar::Rational(x), Scalar::Rational(y)) => {
            binary(f, op, x, y).map(Scalar::Rational)
        }
        (FieldContext::Function(f), Scalar::Function(x), Scalar::Function(y)) => {
            binary(f, op, x, y).map(Scalar::Function)
        }
        (FieldContext::Padic(f), Scalar::Padic(x), Scalar::Padic(y)) => {
            if x.prime() != f.prime() || y.prime() != f.prime() {
                return Err(NumericError::BackendMismatch("p-adic", "p-adic over another prime"));
            }
            binary(f, op, x, y).map(Scalar::Padic)
        }
        _ if a.backend() != ctx.backend() => Err(mismatch(ctx, a)),
        _ => Err(mismatch(ctx, b)),
    }
}

/// Equality within `ctx` (indistinguishability for `p`-adic scalars).
pub fn scalar_eq(ctx: &FieldContext, a: &Scalar, b: &Scalar) -> Result<bool> {
    match (ctx, a, b) {
        (FieldContext::Rational(f), Scalar::Rational(x), Scalar::Rational(y)) => Ok(f.equal(x, y)),
        (FieldContext::Function(f), Scalar::Function(x), Scalar::Function(y)) => Ok(f.equal(x, y)),
        (FieldContext::Padic(f), Scalar::Padic(x), Scalar::Padic(y)) => Ok(f.equal(x, y)),
        _ if a.backend() != ctx.backend() => Err(mismatch(ctx, a)),
        _ => Err(mismatch(ctx, b)),
    }
}

/// Exact evaluation of a rational function at a rational point.
pub fn ratfunc_eval_at(f: &RationalFunction, q0: &Rational) -> Result<Rational> {
    f.eval_at(q0)
}

/// `p`-adic embedding of a rational number.
pub fn padic_from_rational(r: &Rational, p: u64, precision: i64) -> Result<PadicNumber> {
    PadicNumber::from_rational(r, p, precision)
}

/// Tracked-precision division of `p`-adic numbers.
pub fn padic_div_tracked(a: &PadicNumber, b: &PadicNumber) -> Result<PadicNumber> {
    let quot = a.div(b)?;
    if quot.relative_precision() <= 0 && !quot.is_zero() {
        return Err(NumericError::PrecisionExhausted("quotient".into()));
    }
    Ok(quot)
}
