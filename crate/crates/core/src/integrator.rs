//! Fermionic `p`-adic integrals as truncated Riemann sums.
//!
//! At level `N` the integral of `f` against `mu_{-q^delta}` is approximated by
//!
//! ```text
//! (1 + q^delta)/(1 + q^{delta p^N}) * sum_{x < p^N} f(x) (-q^delta)^x
//! ```
//!
//! and the multivariate integral is the iterated sum with one such factor per
//! coordinate. Integrands of the form `g(offset + sum_j c_j x_j)` are summed by
//! convolving the per-coordinate weight sequences instead of walking the grid.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{NumericError, Result};
use crate::numeric::rational::is_odd_prime;
use crate::numeric::{Field, Valued};
use crate::qkit::q_bracket;

/// Default ceiling on the number of grid points a single level may cover.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

type GridFn<F> = Arc<dyn Fn(&F, &[i64]) -> Result<<F as Field>::Elem> + Send + Sync>;
type LineFn<F> = Arc<dyn Fn(&F, i64, usize) -> Result<Vec<<F as Field>::Elem>> + Send + Sync>;

enum Shape<F: Field> {
    Grid(GridFn<F>),
    Linear {
        offset: i64,
        coeffs: Vec<i64>,
        /// `g(lo), g(lo+1), ..., g(lo+len-1)`
        line: LineFn<F>,
    },
}

impl<F: Field> Clone for Shape<F> {
    fn clone(&self) -> Self {
        match self {
            Shape::Grid(g) => Shape::Grid(g.clone()),
            Shape::Linear {
                offset,
                coeffs,
                line,
            } => Shape::Linear {
                offset: *offset,
                coeffs: coeffs.clone(),
                line: line.clone(),
            },
        }
    }
}

/// A deterministic function of one or more nonnegative residues.
#[derive(Clone)]
pub struct Integrand<F: Field> {
    arity: usize,
    shape: Shape<F>,
}

impl<F: Field + 'static> Integrand<F> {
    /// Arbitrary `f(x_1, ..., x_r)`; always summed over the full grid.
    pub fn grid(
        arity: usize,
        f: impl Fn(&F, &[i64]) -> Result<F::Elem> + Send + Sync + 'static,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(NumericError::InvalidArgument("integrand arity must be >= 1".into()));
        }
        Ok(Self {
            arity,
            shape: Shape::Grid(Arc::new(f)),
        })
    }

    /// `g(offset + sum_j c_j x_j)` with `g` given pointwise.
    pub fn linear(
        offset: i64,
        coeffs: Vec<i64>,
        g: impl Fn(&F, i64) -> Result<F::Elem> + Send + Sync + 'static,
    ) -> Result<Self> {
        let g = Arc::new(g);
        Self::linear_with_line(
            offset,
            coeffs,
            Arc::new(move |f: &F, lo: i64, len: usize| {
                (0..len as i64).map(|i| g(f, lo + i)).collect()
            }),
        )
    }

    fn linear_with_line(offset: i64, coeffs: Vec<i64>, line: LineFn<F>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(NumericError::InvalidArgument("integrand arity must be >= 1".into()));
        }
        Ok(Self {
            arity: coeffs.len(),
            shape: Shape::Linear {
                offset,
                coeffs,
                line,
            },
        })
    }

    /// Single-variable `g(x)`.
    pub fn univariate(g: impl Fn(&F, i64) -> Result<F::Elem> + Send + Sync + 'static) -> Self {
        Self::linear(0, vec![1], g).expect("arity 1")
    }

    /// `q^{l y} [y]_q^n` at `y = offset + sum_j c_j x_j`.
    pub fn bracket_power(offset: i64, coeffs: Vec<i64>, n: u32, l: i64) -> Result<Self> {
        let line: LineFn<F> = Arc::new(move |f: &F, lo: i64, len: usize| {
            let q = f.q();
            let one = f.one();
            let ql = f.q_pow(l)?;
            let mut b = q_bracket(f, lo)?;
            let mut w = f.q_pow(l * lo)?;
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                out.push(f.mul(&w, &f.pow(&b, n as i64)?));
                b = f.add(&one, &f.mul(&q, &b));
                w = f.mul(&w, &ql);
            }
            Ok(out)
        });
        Self::linear_with_line(offset, coeffs, line)
    }

    /// The constant function 1 in `arity` variables.
    pub fn one(arity: usize) -> Result<Self> {
        Self::bracket_power(0, vec![0; arity], 0, 0)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `f_n(x) = f(x + n)` in the first coordinate.
    pub fn shifted(&self, n: i64) -> Self {
        let shape = match &self.shape {
            Shape::Linear {
                offset,
                coeffs,
                line,
            } => Shape::Linear {
                offset: offset + n * coeffs[0],
                coeffs: coeffs.clone(),
                line: line.clone(),
            },
            Shape::Grid(g) => {
                let g = g.clone();
                Shape::Grid(Arc::new(move |f: &F, x: &[i64]| {
                    let mut y = x.to_vec();
                    y[0] += n;
                    g(f, &y)
                }))
            }
        };
        Self {
            arity: self.arity,
            shape,
        }
    }

    pub fn eval(&self, f: &F, x: &[i64]) -> Result<F::Elem> {
        if x.len() != self.arity {
            return Err(NumericError::InvalidArgument(format!(
                "integrand of arity {} given {} coordinates",
                self.arity,
                x.len()
            )));
        }
        match &self.shape {
            Shape::Grid(g) => g(f, x),
            Shape::Linear {
                offset,
                coeffs,
                line,
            } => {
                let y = offset + coeffs.iter().zip(x).map(|(c, x)| c * x).sum::<i64>();
                Ok(line(f, y, 1)?.swap_remove(0))
            }
        }
    }
}

/// Per-coordinate measure `mu_{-q^{delta_j}}` and weight `q^{a_j x_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpec {
    pub deltas: Vec<i64>,
    pub weights: Vec<i64>,
}

impl MeasureSpec {
    /// `mu_{-1}` in every coordinate, no weights.
    pub fn plain(arity: usize) -> Self {
        Self {
            deltas: vec![0; arity],
            weights: vec![0; arity],
        }
    }

    pub fn new(deltas: Vec<i64>, weights: Vec<i64>) -> Result<Self> {
        if deltas.len() != weights.len() || deltas.is_empty() {
            return Err(NumericError::InvalidArgument(format!(
                "measure spec needs equal nonzero counts of deltas ({}) and weights ({})",
                deltas.len(),
                weights.len()
            )));
        }
        Ok(Self { deltas, weights })
    }

    pub fn arity(&self) -> usize {
        self.deltas.len()
    }
}

/// How a multivariate level is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumRoute {
    /// Convolution when the integrand is a linear form, grid otherwise.
    #[default]
    Auto,
    Grid,
}

/// Prime, target precision and cost ceiling for a run of Riemann sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrationContext {
    pub prime: u64,
    pub precision: i64,
    pub budget: u128,
    pub route: SumRoute,
}

impl IntegrationContext {
    pub fn new(prime: u64, precision: i64) -> Result<Self> {
        if !is_odd_prime(&prime.into()) {
            return Err(NumericError::InvalidPrime(format!("{prime} is not an odd prime")));
        }
        if precision < 1 {
            return Err(NumericError::InvalidPrecision(precision));
        }
        Ok(Self {
            prime,
            precision,
            budget: DEFAULT_BUDGET,
            route: SumRoute::Auto,
        })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_route(mut self, route: SumRoute) -> Self {
        self.route = route;
        self
    }

    fn residues(&self, level: u32) -> Result<u128> {
        if level == 0 {
            return Err(NumericError::InvalidArgument("level must be >= 1".into()));
        }
        (self.prime as u128)
            .checked_pow(level)
            .ok_or(NumericError::BudgetExceeded {
                points: u128::MAX,
                budget: self.budget,
            })
    }

    fn charge(&self, points: Option<u128>) -> Result<()> {
        match points {
            Some(points) if points <= self.budget => Ok(()),
            points => Err(NumericError::BudgetExceeded {
                points: points.unwrap_or(u128::MAX),
                budget: self.budget,
            }),
        }
    }
}

/// Limits of a run of levels with the observed agreement between them.
#[derive(Debug, Clone)]
pub struct IntegralResult<E> {
    pub value: E,
    pub level: u32,
    pub first_level: u32,
    /// Values at levels `first_level..=level`.
    pub values: Vec<E>,
    /// `v_p(S_{N+1} - S_N)` for consecutive levels; `None` when the difference
    /// vanishes (to the available precision).
    pub diff_valuations: Vec<Option<i64>>,
    /// `min_N v_p(S_{N+1} - S_N)`, capped at the context precision; 0 when only
    /// one level was computed.
    pub achieved_precision: i64,
    /// Difference valuations never decrease.
    pub monotone: bool,
    /// Every pair of consecutive levels agrees modulo `p`: all difference
    /// valuations are positive. False when only one level was computed.
    pub stabilizing: bool,
}

fn analyse<F: Valued>(
    ctx: &IntegrationContext,
    field: &F,
    first_level: u32,
    values: Vec<F::Elem>,
) -> IntegralResult<F::Elem> {
    let cap = ctx.precision;
    let diff_valuations: Vec<Option<i64>> = values
        .windows(2)
        .map(|w| field.p_valuation(&field.sub(&w[1], &w[0]), ctx.prime))
        .collect();
    let as_num = |v: &Option<i64>| v.unwrap_or(i64::MAX);
    let achieved_precision = if diff_valuations.is_empty() {
        0
    } else {
        diff_valuations.iter().map(as_num).min().unwrap().min(cap)
    };
    let monotone = diff_valuations
        .windows(2)
        .all(|w| as_num(&w[0]) <= as_num(&w[1]));
    let stabilizing = !diff_valuations.is_empty() && diff_valuations.iter().all(|v| as_num(v) > 0);
    let level = first_level + values.len() as u32 - 1;
    IntegralResult {
        value: values.last().cloned().expect("at least one level"),
        level,
        first_level,
        values,
        diff_valuations,
        achieved_precision,
        monotone,
        stabilizing,
    }
}

/// `(1 + q^delta)/(1 + q^{delta p^N})`.
fn level_prefactor<F: Field>(field: &F, delta: i64, residues: u128) -> Result<F::Elem> {
    let one = field.one();
    if delta == 0 {
        return Ok(one);
    }
    let m = i64::try_from(residues)
        .ok()
        .and_then(|m| m.checked_mul(delta))
        .ok_or_else(|| NumericError::InvalidArgument("level too large".into()))?;
    let num = field.add(&one, &field.q_pow(delta)?);
    let den = field.add(&one, &field.q_pow(m)?);
    if field.is_zero(&den) {
        return Err(NumericError::Pole(format!(
            "1 + q^{m} vanishes in the level-N prefactor"
        )));
    }
    field.div(&num, &den)
}

/// `(1+q^delta)/(1+q^{delta p^N}) sum_{x<p^N} f(x) (-q^delta)^x`.
pub fn fermionic_sum_level<F: Field + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    delta: i64,
    level: u32,
) -> Result<F::Elem> {
    if f.arity() != 1 {
        return Err(NumericError::InvalidArgument(format!(
            "univariate sum given an integrand of arity {}",
            f.arity()
        )));
    }
    multivariate_sum_level(ctx, field, f, &MeasureSpec::new(vec![delta], vec![0])?, level)
}

/// Levels `1..=max_level` of the univariate sum with stabilization analysis.
pub fn fermionic_integral<F: Valued + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    delta: i64,
    max_level: u32,
) -> Result<IntegralResult<F::Elem>> {
    let values = (1..=max_level)
        .map(|n| fermionic_sum_level(ctx, field, f, delta, n))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(NumericError::InvalidArgument("max level must be >= 1".into()));
    }
    Ok(analyse(ctx, field, 1, values))
}

/// Levels `1..=max_level` of the multivariate sum.
pub fn multivariate_fermionic_integral<F: Valued + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    measure: &MeasureSpec,
    max_level: u32,
) -> Result<IntegralResult<F::Elem>> {
    multivariate_integral_levels(ctx, field, f, measure, 1..=max_level)
}

/// The multivariate sum at each level in `levels` (all at least 1).
pub fn multivariate_integral_levels<F: Valued + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    measure: &MeasureSpec,
    levels: RangeInclusive<u32>,
) -> Result<IntegralResult<F::Elem>> {
    let first = *levels.start();
    if first == 0 || levels.is_empty() {
        return Err(NumericError::InvalidArgument(format!(
            "levels {}..{} must be a nonempty range starting at 1 or above",
            levels.start(),
            levels.end()
        )));
    }
    let values = levels
        .map(|n| multivariate_sum_level(ctx, field, f, measure, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(analyse(ctx, field, first, values))
}

/// One level of the multivariate sum.
pub fn multivariate_sum_level<F: Field + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    measure: &MeasureSpec,
    level: u32,
) -> Result<F::Elem> {
    if measure.arity() != f.arity() {
        return Err(NumericError::InvalidArgument(format!(
            "measure arity {} does not match integrand arity {}",
            measure.arity(),
            f.arity()
        )));
    }
    let residues = ctx.residues(level)?;
    let r = f.arity() as u32;
    let mut prefactor = field.one();
    for &d in &measure.deltas {
        prefactor = field.mul(&prefactor, &level_prefactor(field, d, residues)?);
    }
    // x -> (-q^{delta_j + a_j})^x
    let ratios = measure
        .deltas
        .iter()
        .zip(&measure.weights)
        .map(|(d, a)| Ok(field.neg(&field.q_pow(d + a)?)))
        .collect::<Result<Vec<_>>>()?;
    // the guard counts grid points whichever route does the work
    ctx.charge(residues.checked_pow(r))?;
    let sum = match (&f.shape, ctx.route) {
        (Shape::Linear { offset, coeffs, line }, SumRoute::Auto) => {
            convolution_sum(field, *offset, coeffs, line, &ratios, residues as usize)?
        }
        _ => grid_sum(field, f, &ratios, residues as usize)?,
    };
    Ok(field.mul(&prefactor, &sum))
}

fn powers<F: Field>(field: &F, base: &F::Elem, count: usize) -> Vec<F::Elem> {
    let mut out = Vec::with_capacity(count);
    let mut acc = field.one();
    for _ in 0..count {
        out.push(acc.clone());
        acc = field.mul(&acc, base);
    }
    out
}

fn grid_sum<F: Field + 'static>(
    field: &F,
    f: &Integrand<F>,
    ratios: &[F::Elem],
    m: usize,
) -> Result<F::Elem> {
    let r = ratios.len();
    let tables: Vec<Vec<F::Elem>> = ratios.iter().map(|b| powers(field, b, m)).collect();
    // one chunk per value of the first coordinate, rest row-major
    let partials = (0..m)
        .into_par_iter()
        .map(|x0| {
            let mut x = vec![0i64; r];
            x[0] = x0 as i64;
            let mut acc = field.zero();
            loop {
                let mut w = field.mul(&tables[0][x0], &f.eval(field, &x)?);
                for j in 1..r {
                    w = field.mul(&w, &tables[j][x[j] as usize]);
                }
                acc = field.add(&acc, &w);
                let mut j = r - 1;
                loop {
                    if j == 0 {
                        return Ok(acc);
                    }
                    x[j] += 1;
                    if (x[j] as usize) < m {
                        break;
                    }
                    x[j] = 0;
                    j -= 1;
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(field.sum(&partials))
}

fn convolution_sum<F: Field>(
    field: &F,
    offset: i64,
    coeffs: &[i64],
    line: &LineFn<F>,
    ratios: &[F::Elem],
    m: usize,
) -> Result<F::Elem> {
    // weight[s] = sum over the grid of prod_j ratio_j^{x_j} with sum_j c_j x_j = lo + s
    let lo: i64 = coeffs.iter().map(|c| c.min(&0) * (m as i64 - 1)).sum();
    let mut weight = vec![field.one()];
    for (c, ratio) in coeffs.iter().zip(ratios) {
        let seq = powers(field, ratio, m);
        let step = c.unsigned_abs() as usize;
        let len = weight.len() + step * (m - 1);
        let flip = *c < 0;
        let next: Vec<F::Elem> = (0..len)
            .into_par_iter()
            .map(|s| {
                let mut acc = field.zero();
                for (x, u) in seq.iter().enumerate() {
                    let shift = if flip { (m - 1 - x) * step } else { x * step };
                    if shift > s {
                        continue;
                    }
                    if let Some(w) = weight.get(s - shift) {
                        acc = field.add(&acc, &field.mul(w, u));
                    }
                }
                acc
            })
            .collect();
        weight = next;
    }
    let values = line(field, offset + lo, weight.len())?;
    let mut acc = field.zero();
    for (w, g) in weight.iter().zip(&values) {
        if !field.is_zero(w) {
            acc = field.add(&acc, &field.mul(w, g));
        }
    }
    Ok(acc)
}

/// One level of the shift relation `I(f_n) = (-1)^n I(f) + 2 sum_{l<n} (-1)^{n-1-l} f(l)`.
#[derive(Debug, Clone)]
pub struct ShiftRow<E> {
    pub level: u32,
    pub lhs: E,
    pub rhs: E,
    /// `v_p(lhs - rhs)`; `None` when the two sides agree exactly.
    pub defect_valuation: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct ShiftReport<E> {
    pub shift: u32,
    pub rows: Vec<ShiftRow<E>>,
    /// Defect valuations never decrease with the level.
    pub shrinking: bool,
}

pub fn shift_relation_check<F: Valued + 'static>(
    ctx: &IntegrationContext,
    field: &F,
    f: &Integrand<F>,
    shift: u32,
    levels: RangeInclusive<u32>,
) -> Result<ShiftReport<F::Elem>> {
    let n = shift as i64;
    let fn_ = f.shifted(n);
    let two = field.from_int(2);
    let mut boundary = field.zero();
    for l in 0..n {
        let term = field.mul(&two, &f.eval(field, &[l])?);
        boundary = if (n - 1 - l) % 2 == 0 {
            field.add(&boundary, &term)
        } else {
            field.sub(&boundary, &term)
        };
    }
    let mut rows = Vec::new();
    for level in levels {
        let lhs = fermionic_sum_level(ctx, field, &fn_, 0, level)?;
        let base = fermionic_sum_level(ctx, field, f, 0, level)?;
        let signed = if n % 2 == 0 { base } else { field.neg(&base) };
        let rhs = field.add(&signed, &boundary);
        let defect_valuation = field.p_valuation(&field.sub(&lhs, &rhs), ctx.prime);
        rows.push(ShiftRow {
            level,
            lhs,
            rhs,
            defect_valuation,
        });
    }
    let shrinking = rows.windows(2).all(|w| {
        w[0].defect_valuation.unwrap_or(i64::MAX) <= w[1].defect_valuation.unwrap_or(i64::MAX)
    });
    Ok(ShiftReport {
        shift,
        rows,
        shrinking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{rat, rat_int, Rational};
    use crate::numeric::{FunctionField, PadicField, RationalField, RationalFunction};

    fn rq(q: i64) -> RationalField {
        RationalField::new(rat_int(q)).unwrap()
    }

    #[test]
    fn constant_one_any_measure() {
        let ctx = IntegrationContext::new(3, 10).unwrap();
        let f = rq(4);
        let one = Integrand::one(1).unwrap();
        for n in 1..=4 {
            assert_eq!(fermionic_sum_level(&ctx, &f, &one, 0, n).unwrap(), rat_int(1));
            assert_eq!(fermionic_sum_level(&ctx, &f, &one, 1, n).unwrap(), rat_int(1));
            assert_eq!(fermionic_sum_level(&ctx, &f, &one, -2, n).unwrap(), rat_int(1));
        }
        let res = fermionic_integral(&ctx, &f, &one, 0, 4).unwrap();
        assert_eq!(res.value, rat_int(1));
        assert_eq!(res.diff_valuations, vec![None; 3]);
        assert_eq!(res.achieved_precision, 10);
        assert!(res.stabilizing && res.monotone);
    }

    #[test]
    fn identity_integrand_tends_to_minus_half() {
        let ctx = IntegrationContext::new(3, 12).unwrap();
        let f = PadicField::new(3, 12, &rat_int(4)).unwrap();
        let x = Integrand::univariate(|f: &PadicField, x| Ok(f.from_int(x)));
        let target = f.embed(&rat(-1, 2));
        for n in 2..=4 {
            let s = fermionic_sum_level(&ctx, &f, &x, 0, n).unwrap();
            let v = f.p_valuation(&f.sub(&s, &target), 3).unwrap_or(i64::MAX);
            assert!(v >= n as i64 - 1, "level {n}: v = {v}");
        }
    }

    #[test]
    fn geometric_summation_closed_form() {
        // sum_{x<M} [x]^d (-q)^x (1+q)/(1+q^M) against the expansion of [x]^d in q^{lx}
        let f = FunctionField::new();
        let ctx = IntegrationContext::new(3, 5).unwrap();
        let one = RationalFunction::one();
        let omq = one.sub(&RationalFunction::q());
        for d in 0..=2u32 {
            let g = Integrand::bracket_power(0, vec![1], d, 0).unwrap();
            for level in 1..=2u32 {
                let m = 3i64.pow(level);
                let mut closed = RationalFunction::zero();
                for l in 0..=d as i64 {
                    let c = crate::numeric::rational::binomial(d as i64, l);
                    let c = RationalFunction::from_rational(&Rational::from_integer(c));
                    let ratio = f.q_pow(1 + l).unwrap();
                    let geo = one
                        .sub(&f.pow(&ratio.neg(), m).unwrap())
                        .div(&one.add(&ratio))
                        .unwrap();
                    let term = c.mul(&geo);
                    closed = if l % 2 == 0 { closed.add(&term) } else { closed.sub(&term) };
                }
                let pre = one
                    .add(&RationalFunction::q())
                    .div(&one.add(&f.q_pow(m).unwrap()))
                    .unwrap();
                let closed = pre.mul(&closed).div(&f.pow(&omq, d as i64).unwrap()).unwrap();
                assert_eq!(fermionic_sum_level(&ctx, &f, &g, 1, level).unwrap(), closed);
            }
        }
    }

    #[test]
    fn separable_grid_factors() {
        let ctx = IntegrationContext::new(3, 8).unwrap();
        let f = rq(4);
        let a = Integrand::bracket_power(0, vec![1], 2, 0).unwrap();
        let b = Integrand::bracket_power(1, vec![1], 1, 1).unwrap();
        let (a2, b2) = (a.clone(), b.clone());
        let prod = Integrand::grid(2, move |f: &RationalField, x: &[i64]| {
            Ok(a2.eval(f, &x[..1])? * b2.eval(f, &x[1..])?)
        })
        .unwrap();
        let m = MeasureSpec::new(vec![0, 1], vec![2, -1]).unwrap();
        for level in 1..=2 {
            let left = multivariate_sum_level(
                &ctx,
                &f,
                &a,
                &MeasureSpec::new(vec![0], vec![2]).unwrap(),
                level,
            )
            .unwrap();
            let right = multivariate_sum_level(
                &ctx,
                &f,
                &b,
                &MeasureSpec::new(vec![1], vec![-1]).unwrap(),
                level,
            )
            .unwrap();
            assert_eq!(
                multivariate_sum_level(&ctx, &f, &prod, &m, level).unwrap(),
                left * right
            );
        }
    }

    #[test]
    fn convolution_agrees_with_grid() {
        let f = rq(4);
        let fast = IntegrationContext::new(3, 8).unwrap();
        let slow = fast.clone().with_route(SumRoute::Grid);
        for coeffs in [vec![1, 1], vec![1, 2, 1], vec![2, -1], vec![0, 1, -3]] {
            let g = Integrand::bracket_power(1, coeffs.clone(), 2, -1).unwrap();
            let r = coeffs.len();
            let m = MeasureSpec::new((0..r as i64).collect(), (0..r as i64).map(|j| 1 - j).collect())
                .unwrap();
            for level in 1..=2 {
                assert_eq!(
                    multivariate_sum_level(&fast, &f, &g, &m, level).unwrap(),
                    multivariate_sum_level(&slow, &f, &g, &m, level).unwrap(),
                    "{coeffs:?} level {level}"
                );
            }
        }
    }

    #[test]
    fn budget_guard() {
        let ctx = IntegrationContext::new(5, 8).unwrap().with_budget(1000);
        let f = rq(6);
        let g = Integrand::grid(3, |f: &RationalField, _: &[i64]| Ok(f.one())).unwrap();
        let m = MeasureSpec::plain(3);
        assert!(multivariate_sum_level(&ctx, &f, &g, &m, 1).is_ok());
        assert!(matches!(
            multivariate_sum_level(&ctx, &f, &g, &m, 2),
            Err(NumericError::BudgetExceeded { points: 15625, budget: 1000 })
        ));
    }

    #[test]
    fn shift_relation() {
        let ctx = IntegrationContext::new(3, 10).unwrap();
        let f = rq(4);
        let one = Integrand::one(1).unwrap();
        let rep = shift_relation_check(&ctx, &f, &one, 1, 1..=3).unwrap();
        for row in &rep.rows {
            assert_eq!(row.lhs, rat_int(1));
            assert_eq!(row.defect_valuation, None);
        }
        let b = Integrand::bracket_power(0, vec![1], 1, 0).unwrap();
        let rep = shift_relation_check(&ctx, &f, &b, 2, 2..=4).unwrap();
        assert!(rep.shrinking);
        for row in &rep.rows {
            assert!(row.defect_valuation.unwrap() >= row.level as i64 - 1);
        }
    }

    #[test]
    fn rejects_bad_context() {
        assert!(IntegrationContext::new(2, 5).is_err());
        assert!(IntegrationContext::new(9, 5).is_err());
        assert!(IntegrationContext::new(3, 0).is_err());
        assert!(MeasureSpec::new(vec![0], vec![]).is_err());
    }

    #[test]
    fn disagreeing_levels_are_flagged() {
        // 1/(x+1) is unbounded on Z_p
        let ctx = IntegrationContext::new(3, 10).unwrap();
        let g = Integrand::univariate(|f: &RationalField, x| f.div(&f.one(), &f.from_int(x + 1)));
        let res = fermionic_integral(&ctx, &rq(4), &g, 0, 3).unwrap();
        assert!(!res.stabilizing, "{:?}", res.diff_valuations);
        assert!(res.achieved_precision <= 0);
    }
}
