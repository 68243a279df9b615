//! q-analog combinatorics over any [`Field`]: brackets, factorials, Gaussian
//! binomials, q-Pochhammer symbols, the q-difference operator and Carlitz's
//! q-Stirling numbers of both kinds.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{NumericError, Result};
use crate::numeric::rational::Rational;
use crate::numeric::{Field, Point, RationalField};

/// `C(k, 2)` for any integer `k`.
pub fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// `[x]_q = (1 - q^x)/(1 - q)`, computed without dividing by `1 - q`:
/// a geometric sum for `x >= 0` and `[-m]_q = -q^{-m}[m]_q` otherwise.
pub fn q_bracket<F: Field>(f: &F, x: i64) -> Result<F::Elem> {
    let q = f.q();
    let m = x.unsigned_abs();
    let mut acc = f.zero();
    let one = f.one();
    for _ in 0..m {
        acc = f.add(&one, &f.mul(&q, &acc));
    }
    if x >= 0 {
        Ok(acc)
    } else {
        Ok(f.neg(&f.mul(&f.q_pow(x)?, &acc)))
    }
}

/// `[x]_q` for an integer or `p`-adic `x`.
pub fn q_bracket_at<F: Field>(f: &F, x: &Point) -> Result<F::Elem> {
    match x {
        Point::Int(k) => q_bracket(f, *k),
        Point::Padic(y) => {
            let qy = f.q_power_padic(y)?;
            let one = f.one();
            f.div(&f.sub(&qy, &one), &f.sub(&f.q(), &one))
        }
    }
}

/// `[x]_{-q} = (1 - (-q)^x)/(1 + q)`.
pub fn q_bracket_signed<F: Field>(f: &F, x: i64) -> Result<F::Elem> {
    let one = f.one();
    let mq = f.neg(&f.q());
    let num = f.sub(&one, &f.pow(&mq, x)?);
    f.div(&num, &f.add(&one, &f.q()))
}

/// `[n]_q! = [n]_q [n-1]_q ... [1]_q`.
pub fn q_factorial<F: Field>(f: &F, n: u32) -> Result<F::Elem> {
    let mut acc = f.one();
    for k in 1..=n as i64 {
        acc = f.mul(&acc, &q_bracket(f, k)?);
    }
    Ok(acc)
}

/// Row `n` of Gaussian binomials, built with
/// `C(m+1, k) = C(m, k-1) + q^k C(m, k)`.
pub fn gauss_binomial_row<F: Field>(f: &F, n: u32) -> Result<Vec<F::Elem>> {
    let q = f.q();
    let mut q_pows = vec![f.one()];
    for k in 1..=n as usize {
        q_pows.push(f.mul(&q_pows[k - 1], &q));
    }
    let mut row = vec![f.one()];
    for m in 0..n as usize {
        let mut next = Vec::with_capacity(m + 2);
        next.push(f.one());
        for k in 1..=m {
            next.push(f.add(&row[k - 1], &f.mul(&q_pows[k], &row[k])));
        }
        next.push(f.one());
        row = next;
    }
    Ok(row)
}

/// Gaussian binomial `C(n, k)_q`; zero outside `0 <= k <= n`.
pub fn gauss_binomial<F: Field>(f: &F, n: i64, k: i64) -> Result<F::Elem> {
    if n < 0 || k < 0 || k > n {
        return Ok(f.zero());
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(f.one());
    }
    Ok(gauss_binomial_row(f, n as u32)?.swap_remove(k as usize))
}

/// `(b; q)_n = (1 - b)(1 - bq)...(1 - bq^{n-1})`.
pub fn q_pochhammer<F: Field>(f: &F, b: &F::Elem, n: u32) -> F::Elem {
    let one = f.one();
    let q = f.q();
    let mut term = b.clone();
    let mut acc = f.one();
    for _ in 0..n {
        acc = f.mul(&acc, &f.sub(&one, &term));
        term = f.mul(&term, &q);
    }
    acc
}

/// Finite q-binomial formula: `(b; q)_n` against
/// `sum_i C(n, i)_q q^{C(i,2)} (-1)^i b^i`.
#[derive(Debug, Clone)]
pub struct FiniteQBinomialReport<E> {
    pub product: E,
    pub expansion: E,
    pub equal: bool,
}

pub fn q_binomial_finite_check<F: Field>(
    f: &F,
    b: &F::Elem,
    n: u32,
) -> Result<FiniteQBinomialReport<F::Elem>> {
    let product = q_pochhammer(f, b, n);
    let row = gauss_binomial_row(f, n)?;
    let mut expansion = f.zero();
    let mut b_pow = f.one();
    for (i, c) in row.iter().enumerate() {
        let i = i as i64;
        let mut term = f.mul(&f.mul(c, &f.q_pow(choose2(i))?), &b_pow);
        if i % 2 == 1 {
            term = f.neg(&term);
        }
        expansion = f.add(&expansion, &term);
        b_pow = f.mul(&b_pow, b);
    }
    let equal = f.equal(&product, &expansion);
    Ok(FiniteQBinomialReport {
        product,
        expansion,
        equal,
    })
}

/// Truncated infinite q-binomial series `sum_{i<M} C(n+i-1, i)_q b^i`
/// against `1/(b; q)_n`, with a rigorous bound on the neglected tail.
#[derive(Debug, Clone)]
pub struct SeriesQBinomialReport {
    pub terms: usize,
    pub partial: Rational,
    pub exact: Rational,
    pub error: Rational,
    pub remainder_bound: Rational,
}

pub fn q_binomial_series_check(
    q: &Rational,
    b: &Rational,
    n: u32,
    terms: usize,
) -> Result<SeriesQBinomialReport> {
    let one = Rational::from_integer(BigInt::from(1));
    let aq = q.abs();
    let ab = b.abs();
    if aq >= one || ab >= one {
        return Err(NumericError::Divergent(format!(
            "the infinite q-binomial series needs |q| < 1 and |b| < 1 (q = {q}, b = {b})"
        )));
    }
    let f = RationalField::new(q.clone())?;
    let exact = f.div(&one, &q_pochhammer(&f, b, n))?;
    let mut partial = Rational::zero();
    let mut b_pow = one.clone();
    // C(n+i-1, i)_q = C(n+i-2, i-1)_q (1 - q^{n+i-1}) / (1 - q^i)
    let mut c = one.clone();
    for i in 0..terms as i64 {
        if i > 0 {
            if n == 0 {
                break;
            }
            let num = &one - f.q_pow(n as i64 + i - 1)?;
            let den = &one - f.q_pow(i)?;
            c = f.div(&(c * num), &den)?;
        }
        partial += &c * &b_pow;
        b_pow *= b;
    }
    let error = (&partial - &exact).abs();
    // |C(n+i-1, i)_q| <= prod_{j<n} (1 + |q|^j)/(1 - |q|^j)
    let mut coeff_bound = one.clone();
    let mut qj = one.clone();
    for _ in 1..n {
        qj *= &aq;
        coeff_bound = coeff_bound * (&one + &qj) / (&one - &qj);
    }
    let remainder_bound = num_traits::pow(ab.clone(), terms) * coeff_bound / (&one - &ab);
    Ok(SeriesQBinomialReport {
        terms,
        partial,
        exact,
        error,
        remainder_bound,
    })
}

/// `Delta_q^n f(0) = sum_k C(n, k)_q (-1)^k q^{C(k,2)} f(n - k)`.
pub fn q_difference<F: Field>(f: &F, values: &[F::Elem], n: usize) -> Result<F::Elem> {
    if values.len() < n + 1 {
        return Err(NumericError::SequenceTooShort {
            needed: n + 1,
            have: values.len(),
        });
    }
    let row = gauss_binomial_row(f, n as u32)?;
    let mut acc = f.zero();
    for (k, c) in row.iter().enumerate() {
        let mut term = f.mul(&f.mul(c, &f.q_pow(choose2(k as i64))?), &values[n - k]);
        if k % 2 == 1 {
            term = f.neg(&term);
        }
        acc = f.add(&acc, &term);
    }
    Ok(acc)
}

/// `Delta_q^n f(0)` by applying `prod_{i=1}^n (E - q^{i-1} I)` to the
/// sequence, one factor at a time.
pub fn q_difference_by_operator<F: Field>(
    f: &F,
    values: &[F::Elem],
    n: usize,
) -> Result<F::Elem> {
    if values.len() < n + 1 {
        return Err(NumericError::SequenceTooShort {
            needed: n + 1,
            have: values.len(),
        });
    }
    let mut seq = values[..=n].to_vec();
    let q = f.q();
    let mut qi = f.one();
    for _ in 0..n {
        seq = seq
            .windows(2)
            .map(|w| f.sub(&w[1], &f.mul(&qi, &w[0])))
            .collect();
        qi = f.mul(&qi, &q);
    }
    Ok(seq.swap_remove(0))
}

/// `q^{-C(k,2)}/[k]_q!`, the normalization shared by both q-Stirling routes.
fn stirling2_prefactor<F: Field>(f: &F, k: u32) -> Result<F::Elem> {
    let qf = q_factorial(f, k)?;
    f.div(&f.q_pow(-choose2(k as i64))?, &qf)
}

/// Carlitz q-Stirling number of the second kind from the explicit sum
/// `q^{-C(k,2)}/[k]_q! sum_j (-1)^j q^{C(j,2)} C(k, j)_q [k-j]_q^n`,
/// with `0^0 = 1`.
pub fn q_stirling2<F: Field>(f: &F, n: u32, k: u32) -> Result<F::Elem> {
    let row = gauss_binomial_row(f, k)?;
    let mut acc = f.zero();
    for (j, c) in row.iter().enumerate() {
        let base = q_bracket(f, (k as usize - j) as i64)?;
        let mut term = f.mul(
            &f.mul(c, &f.q_pow(choose2(j as i64))?),
            &f.pow(&base, n as i64)?,
        );
        if j % 2 == 1 {
            term = f.neg(&term);
        }
        acc = f.add(&acc, &term);
    }
    Ok(f.mul(&stirling2_prefactor(f, k)?, &acc))
}

/// The same number as `q^{-C(k,2)}/[k]_q! Delta_q^k [x]_q^n |_{x=0}`, using the
/// operator product rather than the closed sum.
pub fn q_stirling2_by_operator<F: Field>(f: &F, n: u32, k: u32) -> Result<F::Elem> {
    let values = (0..=k as i64)
        .map(|x| f.pow(&q_bracket(f, x)?, n as i64))
        .collect::<Result<Vec<_>>>()?;
    let delta = q_difference_by_operator(f, &values, k as usize)?;
    Ok(f.mul(&stirling2_prefactor(f, k)?, &delta))
}

/// Coefficients of `prod_{k=1}^n (1 + [k]_q z)` in `z`: the q-Stirling numbers
/// of the first kind `S_1(n, 0..=n; q)`.
pub fn q_stirling1<F: Field>(f: &F, n: u32) -> Result<Vec<F::Elem>> {
    let mut coeffs = vec![f.one()];
    for k in 1..=n as i64 {
        let b = q_bracket(f, k)?;
        let mut next = coeffs.clone();
        next.push(f.zero());
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = f.add(&next[i + 1], &f.mul(&b, c));
        }
        coeffs = next;
    }
    Ok(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    First,
    Second,
}

/// Rows `0..=max_n` of q-Stirling numbers of one kind.
#[derive(Debug, Clone)]
pub struct QStirlingTable<E> {
    pub kind: StirlingKind,
    rows: Vec<Vec<E>>,
}

impl<E: Clone> QStirlingTable<E> {
    pub fn first_kind<F: Field<Elem = E>>(f: &F, max_n: u32) -> Result<Self> {
        let rows = (0..=max_n)
            .map(|n| q_stirling1(f, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind: StirlingKind::First,
            rows,
        })
    }

    pub fn second_kind<F: Field<Elem = E>>(f: &F, max_n: u32) -> Result<Self> {
        let rows = (0..=max_n)
            .map(|n| (0..=n).map(|k| q_stirling2(f, n, k)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind: StirlingKind::Second,
            rows,
        })
    }

    pub fn max_n(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    /// Entry `(n, k)`; `None` outside the table and for `k > n`, where the
    /// value is zero.
    pub fn get(&self, n: u32, k: u32) -> Option<&E> {
        self.rows.get(n as usize)?.get(k as usize)
    }
}

/// `prod_{k=0}^{n-1} (z - [k]_q)`.
pub fn bracket_falling_product<F: Field>(f: &F, z: &F::Elem, n: u32) -> Result<F::Elem> {
    let mut acc = f.one();
    for k in 0..n as i64 {
        acc = f.mul(&acc, &f.sub(z, &q_bracket(f, k)?));
    }
    Ok(acc)
}

/// `sum_{k=0}^{n} S_1(n-1, k; q) (-1)^k z^{n-k}`, reading `S_1(n-1, n; q) = 0`
/// and, for `n = 0`, the empty row `S_1(-1, 0; q) = 1`.
pub fn stirling1_expansion<F: Field>(f: &F, z: &F::Elem, n: u32) -> Result<F::Elem> {
    if n == 0 {
        return Ok(f.one());
    }
    let row = q_stirling1(f, n - 1)?;
    let mut acc = f.zero();
    for (k, s) in row.iter().enumerate() {
        let mut term = f.mul(s, &f.pow(z, (n as usize - k) as i64)?);
        if k % 2 == 1 {
            term = f.neg(&term);
        }
        acc = f.add(&acc, &term);
    }
    Ok(acc)
}

/// Classical Stirling numbers of the second kind by `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn classical_stirling2(n: u32, k: u32) -> BigInt {
    let mut row = vec![BigInt::from(1)];
    for m in 1..=n as usize {
        let mut next = vec![BigInt::zero(); m + 1];
        for j in 1..=m {
            let keep = if j < m { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = keep + &row[j - 1];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

/// Unsigned Stirling numbers of the first kind `c(n+1, n+1-k)`: coefficients
/// of `prod_{k=1}^n (1 + k z)`.
pub fn classical_stirling1_row(n: u32) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::from(1)];
    for k in 1..=n as i64 {
        let mut next = coeffs.clone();
        next.push(BigInt::zero());
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c * BigInt::from(k);
        }
        coeffs = next;
    }
    coeffs
}
