//! Both sides of every identity that can be checked by exact algebra in any
//! backend.

use crate::error::Result;
use crate::families::{
    euler_h_neg_r, euler_h_neg_r_lform, euler_hr, euler_hr_inverse_base, euler_order_neg_r,
    euler_order_neg_r_lform, euler_q, l_sum,
};
use crate::numeric::rational::binomial;
use crate::numeric::{Field, Point};
use crate::qkit::{
    bracket_falling_product, choose2, gauss_binomial, q_binomial_finite_check, q_bracket,
    q_difference, q_factorial, q_stirling2, q_stirling2_by_operator,
    stirling1_expansion,
};

use super::GridPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Alg {
    QBinomialFinite,
    Newton,
    StirlingRoutes,
    StirlingFirst,
    StirlingFirstBracket,
    Pascal,
    StirlingExpansion,
    StirlingExpansionLiteral,
    NegOrderForms,
    HrInverseBase,
    HrDiagonal,
    HNegRForms,
    DiagonalNegForms,
    Reciprocal,
    ShiftLowering,
    RaiseH,
    Moment,
    DiagonalShift,
    DiagonalShiftLiteral,
    ShiftH1,
    KroneckerH1,
    E0H1,
    RaiseH1,
    BinomialH1,
    ReflectionDiagonal,
    ReflectionDiagonalZeroKr,
    ReflectionDiagonalZeroK0,
    ReflectionH1,
    ReflectionH1Tail,
    FallingProductNeg,
    FallingProductNegLiteral,
}

/// A backend together with its copy under `q -> 1/q`.
pub(crate) struct Env<F: Field> {
    pub f: F,
    pub inv: F,
}

impl<F: Field> Env<F> {
    pub fn new(f: F) -> Result<Self> {
        let inv = f.with_q(f.div(&f.one(), &f.q())?)?;
        Ok(Self { f, inv })
    }
}

fn sign<F: Field>(f: &F, a: F::Elem, odd: bool) -> F::Elem {
    if odd {
        f.neg(&a)
    } else {
        a
    }
}

/// `E^{(h,r)}_{n,q}(x)` with the empty-product convention `E^{(h,0)} = [x]^n`.
fn e_hr<F: Field>(f: &F, n: u32, h: i64, r: u32, x: i64) -> Result<F::Elem> {
    if r == 0 {
        f.pow(&q_bracket(f, x)?, n as i64)
    } else {
        euler_hr(f, n, h, r, &Point::Int(x))
    }
}

/// `prod_{i<r} (1 + q^{l+i})` written out directly.
fn diagonal_product<F: Field>(f: &F, r: u32, l: i64) -> Result<F::Elem> {
    let mut acc = f.one();
    for i in 0..r as i64 {
        acc = f.mul(&acc, &f.add(&f.one(), &f.q_pow(l + i)?));
    }
    Ok(acc)
}

fn two_pow<F: Field>(f: &F, r: u32) -> Result<F::Elem> {
    f.pow(&f.from_int(2), r as i64)
}

/// `sum_{l=0}^k C(k,l)_q q^{C(l,2)} (-1)^l sum_{m=0}^l C(l,m) (q-1)^m E_{m,q}(1-k)`,
/// the integral of `(1-q)^k [x][x-1]...[x-k+1]`.
fn falling_moment<F: Field>(f: &F, k: u32, e_shifted: &[F::Elem]) -> Result<F::Elem> {
    let qm1 = f.sub(&f.q(), &f.one());
    let mut outer = f.zero();
    for l in 0..=k as i64 {
        let mut inner = f.zero();
        for m in 0..=l {
            let c = f.from_bigint(&binomial(l, m));
            inner = f.add(
                &inner,
                &f.mul(&f.mul(&c, &f.pow(&qm1, m)?), &e_shifted[m as usize]),
            );
        }
        let c = f.mul(&gauss_binomial(f, k as i64, l)?, &f.q_pow(choose2(l))?);
        outer = f.add(&outer, &sign(f, f.mul(&c, &inner), l % 2 == 1));
    }
    Ok(outer)
}

fn stirling_expansion<F: Field>(f: &F, n: u32, literal: bool) -> Result<F::Elem> {
    let omq = f.sub(&f.one(), &f.q());
    let mut acc = f.zero();
    for k in 0..=n {
        let s2 = if literal {
            if n - k > k {
                continue;
            }
            q_stirling2(f, k, n - k)?
        } else {
            q_stirling2(f, n, k)?
        };
        if f.is_zero(&s2) {
            continue;
        }
        let e_shifted = (0..=k)
            .map(|m| euler_q(f, m, &Point::Int(1 - k as i64)))
            .collect::<Result<Vec<_>>>()?;
        let term = f.mul(
            &f.mul(&f.q_pow(choose2(k as i64))?, &s2),
            &falling_moment(f, k, &e_shifted)?,
        );
        acc = f.add(&acc, &f.div(&term, &f.pow(&omq, k as i64)?)?);
    }
    Ok(acc)
}

/// `sum_m c_m sum_k S_1(m-1,k) (-1)^k [r]^{m-k} [x+m]^n` with `c_m = 1/[m]!`,
/// or `c_m = 1/[r]!` for every `m` when `literal`.
fn falling_product_form<F: Field>(f: &F, n: u32, r: u32, x: i64, literal: bool) -> Result<F::Elem> {
    let z = q_bracket(f, r as i64)?;
    let mut acc = f.zero();
    for m in 0..=r {
        let inner = f.mul(
            &stirling1_expansion(f, &z, m)?,
            &f.pow(&q_bracket(f, x + m as i64)?, n as i64)?,
        );
        let fact = q_factorial(f, if literal { r } else { m })?;
        acc = f.add(&acc, &f.div(&inner, &fact)?);
    }
    f.div(&acc, &two_pow(f, r)?)
}

/// `(k+1) (-q)^{k-1}`, the sample values of `b` in the finite q-binomial check.
fn sample_b<F: Field>(f: &F, k: u32) -> Result<F::Elem> {
    let mq = f.neg(&f.q());
    Ok(f.mul(&f.from_int(k as i64 + 1), &f.pow(&mq, k as i64 - 1)?))
}

pub(crate) fn sides<F: Field>(
    alg: Alg,
    env: &Env<F>,
    pt: &GridPoint,
) -> Result<(F::Elem, F::Elem)> {
    let f = &env.f;
    let n = pt.n.unwrap_or(0);
    let r = pt.r.unwrap_or(1);
    let h = pt.h.unwrap_or(0);
    let x = pt.x.unwrap_or(0);
    let k = pt.k.unwrap_or(0);
    let m = pt.m.unwrap_or(0);
    let px = Point::Int(x);
    let ni = n as i64;
    let one = f.one();
    let two = f.from_int(2);
    let q = f.q();
    Ok(match alg {
        Alg::QBinomialFinite => {
            let rep = q_binomial_finite_check(f, &sample_b(f, k)?, n)?;
            (rep.product, rep.expansion)
        }
        Alg::Newton => {
            let values = (0..=ni)
                .map(|y| f.pow(&q_bracket(f, y)?, ni))
                .collect::<Result<Vec<_>>>()?;
            let mut acc = f.zero();
            for j in 0..=n as usize {
                acc = f.add(
                    &acc,
                    &f.mul(&gauss_binomial(f, x, j as i64)?, &q_difference(f, &values, j)?),
                );
            }
            (f.pow(&q_bracket(f, x)?, ni)?, acc)
        }
        Alg::StirlingRoutes => (q_stirling2(f, n, k)?, q_stirling2_by_operator(f, n, k)?),
        Alg::StirlingFirst => {
            let z = f.add(&f.q_pow(2)?, &f.from_int(3 * k as i64 - 3));
            (bracket_falling_product(f, &z, n)?, stirling1_expansion(f, &z, n)?)
        }
        Alg::StirlingFirstBracket => {
            let z = q_bracket(f, r as i64)?;
            (bracket_falling_product(f, &z, m)?, stirling1_expansion(f, &z, m)?)
        }
        Alg::Pascal => {
            let (a, b) = (gauss_binomial(f, ni, k as i64 - 1)?, gauss_binomial(f, ni, k as i64)?);
            let second = f.add(&f.mul(&f.q_pow(ni + 1 - k as i64)?, &a), &b);
            (gauss_binomial(f, ni + 1, k as i64)?, second)
        }
        Alg::StirlingExpansion => (euler_q(f, n, &Point::Int(0))?, stirling_expansion(f, n, false)?),
        Alg::StirlingExpansionLiteral => {
            (euler_q(f, n, &Point::Int(0))?, stirling_expansion(f, n, true)?)
        }
        Alg::NegOrderForms => (
            euler_order_neg_r_lform(f, n, r, &px)?,
            euler_order_neg_r(f, n, r, &px)?,
        ),
        Alg::HrInverseBase => (
            euler_hr(f, n, h, r, &px)?,
            euler_hr_inverse_base(f, n, h, r, &px)?,
        ),
        Alg::HrDiagonal => {
            let two_r = two_pow(f, r)?;
            let direct = l_sum(f, n, &px, |l| f.div(&two_r, &diagonal_product(f, r, l)?))?;
            (euler_hr(f, n, r as i64, r, &px)?, direct)
        }
        Alg::HNegRForms => (
            euler_h_neg_r_lform(f, n, h, r, &px)?,
            euler_h_neg_r(f, n, h, r, &px)?,
        ),
        Alg::DiagonalNegForms => {
            let lform = l_sum(f, n, &px, |l| diagonal_product(f, r, l))?;
            let lform = f.div(&lform, &two_pow(f, r)?)?;
            let mut mform = f.zero();
            for j in 0..=r as i64 {
                let c = f.mul(&f.q_pow(choose2(j))?, &gauss_binomial(f, r as i64, j)?);
                mform = f.add(&mform, &f.mul(&c, &f.pow(&q_bracket(f, j + x)?, ni)?));
            }
            let mform = f.div(&mform, &two_pow(f, r)?)?;
            (lform, mform)
        }
        Alg::Reciprocal => (
            f.mul(&euler_hr(f, 0, h, r, &px)?, &euler_h_neg_r(f, 0, h, r, &px)?),
            one,
        ),
        Alg::ShiftLowering => {
            let lhs = f.add(
                &f.mul(&f.q_pow(h - 1)?, &e_hr(f, n, h, r, x + 1)?),
                &e_hr(f, n, h, r, x)?,
            );
            (lhs, f.mul(&two, &e_hr(f, n, h - 1, r - 1, x)?))
        }
        Alg::RaiseH => {
            let lhs = f.mul(&f.q_pow(x)?, &e_hr(f, n, h + 1, r, x)?);
            let rhs = f.add(
                &f.mul(&f.sub(&q, &one), &e_hr(f, n + 1, h, r, x)?),
                &e_hr(f, n, h, r, x)?,
            );
            (lhs, rhs)
        }
        Alg::Moment => {
            let mi = m as i64;
            let poch = crate::qkit::q_pochhammer(f, &f.neg(&f.q_pow(mi - r as i64)?), r);
            let lhs = f.div(&f.mul(&f.q_pow(mi * x)?, &two_pow(f, r)?), &poch)?;
            let qm1 = f.sub(&q, &one);
            let mut rhs = f.zero();
            for l in 0..=mi {
                let c = f.mul(&f.from_bigint(&binomial(mi, l)), &f.pow(&qm1, l)?);
                rhs = f.add(&rhs, &f.mul(&c, &e_hr(f, l as u32, 0, r, x)?));
            }
            (lhs, rhs)
        }
        Alg::DiagonalShift | Alg::DiagonalShiftLiteral => {
            let ri = r as i64;
            let lhs = f.add(
                &f.mul(&f.q_pow(ri - 1)?, &e_hr(f, n, ri, r, x + 1)?),
                &e_hr(f, n, ri, r, x)?,
            );
            let factor = if alg == Alg::DiagonalShiftLiteral {
                q_bracket(f, 2)?
            } else {
                two
            };
            (lhs, f.mul(&factor, &e_hr(f, n, ri - 1, r - 1, x)?))
        }
        Alg::ShiftH1 => {
            let lhs = f.add(
                &f.mul(&f.q_pow(h - 1)?, &e_hr(f, n, h, 1, x + 1)?),
                &e_hr(f, n, h, 1, x)?,
            );
            (lhs, f.mul(&two, &f.pow(&q_bracket(f, x)?, ni)?))
        }
        Alg::KroneckerH1 => {
            let mut umbral = f.zero();
            for j in 0..=n {
                let c = f.mul(&f.from_bigint(&binomial(ni, j as i64)), &f.q_pow(j as i64)?);
                umbral = f.add(&umbral, &f.mul(&c, &e_hr(f, j, h, 1, 0)?));
            }
            let lhs = f.add(&f.mul(&f.q_pow(h - 1)?, &umbral), &e_hr(f, n, h, 1, 0)?);
            (lhs, if n == 0 { two } else { f.zero() })
        }
        Alg::E0H1 => {
            let base = f.q_pow(h - 1)?;
            let two_bracket = if f.equal(&base, &one) {
                two.clone()
            } else {
                q_bracket(&f.with_q(base)?, 2)?
            };
            (e_hr(f, 0, h, 1, 0)?, f.div(&two, &two_bracket)?)
        }
        Alg::RaiseH1 => {
            let lhs = f.mul(&f.q_pow(x)?, &e_hr(f, n, h, 1, x)?);
            let rhs = f.add(
                &f.mul(&f.sub(&q, &one), &e_hr(f, n + 1, h - 1, 1, x)?),
                &e_hr(f, n, h - 1, 1, x)?,
            );
            (lhs, rhs)
        }
        Alg::BinomialH1 => {
            let bx = q_bracket(f, x)?;
            let mut rhs = f.zero();
            for j in 0..=ni {
                let c = f.mul(&f.from_bigint(&binomial(ni, j)), &f.pow(&bx, ni - j)?);
                let c = f.mul(&c, &f.q_pow(j * x)?);
                rhs = f.add(&rhs, &f.mul(&c, &e_hr(f, j as u32, h, 1, 0)?));
            }
            (e_hr(f, n, h, 1, x)?, rhs)
        }
        Alg::ReflectionDiagonal => {
            let ri = r as i64;
            let lhs = e_hr(&env.inv, n, ri, r, ri - x)?;
            let c = f.q_pow(ni + choose2(ri))?;
            (lhs, sign(f, f.mul(&c, &e_hr(f, n, ri, r, x)?), n % 2 == 1))
        }
        Alg::ReflectionDiagonalZeroKr | Alg::ReflectionDiagonalZeroK0 => {
            let ri = r as i64;
            let kk = if alg == Alg::ReflectionDiagonalZeroKr { ri } else { 0 };
            let lhs = e_hr(&env.inv, n, ri, r, 0)?;
            let c = f.q_pow(ni + choose2(ri))?;
            (lhs, sign(f, f.mul(&c, &e_hr(f, n, ri, r, kk)?), n % 2 == 1))
        }
        Alg::ReflectionH1 => {
            let lhs = e_hr(&env.inv, n, h, 1, 1 - x)?;
            let c = f.q_pow(ni + h - 1)?;
            (lhs, sign(f, f.mul(&c, &e_hr(f, n, h, 1, x)?), n % 2 == 1))
        }
        Alg::ReflectionH1Tail => {
            let lhs = e_hr(&env.inv, n, h, 1, 0)?;
            let c = f.q_pow(ni)?;
            (lhs, sign(f, f.mul(&c, &e_hr(f, n, h, 1, 0)?), n % 2 == 0))
        }
        Alg::FallingProductNeg => (
            euler_h_neg_r(f, n, r as i64, r, &px)?,
            falling_product_form(f, n, r, x, false)?,
        ),
        Alg::FallingProductNegLiteral => (
            euler_h_neg_r(f, n, r as i64, r, &px)?,
            falling_product_form(f, n, r, x, true)?,
        ),
    })
}
