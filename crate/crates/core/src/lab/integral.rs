//! Closed forms against truncated fermionic Riemann sums in the `p`-adic
//! backend.

use crate::error::Result;
use crate::families::{
    euler_h_neg_r, euler_hr, euler_order_r, euler_q, euler_weighted, euler_weighted_literal,
    euler_weighted_star, euler_weighted_star_literal,
};
use crate::integrator::{
    multivariate_fermionic_integral, shift_relation_check, Integrand, IntegrationContext,
    MeasureSpec,
};
use crate::numeric::rational::{binomial, Rational};
use crate::numeric::{Field, PadicField, Point, Valued};
use crate::qkit::q_pochhammer;

use super::GridPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Int {
    Basic,
    OrderR,
    Hr,
    HNegR,
    Weighted,
    WeightedLiteral,
    WeightedStar,
    WeightedStarLiteral,
    Moment,
    ShiftRelation,
}

/// Measure configurations `(w, delta)` for the weighted families.
pub(crate) const WEIGHT_CONFIGS: [(&[i64], &[i64]); 7] = [
    (&[1], &[0]),
    (&[1], &[1]),
    (&[2], &[1]),
    (&[1, 1], &[1, 2]),
    (&[1, 2], &[0, 1]),
    (&[2, 1], &[1, 0]),
    (&[1, 1, 1], &[0, 1, 2]),
];

pub(crate) struct Outcome {
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

fn ones(r: u32) -> Vec<i64> {
    vec![1; r as usize]
}

/// `h - j` for `j = 1..=r`.
fn hr_weights(h: i64, r: u32) -> Vec<i64> {
    (1..=r as i64).map(|j| h - j).collect()
}

fn compare(
    f: &PadicField,
    closed: &<PadicField as Field>::Elem,
    value: &<PadicField as Field>::Elem,
    threshold: i64,
) -> Outcome {
    let v = f.p_valuation(&f.sub(closed, value), f.prime());
    Outcome {
        pass: v.map_or(true, |v| v >= threshold),
        lhs: f.render(closed),
        rhs: f.render(value),
    }
}

pub(crate) fn check(
    kind: Int,
    pt: &GridPoint,
    precision: i64,
    level: u32,
) -> Result<Outcome> {
    let p = pt.p.expect("p-adic point carries p");
    let q = Rational::from_integer((p as i64 + 1).into());
    let f = PadicField::new(p, precision, &q)?;
    let ctx = IntegrationContext::new(p, precision)?;
    let n = pt.n.unwrap_or(0);
    let r = pt.r.unwrap_or(1);
    let h = pt.h.unwrap_or(0);
    let x = pt.x.unwrap_or(0);
    let px = Point::Int(x);
    let run = |g: &Integrand<PadicField>, m: &MeasureSpec| {
        multivariate_fermionic_integral(&ctx, &f, g, m, level)
    };
    let (closed, res) = match kind {
        Int::Basic => {
            let g = Integrand::bracket_power(x, vec![1], n, 0)?;
            (euler_q(&f, n, &px)?, run(&g, &MeasureSpec::plain(1))?)
        }
        Int::OrderR => {
            let g = Integrand::bracket_power(x, ones(r), n, 0)?;
            (euler_order_r(&f, n, r, &px)?, run(&g, &MeasureSpec::plain(r as usize))?)
        }
        Int::Hr => {
            let g = Integrand::bracket_power(x, ones(r), n, 0)?;
            let m = MeasureSpec::new(vec![0; r as usize], hr_weights(h, r))?;
            (euler_hr(&f, n, h, r, &px)?, run(&g, &m)?)
        }
        Int::HNegR => {
            // the defining sum with each denominator computed as an integral
            let m = MeasureSpec::new(vec![0; r as usize], hr_weights(h, r))?;
            let mut acc = f.zero();
            let mut threshold = precision;
            for l in 0..=n as i64 {
                let g = Integrand::bracket_power(0, ones(r), 0, l)?;
                let res = run(&g, &m)?;
                threshold = threshold.min(res.achieved_precision);
                let c = f.from_bigint(&binomial(n as i64, l));
                let term = f.div(&f.mul(&c, &f.q_pow(l * x)?), &res.value)?;
                acc = if l % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
            }
            let omq = f.sub(&f.one(), &f.q());
            let value = f.div(&acc, &f.pow(&omq, n as i64)?)?;
            let closed = euler_h_neg_r(&f, n, h, r, &px)?;
            return Ok(compare(&f, &closed, &value, threshold - n as i64));
        }
        Int::Weighted | Int::WeightedLiteral => {
            let (w, d) = WEIGHT_CONFIGS[pt.k.unwrap_or(0) as usize];
            let g = Integrand::bracket_power(x, w.to_vec(), n, 0)?;
            let m = MeasureSpec::new(d.to_vec(), vec![0; w.len()])?;
            let closed = if kind == Int::Weighted {
                euler_weighted(&f, n, &px, w, d)?
            } else {
                euler_weighted_literal(&f, n, &px, w, d)?
            };
            (closed, run(&g, &m)?)
        }
        Int::WeightedStar | Int::WeightedStarLiteral => {
            let (w, d) = WEIGHT_CONFIGS[pt.k.unwrap_or(0) as usize];
            let m = MeasureSpec::new(vec![0; w.len()], d.to_vec())?;
            if kind == Int::WeightedStar {
                let g = Integrand::bracket_power(x, w.to_vec(), n, 0)?;
                (euler_weighted_star(&f, n, &px, w, d)?, run(&g, &m)?)
            } else {
                let g = Integrand::bracket_power(0, w.to_vec(), n, 0)?;
                (euler_weighted_star_literal(&f, n, &px, w, d)?, run(&g, &m)?)
            }
        }
        Int::Moment => {
            let mi = pt.m.unwrap_or(0) as i64;
            let b = f.neg(&f.q_pow(mi - r as i64)?);
            let closed = f.div(
                &f.mul(&f.q_pow(mi * x)?, &f.pow(&f.from_int(2), r as i64)?),
                &q_pochhammer(&f, &b, r),
            )?;
            let g = Integrand::bracket_power(x, ones(r), 0, mi)?;
            let w = (1..=r as i64).map(|j| -j).collect();
            (closed, run(&g, &MeasureSpec::new(vec![0; r as usize], w)?)?)
        }
        Int::ShiftRelation => {
            let g = Integrand::bracket_power(0, vec![1], n, 0)?;
            let shift = pt.k.unwrap_or(1);
            let rep = shift_relation_check(&ctx, &f, &g, shift, 1..=level)?;
            let pass = rep.shrinking
                && rep
                    .rows
                    .iter()
                    .all(|row| row.defect_valuation.map_or(true, |v| v >= row.level as i64));
            let render = |v: Option<i64>| v.map_or("inf".to_string(), |v| v.to_string());
            let defects: Vec<String> = rep.rows.iter().map(|r| render(r.defect_valuation)).collect();
            return Ok(Outcome {
                pass,
                lhs: format!("defect valuations [{}]", defects.join(",")),
                rhs: "each >= its level, nondecreasing".into(),
            });
        }
    };
    Ok(compare(&f, &closed, &res.value, res.achieved_precision))
}
