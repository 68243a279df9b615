//! Parsers for the small command-line grammars.

use std::ops::RangeInclusive;

use qeuler::numeric::rational::{parse_rational, Rational};

/// The value of `--q`.
#[derive(Debug, Clone, PartialEq)]
pub enum QLiteral {
    /// Symbolic `q` in the function field.
    Omitted,
    /// `1+p` for the `p`-adic backend.
    OnePlusP,
    Rational(Rational),
}

impl QLiteral {
    pub fn parse(s: Option<&str>) -> Result<Self, String> {
        let Some(s) = s else { return Ok(QLiteral::Omitted) };
        let t = s.trim();
        if t.replace(' ', "") == "1+p" {
            return Ok(QLiteral::OnePlusP);
        }
        parse_rational(t)
            .map(QLiteral::Rational)
            .map_err(|e| format!("bad --q '{s}': {e} (expected a/b or 1+p)"))
    }
}

/// `A..B` (inclusive, empty when `B < A`) or a single `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let t = s.trim();
    let int = |v: &str| {
        v.trim()
            .parse::<i64>()
            .map_err(|_| format!("bad range '{s}': expected A..B or A"))
    };
    match t.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(int(a)?..=int(b)?)
        }
        None => {
            let a = int(t)?;
            Ok(a..=a)
        }
    }
}

/// The same as [`parse_range`], restricted to nonnegative bounds.
pub fn parse_unsigned_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let r = parse_range(s)?;
    let conv = |v: i64| u32::try_from(v).map_err(|_| format!("range '{s}' must be nonnegative"));
    Ok(conv(*r.start())?..=conv(*r.end())?)
}

/// A comma-separated list of integers; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad list '{s}': expected comma-separated integers"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qeuler::numeric::rational::rat;

    #[test]
    fn q_literals() {
        assert_eq!(QLiteral::parse(None).unwrap(), QLiteral::Omitted);
        assert_eq!(QLiteral::parse(Some("1+p")).unwrap(), QLiteral::OnePlusP);
        assert_eq!(QLiteral::parse(Some("-5/2")).unwrap(), QLiteral::Rational(rat(-5, 2)));
        assert!(QLiteral::parse(Some("1+q")).is_err());
        assert!(QLiteral::parse(Some("1/0")).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..4").unwrap(), 0..=4);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert_eq!(parse_range("-1..2").unwrap(), -1..=2);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("3..2").unwrap().is_empty());
        assert!(parse_range("a..b").is_err());
        assert!(parse_unsigned_range("-1..2").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("1, 2,-3").unwrap(), vec![1, 2, -3]);
        assert_eq!(parse_list("").unwrap(), Vec::<i64>::new());
        assert!(parse_list("1,,2").is_err());
    }
}
