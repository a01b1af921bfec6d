//! Text syntax for generators and integer ranges.
//!
//! A generator is a sum of terms joined by `+`; a term is `[c*]Ln` or
//! `[c*]Gr` with a rational coefficient `c` (`p` or `p/q`), an integer `n`
//! and a half-integer `r` written `p/2`. A bare leading `-` negates the
//! term. Whitespace is ignored. Generator lists are separated by `,`.

use mumford_core::scalar::{parse_scalar, Scalar};
use mumford_core::super_ns::{HalfInt, NSElement};
use mumford_core::witt::WittElement;
use mumford_core::{Error, Result};
use num_traits::One;

fn parse_term(term: &str) -> Result<NSElement> {
    let (coef, basis) = match term.rsplit_once('*') {
        Some((c, b)) => (parse_scalar(c)?, b),
        None => match term.strip_prefix('-') {
            Some(rest) => (-Scalar::one(), rest),
            None => (Scalar::one(), term),
        },
    };
    let mut chars = basis.chars();
    let element = match chars.next() {
        Some('L') => {
            let n: i64 = chars.as_str().parse().map_err(|_| Error::Parse(format!("bad L index in `{term}`")))?;
            NSElement::l(n)
        }
        Some('G') => {
            let r: HalfInt = chars.as_str().parse()?;
            if r.is_integer() {
                return Err(Error::Parse(format!("G index must be a half-integer like 3/2 in `{term}`")));
            }
            NSElement::g(r.twice())
        }
        _ => return Err(Error::Parse(format!("expected a term `c*Ln` or `c*Gr`, got `{term}`"))),
    };
    Ok(element.scale(&coef))
}

pub fn parse_ns(text: &str) -> Result<NSElement> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty generator".into()));
    }
    compact.split('+').try_fold(NSElement::zero(), |acc, t| Ok(acc.add(&parse_term(t)?)))
}

pub fn parse_witt(text: &str) -> Result<WittElement> {
    let x = parse_ns(text)?;
    if !x.g_terms().is_empty() {
        return Err(Error::Parse(format!("`{text}` has odd G terms; use super-mumford-jet")));
    }
    Ok(WittElement::from_terms(x.l_terms().iter().map(|(n, c)| (*n, c.clone()))))
}

pub fn split_list(text: &str) -> Vec<&str> {
    text.split(',').filter(|s| !s.trim().is_empty()).collect()
}

/// `a..b` (inclusive), `a..=b`, a comma list, or a single integer.
pub fn parse_range(text: &str) -> Result<Vec<i64>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{s}` in `{text}`")));
    if let Some((a, b)) = compact.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (int(a)?, int(b)?);
        if a > b {
            return Err(Error::Parse(format!("empty range `{text}`")));
        }
        return Ok((a..=b).collect());
    }
    compact.split(',').map(int).collect()
}

pub fn parse_weights(text: &str) -> Result<(i64, i64)> {
    match parse_range(text)?.as_slice() {
        [w2, w1] if !text.contains("..") => Ok((*w2, *w1)),
        _ => Err(Error::Parse(format!("weights must be `w2,w1`, got `{text}`"))),
    }
}
