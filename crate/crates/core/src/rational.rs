//! Exact probabilities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact, normalized rational number. Denominators are always positive.
pub type Prob = BigRational;

pub fn zero() -> Prob {
    Prob::zero()
}

pub fn one() -> Prob {
    Prob::one()
}

pub fn ratio(numer: i64, denom: i64) -> Prob {
    Prob::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse(text: &str) -> Result<Prob> {
    let text = text.trim();
    let bad = || Error::Domain(format!("not a rational: {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Prob::new(numer, denom))
}

/// Parses a rational and requires it to lie in `[0, 1]`.
pub fn parse_prob(text: &str) -> Result<Prob> {
    let p = parse(text)?;
    if p.is_negative() || p > one() {
        return Err(Error::Domain(format!("{text:?} is not a probability")));
    }
    Ok(p)
}

/// `"p/q"` with `gcd(p, q) = 1`, `q > 0`; integers are written without `/1`.
pub fn format(p: &Prob) -> String {
    p.to_string()
}
