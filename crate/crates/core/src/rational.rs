//! Exact rationals for thresholds, targets, shares and costs.
//!
//! Backed by [`num_rational::Ratio<i64>`], which keeps values in lowest terms
//! with a positive denominator. Documents carry rationals as `"num/den"`
//! strings.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Parses `"num/den"` or a bare integer.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (text.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den <= 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"num/den"`, always with an explicit denominator.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// `ceil(value * n)` in exact arithmetic.
pub fn ceil_mul(value: &Rational, n: u64) -> u64 {
    let scaled = value * int(n as i64);
    let c = scaled.ceil().to_integer();
    c.max(0) as u64
}

/// Rounds a share in `[0, 1]` to the nearest whole percent, halves up.
pub fn percent(value: &Rational) -> i64 {
    (value * int(100) + ratio(1, 2)).floor().to_integer()
}

/// Least common multiple of the denominators, so that every value becomes an
/// integer after multiplying by it.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, v| acc.lcm(v.denom()))
}

/// `value * scale` as an integer; `scale` must be a multiple of the
/// denominator.
pub fn scale_to_int(value: &Rational, scale: i64) -> i64 {
    let scaled = value * int(scale);
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}

pub fn is_non_negative(value: &Rational) -> bool {
    !value.is_negative()
}

pub fn zero() -> Rational {
    Rational::zero()
}
