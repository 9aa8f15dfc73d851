//! Integer cost arithmetic for the dynamic programs, with a distinguished
//! infinity that never mixes with finite values.

use crate::rational::{self, Rational};

pub(crate) const INF: i64 = i64::MAX;

pub(crate) fn add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

/// Scale factor turning every listed rational into an integer.
pub(crate) fn scale_for<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    rational::common_denominator(values)
}

pub(crate) fn unscale(value: i64, scale: i64) -> Rational {
    Rational::new(value, scale)
}

/// Prefix sums of `costs` sorted ascending: entry `s` is the cheapest way to
/// take `s` items.
pub(crate) fn cheapest_prefix(sorted: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(sorted.len() + 1);
    out.push(0);
    let mut acc = 0;
    for &c in sorted {
        acc += c;
        out.push(acc);
    }
    out
}
