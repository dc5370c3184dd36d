//! Exact rational arithmetic helpers.
//!
//! Thresholds such as `α|S|` sit exactly on vote boundaries in constructed
//! instances, so every comparison against them is done on [`Rational`]
//! values rather than floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"3"`, `"0.75"`, `"-1.5"`, `".5"` or `"3/4"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::invalid(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Converts a float to the rational denoted by its shortest round-trip
/// decimal representation, so that writing and re-reading it is lossless.
pub fn from_f64(value: f64) -> Result<Rational> {
    if !value.is_finite() {
        return Err(Error::invalid(format!("non-finite value {value}")));
    }
    parse_rational(&format!("{value}"))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `⌈value⌉` for a nonnegative rational.
pub fn ceil_usize(value: &Rational) -> usize {
    value.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// `⌊value⌋` for a nonnegative rational; negative values clamp to zero.
pub fn floor_usize(value: &Rational) -> usize {
    if value.is_negative() {
        return 0;
    }
    value.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Formats a rational as a terminating decimal when one exists, and as
/// `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let mut den = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (value * Rational::from_integer(scale)).to_integer();
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    format!("{}{whole}.{frac}", if negative { "-" } else { "" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.75").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("1").unwrap(), ratio(1, 1));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-2.25").unwrap(), ratio(-9, 4));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1e5").is_err());
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&ratio(3, 4)), "0.75");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
        assert_eq!(format_rational(&ratio(5, 1)), "5");
        assert_eq!(format_rational(&ratio(1, 20)), "0.05");
        assert_eq!(format_rational(&ratio(-1, 8)), "-0.125");
    }

    #[test]
    fn float_conversion_uses_shortest_decimal() {
        assert_eq!(from_f64(0.1).unwrap(), ratio(1, 10));
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(ceil_usize(&ratio(5, 2)), 3);
        assert_eq!(ceil_usize(&ratio(4, 2)), 2);
        assert_eq!(floor_usize(&ratio(5, 2)), 2);
        assert_eq!(floor_usize(&ratio(-1, 2)), 0);
    }

    proptest::proptest! {
        #[test]
        fn format_parse_round_trip(num in -10_000i64..10_000, den in 1i64..2_000) {
            let value = ratio(num, den);
            proptest::prop_assert_eq!(parse_rational(&format_rational(&value)).unwrap(), value);
        }
    }
}
