//! Exact rational helpers.
//!
//! Every real-valued quantity (bandwidths, batch sizes, throughputs, amounts,
//! average AoI) is a [`Rational`]. Textual form is `p/q` or a bare integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, `-p/q` or an integer. The result is reduced.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("malformed rational `{text}`"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text: integers print without a denominator.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Returns `Some(n)` when `r` is a positive integer that fits in `u64`.
pub fn as_positive_integer(r: &Rational) -> Option<u64> {
    if r.is_integer() && r.is_positive() {
        r.numer().to_u64()
    } else {
        None
    }
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.numer()
        .div_floor(r.denom())
        .to_i64()
        .expect("floor out of i64 range")
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.numer()
        .div_ceil(r.denom())
        .to_i64()
        .expect("ceil out of i64 range")
}

/// Lossy conversion for presentation only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_text {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => super::parse(&t).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(super::int(i)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("10/7").unwrap(), ratio(10, 7));
        assert_eq!(parse(" 4/2 ").unwrap(), int(2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(format(&ratio(29, 2)), "29/2");
        assert_eq!(format(&ratio(6, 3)), "2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(floor_i64(&ratio(-1, 2)), -1);
        assert_eq!(ceil_i64(&ratio(7, 2)), 4);
        assert_eq!(as_positive_integer(&ratio(10, 2)), Some(5));
        assert_eq!(as_positive_integer(&ratio(10, 3)), None);
        assert_eq!(as_positive_integer(&int(0)), None);
    }
}
