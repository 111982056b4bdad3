//! Exact rational scalars and their `"p/q"` wire format.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Exact scalar used for all geometry. Always kept in canonical form
/// (reduced, positive denominator) by the underlying representation.
pub type Rational = BigRational;

/// Builds a rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(n: i64) -> Rational {
    BigRational::from(BigInt::from(n))
}

/// Formats a rational as `"p"` or `"p/q"` in canonical form.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed rational literal {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: String,
}

/// Parses `"p"` or `"p/q"` with an optional leading sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason: &str| ParseRationalError {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let denom: BigInt = match den_str {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| err("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err("denominator is zero"));
    }
    Ok(BigRational::new(numer, denom))
}

/// One half, the constant of the total-variation metric.
pub fn one_half() -> Rational {
    ratio(1, 2)
}

/// `|x - y|`.
pub fn abs_diff(x: &Rational, y: &Rational) -> Rational {
    (x - y).abs()
}

/// Serde adapter serializing a [`Rational`] as a `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// A rational that serializes as a `"p/q"` string in any position,
/// including map values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WireRational(pub Rational);

impl Serialize for WireRational {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, ser)
    }
}

impl<'de> Deserialize<'de> for WireRational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        serde_rational::deserialize(de).map(WireRational)
    }
}

impl fmt::Display for WireRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("9/30").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0/5").unwrap(), int(0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("1/2/3").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&ratio(9, 30)), "3/10");
        assert_eq!(format_rational(&int(-4)), "-4");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
    }

    #[test]
    fn round_trips() {
        for s in ["0", "1", "2/3", "-5/7", "13/30"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(format_rational(&x), *s);
        }
    }
}
