//! Exact rational helpers and their serialized form.
//!
//! Bound verdicts are computed over `BigRational` so they cannot flip on float
//! noise; reports serialize rationals as `"p/q"` strings next to an `f64`
//! convenience value.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q` in lowest terms; integers render without the denominator.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, a plain integer, or a decimal string such as `"0.25"`
/// into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0"
        } else {
            int_part
        };
        let int: BigInt = int_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        if frac_part.is_empty() {
            return Ok(BigRational::from_integer(int));
        }
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        if frac.is_negative() {
            return Err(Error::Parse(format!("bad decimal in {s:?}")));
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = BigRational::new(int.abs() * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let int: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(BigRational::from_integer(int))
}

/// serde adapter: `#[serde(with = "crate::ratio::serde_ratio")]`.
pub mod serde_ratio {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(de)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_ints() {
        assert_eq!(parse_ratio("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_ratio("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_ratio("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_ratio("2").unwrap(), ratio(2, 1));
        assert_eq!(parse_ratio("1.").unwrap(), ratio(1, 1));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn round_trips_formatting() {
        for (n, d) in [(1i64, 4i64), (-3, 8), (7, 1), (0, 5)] {
            let r = ratio(n, d);
            assert_eq!(parse_ratio(&format_ratio(&r)).unwrap(), r);
        }
    }
}
