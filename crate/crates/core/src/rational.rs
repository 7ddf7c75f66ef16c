//! Text form of rationals: `"num/den"` or a bare integer `"num"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Shorthand used throughout tests and tables.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parse `"a/b"` or `"a"` (optional leading sign, ASCII digits, surrounding
/// whitespace ignored). A zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |digits: &str, allow_sign: bool| -> Result<BigInt> {
        let body = match digits.as_bytes().first() {
            Some(b'-') | Some(b'+') if allow_sign => &digits[1..],
            _ => digits,
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        digits.parse::<BigInt>().map_err(|_| err())
    };
    let n = parse_int(num, true)?;
    let d = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// Inverse of [`parse_rational`]; integers print without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapters that carry rationals as strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            q: &Option<BigRational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            qs: &[BigRational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(qs.len()))?;
            for q in qs {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
