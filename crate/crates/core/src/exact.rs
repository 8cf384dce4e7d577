//! Exact rational helpers shared by the geometric modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Exact rational number used for lengths, positions and derivative values.
pub type Rational = BigRational;

/// Largest magnitude accepted for a numerator or denominator read from text.
pub const MAX_INPUT_MAGNITUDE: i64 = 1 << 53;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("`{0}` is not a rational of the form p/q or an integer")]
    Syntax(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` exceeds the supported magnitude 2^53")]
    OutOfRange(String),
}

/// Parses `"p/q"` or `"p"` into a normalized rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| ParseRationalError::Syntax(text.into()))?;
    let den = BigInt::from_str(den).map_err(|_| ParseRationalError::Syntax(text.into()))?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.into()));
    }
    let limit = BigInt::from(MAX_INPUT_MAGNITUDE);
    if num.abs() > limit || den.abs() > limit {
        return Err(ParseRationalError::OutOfRange(text.into()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p/q` with `q > 0` and `gcd(p, q) = 1`, or `p` when `q = 1`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Integer value of a rational known to be integral and of moderate size.
pub(crate) fn to_i64(value: &Rational) -> i64 {
    debug_assert!(value.is_integer());
    value
        .to_integer()
        .to_i64()
        .expect("integer exceeds i64; inputs are bounded by 2^53")
}

/// Integers strictly between `a` and `b` (in either order), ascending.
pub(crate) fn integers_strictly_between(a: &Rational, b: &Rational) -> Vec<BigInt> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let first = lo.floor().to_integer() + BigInt::one();
    let last = hi.ceil().to_integer() - BigInt::one();
    let mut out = Vec::new();
    let mut k = first;
    while k <= last {
        out.push(k.clone());
        k += 1;
    }
    out
}

/// Number of integers strictly between `a` and `b`.
pub(crate) fn count_integers_strictly_between(a: &Rational, b: &Rational) -> BigInt {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let first = lo.floor().to_integer() + BigInt::one();
    let last = hi.ceil().to_integer() - BigInt::one();
    if last < first {
        BigInt::zero()
    } else {
        last - first + BigInt::one()
    }
}

pub mod serde_rational {
    //! Serde adapter storing a [`Rational`](super::Rational) as its canonical string.
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("3/-6").unwrap(), rat(-1, 2));
        assert_eq!(format_rational(&rat(3, -6)), "-1/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn rejects_bad_text() {
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!(parse_rational("x"), Err(ParseRationalError::Syntax(_))));
        assert!(matches!(parse_rational("1.5"), Err(ParseRationalError::Syntax(_))));
        assert!(matches!(
            parse_rational("99999999999999999999"),
            Err(ParseRationalError::OutOfRange(_))
        ));
    }

    #[test]
    fn integers_between() {
        let got: Vec<i64> = integers_strictly_between(&rat(-1, 2), &int(3))
            .iter()
            .map(|k| k.to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![0, 1, 2]);
        assert!(integers_strictly_between(&int(1), &int(2)).is_empty());
        assert_eq!(count_integers_strictly_between(&int(5), &rat(-1, 3)), BigInt::from(5));
    }
}
