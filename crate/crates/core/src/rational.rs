//! Exact scalars.
//!
//! Every length in the library is a [`Rational`] (an arbitrary precision
//! fraction). Text forms are `"p/q"`, `"p"` or a finite decimal such as
//! `"1.25"`; output always uses the reduced `"p/q"` / `"p"` form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{text}` as an exact rational")]
pub struct ParseRationalError {
    pub text: String,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    frac(1, 2)
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        text: text.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits_ok = !frac_part.is_empty() && frac_part.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok {
            return Err(err());
        }
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let fractional: BigInt = frac_part.parse().map_err(|_| err())?;
        let magnitude = Rational::new(whole * &scale + fractional, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Reduced `p/q`, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    Rational::from_f64(x)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on huge operands; scale down by hand.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn max_of<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Option<Rational> {
    it.into_iter().max().cloned()
}

pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    use num_integer::Integer;
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

/// Display adapter so rationals can go straight into `format!`.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

/// serde adapter: a single rational as a `"p/q"` string.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        from_json_value(&value, false).map_err(de::Error::custom)
    }
}

/// serde adapter: a list of rationals as `"p/q"` strings.
pub mod serde_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let values = Vec::<serde_json::Value>::deserialize(d)?;
        values
            .iter()
            .map(|v| from_json_value(v, false).map_err(de::Error::custom))
            .collect()
    }
}

/// serde adapter: an optional rational, `null` when absent.
pub mod serde_opt {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }
}

/// Reads a JSON scalar as a rational. Strings are parsed exactly; integer
/// numbers are exact as well. Non-integer numbers are only accepted when
/// `allow_float` is set, and are then taken at their exact binary value.
pub fn from_json_value(v: &serde_json::Value, allow_float: bool) -> Result<Rational, String> {
    match v {
        serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else if allow_float {
                let x = n.as_f64().ok_or_else(|| format!("unreadable number {n}"))?;
                from_f64(x).ok_or_else(|| format!("non-finite number {n}"))
            } else {
                Err(format!(
                    "number {n} is not exact; write it as a \"p/q\" string or use float mode"
                ))
            }
        }
        other => Err(format!("expected a rational, found {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_text_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("1.25").unwrap(), frac(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 4 / 8 ").unwrap(), frac(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&frac(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(13)), "13");
        assert_eq!(format_rational(&frac(-1, 3)), "-1/3");
    }

    #[test]
    fn float_conversion_is_exact() {
        let q = from_f64(0.1).unwrap();
        assert_eq!(to_f64(&q), 0.1);
        assert!(from_f64(f64::NAN).is_none());
    }

    #[test]
    fn json_numbers() {
        let v: serde_json::Value = serde_json::json!(4);
        assert_eq!(from_json_value(&v, false).unwrap(), rat(4));
        let v: serde_json::Value = serde_json::json!(0.5);
        assert!(from_json_value(&v, false).is_err());
        assert_eq!(from_json_value(&v, true).unwrap(), frac(1, 2));
    }
}
