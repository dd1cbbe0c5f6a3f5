//! Exact rational scalars and their textual forms.
//!
//! Literals are either `p/q` fractions or decimal strings such as `0.25`,
//! `-1.5` or `2e-3`; both convert exactly. The canonical text of a rational
//! is `p` for integers and `p/q` otherwise, in lowest terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses a fraction or decimal literal.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let mut numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let pow = num_traits::pow(BigInt::from(10), scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        Rational::from_integer(numer * pow)
    } else {
        Rational::new(numer, pow)
    })
}

/// Canonical text: `p` or `p/q`.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Smallest integer ≥ r.
pub fn ceil(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_text {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("2e-3").unwrap(), ratio(1, 500));
        assert_eq!(parse("1.25E2").unwrap(), int(125));
        assert_eq!(parse("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "abc", "1.2.3", "--1", "nan", "inf", ".", "1/x"] {
            assert!(parse(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&ratio(6, 4)), "3/2");
        assert_eq!(format(&int(-2)), "-2");
        assert_eq!(format(&zero()), "0");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn ceil_and_sqrt() {
        assert_eq!(ceil(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(ceil(&ratio(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&int(3)), BigInt::from(3));
        assert_eq!(sqrt_exact(&ratio(36, 25)), Some(ratio(6, 5)));
        assert_eq!(sqrt_exact(&int(2)), None);
    }

    #[test]
    fn float_round_trip_is_exact() {
        let r = from_f64(0.1);
        assert_eq!(to_f64(&r), 0.1);
        assert_ne!(r, ratio(1, 10));
    }
}
