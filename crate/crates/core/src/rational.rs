//! Exact rational scalars.
//!
//! Every quantity in this crate (LP data, thresholds, exponents scaled by
//! weights) is an arbitrary-precision rational in lowest terms with a positive
//! denominator. `num-rational` already maintains that normal form after every
//! operation, so this module only adds parsing, formatting and a few integer
//! helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Builds `num/den` from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"` (optional leading sign, decimal digits only).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { text: text.to_string(), reason };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty string"));
    }
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num = parse_integer(num_text).ok_or_else(|| err("numerator is not an integer"))?;
    let den = match den_text {
        Some(d) => {
            let d = parse_integer(d).ok_or_else(|| err("denominator is not an integer"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(num, den))
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn format_vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Least common multiple of the denominators; 1 for an empty slice.
pub fn lcm_of_denominators(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. The zero vector is returned unchanged.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let scale = lcm_of_denominators(values);
    let mut ints: Vec<BigInt> =
        values.iter().map(|v| (v * Rational::from_integer(scale.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if content.is_zero() {
        return ints;
    }
    let negate = ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    for v in &mut ints {
        *v = &*v / &content;
        if negate {
            *v = -&*v;
        }
    }
    ints
}

pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}
