//! Exact rational values and their decimal presentation.
//!
//! Every metric is carried as a [`Rational`]; decimals are produced only by
//! [`to_fixed`] and [`approx`] when a value is rendered.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lowest-terms fraction with a positive denominator.
pub type Rational = Ratio<i128>;

pub fn rational(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn approx(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Renders `value` with `places` decimals, rounding half away from zero on
/// the exact value.
pub fn to_fixed(value: &Rational, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = (value * Ratio::from_integer(scale)).round().to_integer();
    let negative = scaled < 0;
    let magnitude = scaled.unsigned_abs();
    let scale = scale as u128;
    let int_part = magnitude / scale;
    let frac_part = magnitude % scale;
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac_part:0width$}",
            width = places as usize
        )
    }
}

/// `num/den` form, or just `num` for integers.
pub fn to_fraction(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"3/10"`, `"0.3"`, `"-1"` or `"2.50"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Config(format!("`{text}` is not a rational number"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_digits, frac_digits) = body.split_once('.').unwrap_or((body, ""));
    if int_digits.is_empty() && frac_digits.is_empty() {
        return Err(bad());
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_digits) || !all_digits(frac_digits) || frac_digits.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{int_digits}{frac_digits}");
    let numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i128
        .checked_pow(frac_digits.len() as u32)
        .ok_or_else(bad)?;
    let value = Ratio::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// JSON shape of an exact value: `{"num": …, "den": …, "approx": …}`.
///
/// `approx` is informational; readers rebuild the value from `num`/`den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactJson {
    pub num: i64,
    pub den: i64,
    pub approx: f64,
}

impl TryFrom<&Rational> for ExactJson {
    type Error = Error;

    fn try_from(value: &Rational) -> Result<Self> {
        let too_large = || Error::Config(format!("{value} does not fit in 64-bit JSON integers"));
        Ok(ExactJson {
            num: (*value.numer()).try_into().map_err(|_| too_large())?,
            den: (*value.denom()).try_into().map_err(|_| too_large())?,
            approx: approx(value),
        })
    }
}

impl ExactJson {
    pub fn to_rational(&self) -> Result<Rational> {
        if self.den <= 0 {
            return Err(Error::Config(format!(
                "denominator must be positive, got {}",
                self.den
            )));
        }
        Ok(Ratio::new(self.num.into(), self.den.into()))
    }
}

/// Serde adapter storing a [`Rational`] as [`ExactJson`].
pub mod exact_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactJson::try_from(value)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = ExactJson::deserialize(d)?;
        raw.to_rational().map_err(serde::de::Error::custom)
    }
}
