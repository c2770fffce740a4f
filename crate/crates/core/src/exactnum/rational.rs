//! Parsing and decimal formatting of arbitrary-precision rationals.
//!
//! Rationals cross the crate boundary as strings ("-1/2", "23/96") so that
//! JSON stays exact; decimals are parsed exactly (every finite decimal,
//! including scientific notation, is a rational) and formatted with
//! explicit rounding direction so printed bounds remain bounds.

use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};
use std::str::FromStr;

/// Parses a rational from "a/b" or "a" form (optional sign, arbitrary size).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty rational literal"));
    }
    let bad = || Error::invalid(format!("bad rational {t:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {t:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
    }
}

/// Formats a rational as "a/b", or "a" when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Parses a decimal literal (optionally signed, optionally scientific:
/// "-0.125", "1.5e-3", "2e10", ".5") into the exact rational it denotes.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = |msg: &str| Error::invalid(format!("bad decimal {t:?}: {msg}"));
    if t.is_empty() {
        return Err(bad("empty"));
    }
    let (mantissa, exp_part) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], Some(&t[i + 1..])),
        None => (t, None),
    };
    let exp: i64 = match exp_part {
        Some(e) if e.is_empty() => return Err(bad("empty exponent")),
        Some(e) => e
            .parse()
            .map_err(|_| bad("exponent is not a small integer"))?,
        None => 0,
    };
    let (sign, digits_part) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits_part.find('.') {
        Some(i) => (&digits_part[..i], &digits_part[i + 1..]),
        None => (digits_part, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad("non-digit in mantissa"));
    }
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|_| bad("mantissa overflow"))?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    };
    Ok(value * BigRational::from_integer(BigInt::from(sign)))
}

/// 10^k as a big integer.
pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

/// Rounding directions for decimal formatting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Round to nearest; exact halves go away from zero.
    Nearest,
    /// Round toward −∞ (safe lower bound).
    Floor,
    /// Round toward +∞ (safe upper bound).
    Ceil,
}

/// Formats `r` with exactly `digits` digits after the decimal point,
/// rounding in the requested direction.
pub fn decimal_string(r: &BigRational, digits: u32, mode: Round) -> String {
    let scaled_num = r.numer() * pow10(digits);
    let den = r.denom().clone();
    let n = match mode {
        Round::Floor => scaled_num.div_floor(&den),
        Round::Ceil => scaled_num.div_ceil(&den),
        Round::Nearest => {
            // round-half-away-from-zero on the exact value scaled_num/den
            let two = BigInt::from(2);
            if scaled_num.is_negative() {
                -((-&scaled_num * &two + &den).div_floor(&(&den * &two)))
            } else {
                (scaled_num * &two + &den).div_floor(&(den * two))
            }
        }
    };
    format_scaled_integer(&n, digits)
}

/// Renders `n / 10^digits` as a plain decimal string.
pub fn format_scaled_integer(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let abs = n.abs().to_string();
    let d = digits as usize;
    let (int_part, frac_part) = if abs.len() > d {
        let split = abs.len() - d;
        (abs[..split].to_string(), abs[split..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", abs, width = d))
    };
    let sign = if neg && (int_part != "0" || frac_part.chars().any(|c| c != '0')) {
        "-"
    } else {
        ""
    };
    if d == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Exact conversion from an f64 (every finite float is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("non-finite sample value {x}")));
    }
    BigRational::from_float(x).ok_or_else(|| Error::invalid(format!("unrepresentable float {x}")))
}

/// Counts the digits after the decimal point in a decimal literal, which is
/// the precision at which that literal was printed. Scientific notation
/// counts the effective decimal places of the expanded form (minimum 0).
pub fn printed_precision(s: &str) -> u32 {
    let t = s.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (t, 0),
    };
    let frac = match mantissa.find('.') {
        Some(i) => mantissa.len() as i64 - i as i64 - 1,
        None => 0,
    };
    (frac - exp).max(0) as u32
}

/// True iff `r` is exactly representable as an f64 product grid value; used
/// only by tests. Rationals with huge terms still convert, just inexactly.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back on a manual mantissa/exponent split for extreme values.
        let digits = 30u32;
        let scaled = (r * BigRational::from_integer(pow10(digits))).round();
        let approx = scaled.numer().to_f64().unwrap_or(0.0);
        approx / 10f64.powi(digits as i32)
    })
}

/// Zero test that tolerates the canonicalized representation.
pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}
