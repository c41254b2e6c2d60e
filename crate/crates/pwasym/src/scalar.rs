//! Exact rational scalars.
//!
//! Every real-valued quantity in this crate is an arbitrary-precision
//! rational. All comparisons are total and all arithmetic is exact, so
//! geometric predicates and the acceptance properties built on them are
//! plain equalities rather than tolerance checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational p/q (q must be nonzero).
pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses an exact number: integer (`-3`), rational (`5/4`) or decimal
/// (`0.25`). Decimals are read exactly (base-ten denominator), never via
/// binary floating point.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{s}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole == "-" || whole.is_empty() {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| format!("bad number `{s}`"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal part in `{s}`"));
        }
        let digits: BigInt = frac.parse().map_err(|_| format!("bad number `{s}`"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigRational::new(digits, scale);
        let whole_part = BigRational::from_integer(w);
        return Ok(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    Ok(BigRational::from_integer(n))
}

/// Fixed-point decimal rendering (used only for SVG coordinates, where
/// exactness does not matter but determinism does).
pub fn to_decimal_string(x: &Scalar, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    // round half away from zero
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        (scaled - half).ceil().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    };
    let negative = rounded.is_negative();
    let abs = rounded.magnitude().to_string();
    let digits = if abs.len() <= places as usize {
        format!("{}{}", "0".repeat(places as usize + 1 - abs.len()), abs)
    } else {
        abs
    };
    let split = digits.len() - places as usize;
    let (whole, frac) = digits.split_at(split);
    let sign = if negative { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}
