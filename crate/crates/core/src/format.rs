//! Number rendering for reports.

use rug::Float;

/// Significant digits written to CSV and JSON.
pub const FULL_DIGITS: usize = 17;

/// Splits a finite non-zero value into decimal digits and a base-10
/// exponent such that `value = 0.d1d2...dn * 10^exp`.
fn digits_and_exponent(value: &Float, digits: usize) -> (bool, String, i64) {
    let text = value.to_string_radix(10, Some(digits));
    let negative = text.starts_with('-');
    let body = text.trim_start_matches('-');
    let (mantissa, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().expect("MPFR exponent")),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut all = format!("{int_part}{frac_part}");
    // position of the decimal point relative to the start of `all`
    let mut point = int_part.len() as i64 + exp;
    let leading = all.len() - all.trim_start_matches('0').len();
    all.drain(..leading);
    point -= leading as i64;
    all.truncate(digits);
    while all.len() < digits {
        all.push('0');
    }
    (negative, all, point)
}

/// Scientific notation with a leading `0.` and `digits` significant digits,
/// e.g. `0.47200e-25`.
pub fn fraction_style(value: &Float, digits: usize) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value.is_sign_negative() {
            "-inf"
        } else {
            "inf"
        }
        .into();
    }
    if value.is_zero() {
        return format!("0.{}e+0", "0".repeat(digits));
    }
    let (negative, digits, point) = digits_and_exponent(value, digits);
    let sign = if negative { "-" } else { "" };
    let exp_sign = if point < 0 { '-' } else { '+' };
    format!("{sign}0.{digits}e{exp_sign}{}", point.abs())
}

/// Five significant digits, as used in text reports.
pub fn short(value: &Float) -> String {
    fraction_style(value, 5)
}

/// [`FULL_DIGITS`] significant digits in plain scientific notation.
pub fn full(value: &Float) -> String {
    if value.is_zero() {
        return "0".into();
    }
    value.to_string_radix(10, Some(FULL_DIGITS))
}
