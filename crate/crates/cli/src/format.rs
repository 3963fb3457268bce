//! Locale-independent 12-significant-digit number formatting.

use serde::{Serialize, Serializer};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` in plain decimal with at most 12 significant digits and no
/// trailing zeros, e.g. `1.09756097561`, `0.0125`, `2`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    // Scientific formatting does the rounding, including carries into a new
    // leading digit.
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let int_digits = exp + 1;

    let mut out = String::with_capacity(SIGNIFICANT_DIGITS + 8);
    if x < 0.0 {
        out.push('-');
    }
    if int_digits <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-int_digits) as usize));
        out.push_str(&digits);
    } else if int_digits as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', int_digits as usize - digits.len()));
    } else {
        let (int, frac) = digits.split_at(int_digits as usize);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    out
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig12(x).parse().expect("sig12 output parses as f64")
}

/// A number serialized after rounding to 12 significant digits. Non-finite
/// values become JSON `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round12(self.0))
        } else {
            s.serialize_none()
        }
    }
}
