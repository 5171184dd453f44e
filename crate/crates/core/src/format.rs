//! Fixed 12-significant-digit decimal output.

/// Significant digits used for every number written to a data file.
pub const DIGITS: usize = 12;

/// Shortest rendering of `x` rounded to [`DIGITS`] significant digits, in
/// the style of C's `%.12g` (trailing zeros dropped, exponent form outside
/// `1e-5 <= |x| < 1e12`).
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS as i32 {
        return format!("{}e{exp}", trim(mantissa));
    }
    let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to [`DIGITS`] significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        sig12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI.powi(2) / 2.0), "4.93480220054");
        assert_eq!(sig12(19.739208802178716), "19.7392088022");
        assert_eq!(sig12(-1.0), "-1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1e-7), "1e-7");
        assert_eq!(sig12(-1.2345678901234e15), "-1.23456789012e15");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(9.9999999999999), "10");
        assert_eq!(sig12(123456.0), "123456");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [1.0 / 3.0, 2.0f64.sqrt() * 1e-3, -7.123456789012345e8] {
            let r = round12(x);
            assert_eq!(round12(r), r);
            assert_eq!(sig12(r), sig12(x));
        }
    }
}
