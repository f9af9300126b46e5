//! Locale-free number formatting for CSV output.

/// Formats `x` with 6 significant digits the way C's `%g` does: fixed
/// notation for decimal exponents in `[-4, 6)`, scientific otherwise,
/// trailing zeros removed, `.` as decimal separator.
pub fn sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Round first so the exponent reflects the rounded value (9.999995 -> 10).
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig6;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.65 + 1e-16), "0.65");
        assert_eq!(sig6(0.5 + 3.0 * 0.05), "0.65");
        assert_eq!(sig6(0.031_25), "0.03125");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(-2.0 / 3.0), "-0.666667");
        assert_eq!(sig6(123_456.7), "123457");
        assert_eq!(sig6(1_234_567.0), "1.23457e+06");
        assert_eq!(sig6(0.000_123_456_78), "0.000123457");
        assert_eq!(sig6(0.000_012_345), "1.2345e-05");
        assert_eq!(sig6(9.999_999), "10");
        assert_eq!(sig6(999_999.7), "1e+06");
    }
}
