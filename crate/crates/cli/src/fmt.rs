//! Numeric and CSV formatting: `%.17g` semantics so every `f64` round-trips
//! exactly while integers and short fractions stay readable.

/// Format with the selection and trimming rules of C's `%.17g`: fixed
/// notation while the decimal exponent lies in `[-4, 17)`, scientific
/// notation otherwise, trailing zeros removed, exponent written with a sign
/// and at least two digits.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    const P: i32 = 17;
    // Style is chosen from the exponent of the value *after* rounding to 17
    // significant digits, exactly as the C rule states.
    let e_repr = format!("{:.*e}", (P - 1) as usize, x);
    let epos = e_repr.find('e').unwrap();
    let exp: i32 = e_repr[epos + 1..].parse().unwrap();
    if exp >= -4 && exp < P {
        let prec = (P - 1 - exp) as usize;
        strip_trailing_zeros(format!("{:.*}", prec, x))
    } else {
        let mantissa = strip_trailing_zeros(e_repr[..epos].to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", mantissa, sign, exp.abs())
    }
}

fn strip_trailing_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Minimal RFC-4180 quoting for free-text CSV fields.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_style_g() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "-0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(-0.25), "-0.25");
        assert_eq!(fmt_g17(10.0 / 3.0), "3.3333333333333335");
        assert_eq!(fmt_g17(1.0 / 12.0), "0.083333333333333329");
        assert_eq!(fmt_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_g17(2.0_f64.powi(-23)), "1.1920928955078125e-07");
        assert_eq!(fmt_g17(-2.5e20), "-2.5e+20");
        assert_eq!(fmt_g17(1e16), "10000000000000000");
        assert_eq!(fmt_g17(1e17), "1e+17");
        assert_eq!(fmt_g17(1.5e-4), "0.00014999999999999999");
        assert_eq!(fmt_g17(10.0 * 2.0_f64.powi(-16)), "0.000152587890625");
    }

    #[test]
    fn round_trips_exactly() {
        let values = [
            1.0 / 12.0,
            -1.0 / 6.0,
            10.0 / 3.0,
            0.97,
            2.0_f64.sqrt(),
            6.02214076e23,
            -1.6e-35,
            f64::MIN_POSITIVE,
            f64::MAX,
            5e-324,
        ];
        for &v in &values {
            let s = fmt_g17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} printed as {s}");
        }
    }

    #[test]
    fn quotes_only_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
