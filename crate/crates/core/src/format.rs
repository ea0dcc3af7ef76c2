//! Real-number renderings used for hashing and receipts.

/// Shortest decimal that round-trips to `value`, with at least 9 significant
/// digits, in scientific notation (`1.50000000e0`). Negative zero renders as
/// zero.
pub fn canonical_real(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    let nine = format!("{value:.8e}");
    if nine.parse::<f64>() == Ok(value) {
        nine
    } else {
        format!("{value:e}")
    }
}

/// Renders with 9 significant digits, trailing zeros trimmed (like C's `%.9g`).
pub fn sig9(value: f64) -> String {
    sig_digits(value, 9)
}

pub fn sig_digits(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return if value.is_nan() {
            "nan".into()
        } else if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_real(1.5), "1.50000000e0");
        assert_eq!(canonical_real(-0.0), "0.00000000e0");
        assert_eq!(canonical_real(0.1 + 0.2), "3.0000000000000004e-1");
    }

    #[test]
    fn sig9_forms() {
        assert_eq!(sig9(4.5), "4.5");
        assert_eq!(sig9(-1.0), "-1");
        assert_eq!(sig9(0.268941421369995), "0.268941421");
        assert_eq!(sig9(1.0 / 3.0 * 1e12), "3.33333333e11");
        assert_eq!(sig9(1e-7), "1e-7");
        assert_eq!(sig9(123456789.4), "123456789");
    }

    proptest! {
        #[test]
        fn canonical_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let text = canonical_real(v);
            prop_assert_eq!(text.parse::<f64>().unwrap(), if v == 0.0 { 0.0 } else { v });
            let mantissa = text.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            prop_assert!(mantissa.len() >= 9);
        }
    }
}
