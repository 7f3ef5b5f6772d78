//! Number formatting shared by the JSON and CSV writers.
//!
//! Every real is written with 17 significant digits, which round-trips any
//! `f64` exactly. Output never depends on the process locale.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats `x` with 17 significant digits.
///
/// Positional notation for exponents in `[-5, 16]`, scientific otherwise.
/// Non-finite values become `inf`, `-inf` or `nan`.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=16).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let split = exp as usize + 1;
        if split >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(split - digits.len()))
        } else {
            format!("{}.{}", &digits[..split], &digits[split..])
        }
    };
    format!("{sign}{body}")
}

/// Serializes an `f64` as a raw JSON number with 17 significant digits.
/// Non-finite values are written as the strings `"inf"`, `"-inf"`, `"nan"`.
#[derive(Debug, Clone, Copy)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_str(&sig17(self.0));
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub(crate) fn ser_f64<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(serializer)
}

pub(crate) fn ser_f64_vec<S: Serializer>(xs: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(xs.iter().map(|&x| Sig17(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn positional_forms() {
        assert_eq!(sig17(0.5), "0.50000000000000000");
        assert_eq!(sig17(1.0), "1.0000000000000000");
        assert_eq!(sig17(-2.0), "-2.0000000000000000");
        assert_eq!(sig17(0.0), "0.0000000000000000");
        assert_eq!(sig17(2f64.sqrt()), "1.4142135623730951");
        assert_eq!(sig17(1e16), "10000000000000000.0");
        assert_eq!(sig17(0.00012), "0.00012000000000000000");
    }

    #[test]
    fn scientific_forms() {
        assert_eq!(sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(sig17(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(sig17(3e20), "3.0000000000000000e20");
        assert_eq!(sig17(f64::INFINITY), "inf");
    }

    #[test]
    fn json_numbers_are_raw() {
        let s = serde_json::to_string(&vec![Sig17(0.25), Sig17(f64::INFINITY)]).unwrap();
        assert_eq!(s, r#"[0.25000000000000000,"inf"]"#);
    }

    proptest! {
        #[test]
        fn round_trips_exactly(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let text = sig17(x);
            let back: f64 = text.parse().unwrap();
            prop_assert_eq!(back, x);
            // and it is a JSON number
            let json: serde_json::Value = serde_json::from_str(&text).unwrap();
            prop_assert!(json.is_f64());
        }
    }
}
