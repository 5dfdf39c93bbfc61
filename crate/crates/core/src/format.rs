//! Number formatting shared by the renderers.

use serde::ser::{SerializeSeq, Serializer};

/// Plain decimal notation with 12 significant digits, e.g. `0.333333333333`.
/// Infinite values print as `inf`/`-inf`, NaN as `nan`.
pub fn sig12(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

pub(crate) fn serialize_ratio<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&sig12(*v))
}

pub(crate) fn serialize_ratios<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&sig12(*x))?;
    }
    seq.end()
}

pub(crate) fn serialize_opt_ratio<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&sig12(*x)),
        None => s.serialize_none(),
    }
}

/// Two decimal places.
pub fn fixed2(v: f64) -> String {
    format!("{v:.2}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.2), "0.200000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(414.0 / 16.73), "24.7459653317");
        assert_eq!(sig12(0.00125), "0.00125000000000");
        assert_eq!(sig12(-2.5), "-2.50000000000");
        assert_eq!(sig12(1e13), "10000000000000");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn two_decimals() {
        assert_eq!(fixed2(1.0 / 6.0), "0.17");
        assert_eq!(fixed2(0.5), "0.50");
    }
}
