//! Fixed numeric formatting for CSV output.

/// C-style `%.12e`: twelve mantissa decimals, signed exponent of at least two digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let rust = format!("{x:.12e}");
    let (mantissa, exponent) = rust
        .split_once('e')
        .expect("exponent formatting always contains 'e'");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}
