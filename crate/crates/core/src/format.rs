//! Lossless decimal formatting shared by the CSV writers and the CLI.

use num_complex::Complex;

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// removed, exponent notation outside `[1e-4, 1e17)`.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Formats a complex number as `<re>+<im>i` / `<re>-<im>i`.
pub fn complex17(z: Complex<f64>) -> String {
    let re = sig17(z.re);
    if z.im.is_sign_negative() && z.im != 0.0 {
        format!("{re}-{}i", sig17(-z.im))
    } else {
        format!("{re}+{}i", sig17(z.im.abs()))
    }
}
