//! Signed log-gamma and products of gamma ratios.
//!
//! Every gamma ratio in the crate goes through [`gamma_ratio`], which works
//! with `ln|Γ|` plus an explicit sign so that arguments near 100 do not
//! overflow.

use crate::error::{Error, Result};

/// Arguments within this distance of a non-positive integer are treated as poles.
pub const POLE_EPS: f64 = 1e-8;

/// Distance from `x` to the nearest non-positive integer, or `None` if `x > 0.5`.
fn pole_distance(x: f64) -> Option<f64> {
    if x > 0.5 {
        return None;
    }
    Some((x - x.round()).abs())
}

pub fn is_gamma_pole(x: f64) -> bool {
    matches!(pole_distance(x), Some(d) if d < POLE_EPS)
}

/// `(ln|Γ(x)|, sign Γ(x))`. Errors at poles.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || is_gamma_pole(x) {
        return Err(Error::GammaPole { arg: x });
    }
    let (v, s) = libm::lgamma_r(x);
    Ok((v, if s < 0 { -1.0 } else { 1.0 }))
}

/// Γ(x) for moderate arguments, by exponentiating the signed log-gamma.
pub fn gamma(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_signed(x)?;
    Ok(s * l.exp())
}

/// `Π Γ(num_i) / Π Γ(den_i)`.
///
/// A pole in the numerator is an error. A pole in the denominator (with a
/// finite numerator) makes the ratio exactly zero. Arguments that appear in
/// both lists cancel before any evaluation, so e.g. the sine-transform
/// multiplier at order zero is exactly one.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut num: Vec<f64> = num.to_vec();
    let mut den: Vec<f64> = den.to_vec();
    let mut i = 0;
    while i < num.len() {
        if let Some(pos) = den.iter().position(|&d| d == num[i]) {
            den.swap_remove(pos);
            num.swap_remove(i);
        } else {
            i += 1;
        }
    }
    if let Some(&x) = num.iter().find(|&&x| is_gamma_pole(x)) {
        return Err(Error::GammaPole { arg: x });
    }
    if den.iter().any(|&x| is_gamma_pole(x)) {
        return Ok(0.0);
    }
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in &num {
        let (l, s) = ln_gamma_signed(x)?;
        log += l;
        sign *= s;
    }
    for &x in &den {
        let (l, s) = ln_gamma_signed(x)?;
        log -= l;
        sign *= s;
    }
    Ok(sign * log.exp())
}

/// Beta function B(a, b) for positive arguments.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    gamma_ratio(&[a, b], &[a + b])
}
