use crate::error::{Error, Result};
use statrs::function::gamma as sg;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "gamma", x });
    }
    if x == x.round() && (1.0..=171.0).contains(&x) {
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(sg::gamma(x))
}

/// `1/Gamma(x)`, which is entire: zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 170.0 {
        return (-sg::ln_gamma(x)).exp();
    }
    1.0 / sg::gamma(x)
}

/// `ln |Gamma(x)|`.
pub fn gamma_ln(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "gamma_ln", x });
    }
    if x > 0.0 {
        Ok(sg::ln_gamma(x))
    } else {
        Ok((PI / (PI * x).sin().abs()).ln() - sg::ln_gamma(1.0 - x))
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "digamma", x });
    }
    Ok(sg::digamma(x))
}

/// Harmonic number `H(p) = int_0^1 (1 - x^p)/(1 - x) dx = digamma(p + 1) + gamma_E`.
pub fn harmonic(p: f64) -> Result<f64> {
    if p >= 0.0 && p == p.round() && p <= 64.0 {
        return Ok((1..=p as u32).map(|k| 1.0 / k as f64).sum());
    }
    digamma(p + 1.0).map(|d| d + EULER_GAMMA).map_err(|_| Error::Pole { func: "harmonic", x: p })
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}
