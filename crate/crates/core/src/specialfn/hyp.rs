use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const SERIES_RADIUS: f64 = 0.7;
const MAX_TERMS: usize = 20_000;

fn terminating_degree(a: f64) -> Option<u32> {
    (a <= 0.0 && a == a.round() && a > -1e6).then(|| (-a) as u32)
}

/// Gauss hypergeometric function on `z in [-1, 0.7]`, any `z` when terminating.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let n = match (terminating_degree(a), terminating_degree(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(n) = n {
        if let Some(m) = terminating_degree(c) {
            if n > m {
                return Err(Error::Pole { func: "gauss_2f1", x: c });
            }
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
            sum += term;
        }
        return Ok(sum);
    }
    if terminating_degree(c).is_some() {
        return Err(Error::Pole { func: "gauss_2f1", x: c });
    }
    if z.abs() <= SERIES_RADIUS {
        power_series(a, b, c, z)
    } else if (-1.0..-SERIES_RADIUS).contains(&z) {
        let w = z / (z - 1.0);
        Ok((1.0 - z).powf(-a) * power_series(a, c - b, c, w)?)
    } else {
        Err(Error::Domain(format!("2F1 evaluated at z = {z} outside [-1, 0.7]")))
    }
}

fn power_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged(format!("2F1({a}, {b}; {c}; {z}) series")))
}

/// `d/dz 2F1(a, b; c; z)`.
pub fn gauss_2f1_deriv(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    Ok(a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}

/// Exact `2F1(-n, b; c; z)` over the rationals.
pub fn gauss_2f1_terminating_exact(n: u32, b: &BigRational, c: &BigRational, z: &BigRational) -> Result<BigRational> {
    let a = BigRational::from_integer(BigInt::from(-(n as i64)));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 0..n {
        let kq = BigRational::from_integer(BigInt::from(k));
        let den = (c + &kq) * (&kq + BigRational::one());
        if den.is_zero() {
            return Err(Error::Pole { func: "gauss_2f1_terminating_exact", x: f64::NAN });
        }
        term = term * (&a + &kq) * (b + &kq) * z / den;
        sum += &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(gauss_2f1(0.3, 1.7, 2.2, 0.0).unwrap(), 1.0);
        for z in [-3.0, -0.5, 0.2, 0.9] {
            assert!((gauss_2f1(-1.0, 2.0, 2.0, z).unwrap() - (1.0 - z)).abs() < 1e-15);
        }
        assert!((gauss_2f1(-1.0, 2.0, 2.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn elementary_closed_forms() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        for z in [-1.0, -0.9, -0.75, -0.3, 0.4, 0.7] {
            let exact = -(1.0f64 - z).ln() / z;
            assert!((gauss_2f1(1.0, 1.0, 2.0, z).unwrap() - exact).abs() < 1e-13 * exact.abs());
        }
        // 2F1(1/2,1;3/2;-z^2) = atan(z)/z
        let z: f64 = 0.95;
        let exact = z.atan() / z;
        assert!((gauss_2f1(0.5, 1.0, 1.5, -z * z).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn exact_matches_float() {
        let half = BigRational::new(1.into(), 2.into());
        for l in 0..8u32 {
            for p in 0..6i64 {
                let b = BigRational::from_integer((1 + l as i64).into());
                let c = BigRational::from_integer((1 + p).into());
                let q = gauss_2f1_terminating_exact(l, &b, &c, &half).unwrap();
                let f = gauss_2f1(-(l as f64), 1.0 + l as f64, 1.0 + p as f64, 0.5).unwrap();
                let qf = num_traits::ToPrimitive::to_f64(&q).unwrap();
                assert!((qf - f).abs() <= 1e-14 * qf.abs().max(1.0));
            }
        }
    }

    #[test]
    fn outside_domain_is_reported() {
        assert!(matches!(gauss_2f1(0.5, 0.5, 1.5, 0.9), Err(Error::Domain(_))));
        assert!(matches!(gauss_2f1(0.5, 0.5, -2.0, 0.1), Err(Error::Pole { .. })));
    }
}
