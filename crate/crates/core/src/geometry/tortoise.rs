use crate::error::{Error, Result};

pub const TORTOISE_TOL: f64 = 1e-14;

const MAX_NEWTON: usize = 100;

/// `r + 2M log((r - 2M)/M)`.
pub fn tortoise_forward(r: f64, m: f64) -> f64 {
    if m == 0.0 {
        return r;
    }
    r + 2.0 * m * ((r - 2.0 * m) / m).ln()
}

/// Area radius `r > 2M` with `tortoise_forward(r, M) = rstar`.
pub fn tortoise_invert(rstar: f64, m: f64, tol: f64) -> Result<f64> {
    if m == 0.0 {
        return Ok(rstar);
    }
    let guess = rstar - 2.0 * m * (rstar.max(3.0 * m) / m).ln();
    invert_from(rstar, m, guess, tol)
}

pub(crate) fn invert_from(rstar: f64, m: f64, guess: f64, tol: f64) -> Result<f64> {
    if m == 0.0 {
        return Ok(rstar);
    }
    if !(m > 0.0) || !rstar.is_finite() {
        return Err(Error::Tortoise { rstar, reason: format!("invalid mass {m}") });
    }
    let hi0 = rstar.max(3.0 * m);
    let lo0 = 2.0 * m + m * ((rstar - hi0) / (2.0 * m)).exp();
    if !(lo0 > 2.0 * m) {
        return Err(Error::Tortoise { rstar, reason: "no bracket above the horizon".into() });
    }
    let f = |r: f64| tortoise_forward(r, m) - rstar;
    let (mut lo, mut hi) = (lo0, hi0);
    let target = tol * rstar.abs().max(1.0);
    let mut r = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_NEWTON {
        let fr = f(r);
        if fr.abs() <= target {
            return Ok(r);
        }
        if fr < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let step = fr * (1.0 - 2.0 * m / r);
        let next = r - step;
        r = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let fr = f(r);
    if fr.abs() <= target.max(8.0 * f64::EPSILON * rstar.abs().max(r)) {
        Ok(r)
    } else {
        Err(Error::Tortoise { rstar, reason: format!("residual {fr:e} after bracketing") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_point() {
        assert!((tortoise_invert(3.0, 1.0, 1e-14).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn forward_round_trip() {
        let r = tortoise_invert(1e4, 1.0, 1e-14).unwrap();
        assert!((tortoise_forward(r, 1.0) - 1e4).abs() < 1e-10);
        for e in -20..=40 {
            let x = 10f64.powf(e as f64 / 5.0) - 5.0;
            let r = tortoise_invert(x, 1.0, 1e-14).unwrap();
            assert!(r > 2.0);
            assert!((tortoise_forward(r, 1.0) - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn large_radius_asymptotics() {
        let x = 1e6;
        let r = tortoise_invert(x, 1.0, 1e-14).unwrap();
        assert!((r - (x - 2.0 * x.ln())).abs() < 1e-3);
    }

    #[test]
    fn deep_near_horizon_fails_cleanly() {
        assert!(matches!(tortoise_invert(-5000.0, 1.0, 1e-14), Err(Error::Tortoise { .. })));
    }
}
