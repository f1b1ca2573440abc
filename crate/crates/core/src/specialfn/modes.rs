use super::gamma::{gamma, rgamma};
use super::hyp::{gauss_2f1, gauss_2f1_deriv};
use crate::error::{Error, Result};
use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

const NAT_TOL: f64 = 1e-12;

/// Root `l` of `l(l+1) = -c_tilde` with `Re l >= -1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LValue {
    Real { l: f64 },
    Complex { re: f64, im: f64 },
}

impl LValue {
    pub fn real(&self) -> Option<f64> {
        match self {
            LValue::Real { l } => Some(*l),
            LValue::Complex { .. } => None,
        }
    }

    pub fn is_natural(&self) -> bool {
        match self {
            LValue::Real { l } => *l > -NAT_TOL && (l - l.round()).abs() <= NAT_TOL * l.abs().max(1.0),
            LValue::Complex { .. } => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeParams {
    pub n: u32,
    pub ell: u32,
    pub c: f64,
    pub c_tilde: f64,
    /// `l(l+1) = -c_tilde`.
    pub lambda: f64,
    pub l: LValue,
    /// Conformal smoothness toward future null infinity.
    pub peeling: bool,
}

/// Reduces `Box phi = c phi / r^2` in `n` spatial dimensions on the `ell`-th harmonic.
pub fn effective_mode(n: u32, ell: u32, c: f64) -> Result<ModeParams> {
    if n == 0 {
        return Err(Error::Domain("spatial dimension must be at least 1".into()));
    }
    let (nf, lf) = (n as f64, ell as f64);
    let c_tilde = c - lf * (lf + nf - 2.0) - (nf - 1.0) * (nf - 3.0) / 4.0;
    let disc = 0.25 - c_tilde;
    let l = if disc >= 0.0 {
        LValue::Real { l: -0.5 + disc.sqrt() }
    } else {
        LValue::Complex { re: -0.5, im: (-disc).sqrt() }
    };
    Ok(ModeParams { n, ell, c, c_tilde, lambda: -c_tilde, l, peeling: l.is_natural() })
}

/// Connection coefficients of `2F1(-l, 1+l; 1+p; 1+x)` onto the pair
/// `2F1(-l, 1+l; 1-p; -x)` and `|x|^p 2F1(1+p+l, p-l; 1+p; -x)` at `x = 0`.
pub fn connection_coeffs(p: f64, l: f64) -> Result<(f64, f64)> {
    if (p - p.round()).abs() <= NAT_TOL {
        return Err(Error::Pole { func: "connection_coeffs", x: p });
    }
    let c1 = gamma(1.0 + p)? * gamma(p)? * rgamma(1.0 + p + l) * rgamma(p - l);
    let c2 = gamma(1.0 + p)? * gamma(-p)? * rgamma(-l) * rgamma(1.0 + l);
    Ok((c1, c2))
}

fn mode_rhs(p: f64, lambda: f64, x: f64, y: Vector2<f64>) -> Vector2<f64> {
    Vector2::new(y[1], ((p - 1.0 - 2.0 * x) * y[1] + lambda * y[0]) / (x + x * x))
}

/// Connection coefficients recovered by integrating the mode ODE.
///
/// Seeds the root-zero solution at `x = -1` from its series at `x = x_seed`,
/// integrates to `x = x_match` with classical RK4 and matches value and slope
/// to the two Frobenius solutions at `x = 0`.
pub fn connection_by_continuation(p: f64, l: f64) -> Result<(f64, f64)> {
    const STEPS: usize = 4000;
    let (x_seed, x_match) = (-0.7, -0.3);
    let (a, b, c) = (-l, 1.0 + l, 1.0 + p);
    let mut y = Vector2::new(gauss_2f1(a, b, c, 1.0 + x_seed)?, gauss_2f1_deriv(a, b, c, 1.0 + x_seed)?);
    let lambda = l * (l + 1.0);
    let h = (x_match - x_seed) / STEPS as f64;
    for n in 0..STEPS {
        let x = x_seed + n as f64 * h;
        let k1 = mode_rhs(p, lambda, x, y);
        let k2 = mode_rhs(p, lambda, x + h / 2.0, y + k1 * (h / 2.0));
        let k3 = mode_rhs(p, lambda, x + h / 2.0, y + k2 * (h / 2.0));
        let k4 = mode_rhs(p, lambda, x + h, y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NotConverged("mode ODE continuation left the finite range".into()));
    }

    let w = -x_match;
    let f1 = gauss_2f1(-l, 1.0 + l, 1.0 - p, w)?;
    let f1p = -gauss_2f1_deriv(-l, 1.0 + l, 1.0 - p, w)?;
    let (a2, b2, c2) = (1.0 + p + l, p - l, 1.0 + p);
    let g = gauss_2f1(a2, b2, c2, w)?;
    let gp = gauss_2f1_deriv(a2, b2, c2, w)?;
    let f2 = w.powf(p) * g;
    let f2p = -p * w.powf(p - 1.0) * g - w.powf(p) * gp;
    let m = Matrix2::new(f1, f2, f1p, f2p);
    let sol = m
        .lu()
        .solve(&y)
        .ok_or_else(|| Error::RankDeficient("singular Wronskian at the matching point".into()))?;
    Ok((sol[0], sol[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_dimensions_peel() {
        for ell in 0..5 {
            let m = effective_mode(3, ell, 0.0).unwrap();
            assert!((m.l.real().unwrap() - ell as f64).abs() < 1e-12);
            assert!(m.peeling);
            let m = effective_mode(7, ell, 0.0).unwrap();
            assert!((m.l.real().unwrap() - (ell + 2) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn four_dimensions_fail() {
        let m = effective_mode(4, 0, 0.0).unwrap();
        assert!((m.c_tilde + 0.75).abs() < 1e-15);
        assert!((m.l.real().unwrap() - 0.5).abs() < 1e-15);
        assert!(!m.peeling);
    }

    #[test]
    fn oscillatory_regime_is_complex() {
        let m = effective_mode(3, 0, 0.3).unwrap();
        assert!(matches!(m.l, LValue::Complex { .. }));
        assert!(!m.peeling);
    }

    #[test]
    fn integer_l_kills_second_coefficient() {
        for l in 0..4 {
            let (_, c2) = connection_coeffs(0.37, l as f64).unwrap();
            assert_eq!(c2, 0.0);
        }
        assert!(connection_coeffs(1.0, 0.5).is_err());
    }

    #[test]
    fn continuation_matches_gamma_formula() {
        for (p, l) in [(0.25, 0.5), (0.5, 0.5), (-0.6, 1.3), (1.4, 2.2)] {
            let (c1, c2) = connection_coeffs(p, l).unwrap();
            let (d1, d2) = connection_by_continuation(p, l).unwrap();
            assert!((c1 - d1).abs() < 1e-9 * c1.abs().max(1.0), "c1 {c1} vs {d1}");
            assert!((c2 - d2).abs() < 1e-9 * c2.abs().max(1.0), "c2 {c2} vs {d2}");
        }
    }
}
