use crate::error::{Error, Result};
use crate::specialfn::harmonic;

fn check_p(p: f64) -> Result<()> {
    if !(p >= -0.5) || !p.is_finite() {
        return Err(Error::Domain(format!("Schwarzschild order-(p+1) condition needs p >= -1/2, got {p}")));
    }
    Ok(())
}

/// `1 - 2p + 2p(1+p)(H((1+p)/2) - H(p/2))`.
pub fn schwarzschild_bracket(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(1.0 - 2.0 * p + 2.0 * p * (1.0 + p) * (harmonic((1.0 + p) / 2.0)? - harmonic(p / 2.0)?))
}

/// `dv psi_cor` on `ubar = -vbar` for unit `psi0`: the integral of `2M |2u'|^-p (vbar - u')^-3`
/// over `u' in (-inf, ubar]`. Mapped to `(0, 1]` by `u' = ubar / t`.
pub fn correction_flux(p: f64, ubar: f64, m: f64) -> Result<f64> {
    check_p(p)?;
    if !(ubar < 0.0) {
        return Err(Error::Domain(format!("the data surface has ubar < 0, got {ubar}")));
    }
    let vbar = -ubar;
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let up = ubar / t;
        2.0 * m * (2.0 * up.abs()).powf(-p) * (vbar - up).powi(-3) * (-ubar) / (t * t)
    };
    Ok(quadrature::double_exponential::integrate(integrand, 0.0, 1.0, 1e-14).integral)
}

/// The bracket recovered from [`correction_flux`] by dividing out `2M 2^-p / (8 |ubar|^(p+2))`.
pub fn bracket_by_quadrature(p: f64) -> Result<f64> {
    let (ubar, m) = (-1.0, 1.0);
    let flux = correction_flux(p, ubar, m)?;
    Ok(flux * 8.0 * f64::abs(ubar).powf(p + 2.0) / (2.0 * m * 2f64.powf(-p)))
}

/// `(psi1^(p+1) - (p+1) psi0^(p+1)) - psi0^(p) M B(p)`, zero exactly for `ell = 0` data with no
/// incoming radiation to order `p + 2-`.
pub fn schwarzschild_order1(p: f64, psi0_p: f64, psi0_p1: f64, psi1_p1: f64, m: f64) -> Result<f64> {
    let b = schwarzschild_bracket(p)?;
    Ok((psi1_p1 - (p + 1.0) * psi0_p1) - psi0_p * m * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(schwarzschild_bracket(0.0).unwrap(), 1.0);
        let want = 8.0 * std::f64::consts::LN_2 - 5.0;
        assert!((schwarzschild_bracket(1.0).unwrap() - want).abs() < 1e-12);
        assert!((schwarzschild_bracket(-0.5).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(schwarzschild_bracket(-0.6).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for p in [-0.5, 0.0, 0.5, 1.0, 2.0, 3.3] {
            let (a, b) = (schwarzschild_bracket(p).unwrap(), bracket_by_quadrature(p).unwrap());
            assert!((a - b).abs() < 1e-10, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn flux_scales_like_ubar_power() {
        let p = 0.7;
        let (a, b) = (correction_flux(p, -3.0, 1.0).unwrap(), correction_flux(p, -30.0, 1.0).unwrap());
        assert!((a / b - 10f64.powf(p + 2.0)).abs() < 1e-9 * a / b);
    }

    #[test]
    fn minkowski_limit() {
        assert_eq!(schwarzschild_order1(1.3, 5.0, 2.0, 2.3 * 2.0, 0.0).unwrap(), 0.0);
        let r = schwarzschild_order1(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!((r + schwarzschild_bracket(1.0).unwrap()).abs() < 1e-15);
    }
}
