//! Closed-form Minkowski mode solutions as finite sums `sum c r0^a r^b`.

use crate::error::{Error, Result};
use crate::specialfn::pochhammer;
use serde::Serialize;
use std::ops::{Add, Mul, Neg};

pub const MAX_EXACT_ELL: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Monomial {
    pub coeff: f64,
    pub pow_r0: f64,
    pub pow_r: f64,
}

/// A finite sum of monomials `c r0^a r^b` in the variables `(r0, r)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Monomials {
    terms: Vec<Monomial>,
}

impl Monomials {
    pub fn new(terms: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let mut m = Monomials { terms: Vec::new() };
        for (coeff, pow_r0, pow_r) in terms {
            m.push(coeff, pow_r0, pow_r);
        }
        m
    }

    pub fn zero() -> Self {
        Monomials::default()
    }

    fn push(&mut self, coeff: f64, pow_r0: f64, pow_r: f64) {
        if coeff == 0.0 {
            return;
        }
        let same = |t: &Monomial| (t.pow_r0 - pow_r0).abs() < 1e-12 && (t.pow_r - pow_r).abs() < 1e-12;
        match self.terms.iter_mut().find(|t| same(t)) {
            Some(t) => t.coeff += coeff,
            None => self.terms.push(Monomial { coeff, pow_r0, pow_r }),
        }
        self.terms.retain(|t| t.coeff != 0.0);
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, r0: f64, r: f64) -> f64 {
        let (l0, l) = (r0.ln(), r.ln());
        self.terms.iter().map(|t| t.coeff * (t.pow_r0 * l0 + t.pow_r * l).exp()).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Monomials::new(self.terms.iter().map(|t| (s * t.coeff, t.pow_r0, t.pow_r)))
    }

    /// Multiplication by `r0^a r^b`.
    pub fn shift(&self, a: f64, b: f64) -> Self {
        Monomials::new(self.terms.iter().map(|t| (t.coeff, t.pow_r0 + a, t.pow_r + b)))
    }

    pub fn d_r0(&self) -> Self {
        Monomials::new(self.terms.iter().map(|t| (t.coeff * t.pow_r0, t.pow_r0 - 1.0, t.pow_r)))
    }

    pub fn d_r(&self) -> Self {
        Monomials::new(self.terms.iter().map(|t| (t.coeff * t.pow_r, t.pow_r0, t.pow_r - 1.0)))
    }

    /// `du` in Minkowski, where `r0 = v0 - u` and `r = v - u`.
    pub fn d_u(&self) -> Self {
        -(self.d_r0() + self.d_r())
    }

    /// `dv` in Minkowski.
    pub fn d_v(&self) -> Self {
        self.d_r()
    }

    /// `(r^2 dv)^n`.
    pub fn r2_dv_pow(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.d_v().shift(0.0, 2.0))
    }
}

impl Add for Monomials {
    type Output = Monomials;
    fn add(mut self, rhs: Monomials) -> Monomials {
        for t in rhs.terms {
            self.push(t.coeff, t.pow_r0, t.pow_r);
        }
        self
    }
}

impl Neg for Monomials {
    type Output = Monomials;
    fn neg(self) -> Monomials {
        self.scale(-1.0)
    }
}

impl Mul for &Monomials {
    type Output = Monomials;
    fn mul(self, rhs: &Monomials) -> Monomials {
        let mut out = Monomials::zero();
        for a in &self.terms {
            for b in &rhs.terms {
                out.push(a.coeff * b.coeff, a.pow_r0 + b.pow_r0, a.pow_r + b.pow_r);
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64))
}

/// No-incoming-radiation solution of the Minkowski `ell`-mode equation with
/// `psi = C r0^-p` on the ingoing cone, as a function of `(r0, r)`.
///
/// `psi = a sum_k binom(ell,k) (-1)^k (ell-p)_k (2ell-k)!/ell! r0^-p (r0/r)^(ell-k)`
/// with a falling factorial `(ell-p)_k` and `a = C / (p+1)^(rising ell)`.
pub fn minkowski_exact_lmode(ell: u32, p: f64, c: f64) -> Result<Monomials> {
    if ell > MAX_EXACT_ELL {
        return Err(Error::Unsupported(format!("closed form for ell = {ell} > {MAX_EXACT_ELL}")));
    }
    if !(p > -1.0) {
        return Err(Error::Domain(format!("closed form needs p > -1, got {p}")));
    }
    let ell_f = ell as f64;
    let fact = |n: u32| (1..=n).fold(1.0, |acc, k| acc * k as f64);
    let a = c / pochhammer(p + 1.0, ell);
    Ok(Monomials::new((0..=ell).map(|k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = a * sign * binomial(ell, k) * falling(ell_f - p, k) * fact(2 * ell - k) / fact(ell);
        let e = (ell - k) as f64;
        (coeff, e - p, -e)
    })))
}

/// `(r^2 dv)^n psi` on the ingoing cone predicted for the closed form:
/// `(-1)^n / (p+1)_n * (ell+n)!/(ell-n)! * C r0^(n-p)`, zero for `n > ell`.
pub fn cone_transversal_coefficient(ell: u32, p: f64, n: u32) -> f64 {
    if n > ell {
        return 0.0;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ratio = ((ell - n + 1)..=(ell + n)).fold(1.0, |acc, k| acc * k as f64);
    sign * ratio / pochhammer(p + 1.0, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_are_reproduced_on_the_cone() {
        for ell in 0..=MAX_EXACT_ELL {
            for p in [0.0, 0.5, 1.0, 2.3] {
                let psi = minkowski_exact_lmode(ell, p, 1.7).unwrap();
                for r0 in [1.0, 3.5, 40.0] {
                    let want = 1.7 * f64::powf(r0, -p);
                    assert!((psi.eval(r0, r0) - want).abs() < 1e-12 * want, "ell={ell} p={p}");
                }
            }
        }
    }

    #[test]
    fn solves_the_mode_equation() {
        for ell in 0..=4u32 {
            let psi = minkowski_exact_lmode(ell, 0.7, 1.0).unwrap();
            let lhs = psi.d_u().d_v();
            let rhs = psi.shift(0.0, -2.0).scale(-((ell * (ell + 1)) as f64));
            let resid = lhs + (-rhs);
            for (r0, r) in [(2.0, 3.0), (5.0, 90.0)] {
                assert!(resid.eval(r0, r).abs() < 1e-12 * psi.eval(r0, r).abs().max(1e-3));
            }
        }
    }

    #[test]
    fn ell_one_matches_printed_form() {
        let p: f64 = 0.4;
        let psi = minkowski_exact_lmode(1, p, 1.0).unwrap();
        let (r0, r) = (3.0_f64, 11.0_f64);
        let printed = r0.powf(-p) * ((p - 1.0) * r + 2.0 * r0) / r;
        assert!((psi.eval(r0, r) * (p + 1.0) - printed).abs() < 1e-14);
    }

    #[test]
    fn transversal_derivatives_on_the_cone() {
        for ell in 0..=MAX_EXACT_ELL {
            for p in [0.0, 1.0, 1.5] {
                let psi = minkowski_exact_lmode(ell, p, 1.0).unwrap();
                for n in 0..=ell + 1 {
                    let d = psi.r2_dv_pow(n);
                    let r0: f64 = 2.5;
                    let want = cone_transversal_coefficient(ell, p, n) * r0.powf(n as f64 - p);
                    let got = d.eval(r0, r0);
                    assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "ell={ell} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn rejects_large_ell() {
        assert!(matches!(minkowski_exact_lmode(7, 0.0, 1.0), Err(Error::Unsupported(_))));
    }
}
