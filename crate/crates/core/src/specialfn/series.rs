use crate::error::{Error, Result};
use serde::Serialize;

pub const MAX_SERIES_TERMS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionPoint {
    /// Local variable `s = 1 + x`.
    XMinusOne,
    /// Local variable `x`; the non-trivial root multiplies `|x|^p`.
    XZero,
    /// Local variable `s = 1 + tau`.
    TauMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Zero,
    /// `-p` at `x = -1` and `tau = -1`, `p` at `x = 0`.
    Other,
}

/// Frobenius series `|y|^R sum_k a_k y^k` in the local variable `y`.
///
/// `coeffs[k] = scale^k a_k`, which keeps long series representable when the
/// radius of convergence differs from one.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesSolution {
    pub point: ExpansionPoint,
    pub root: f64,
    pub scale: f64,
    pub coeffs: Vec<f64>,
    /// Coefficient of the logarithmic companion when the roots differ by an integer.
    pub log_companion: Option<f64>,
    /// Largest relative residual of the recurrence on re-substitution.
    pub residual: f64,
}

impl SeriesSolution {
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k] / self.scale.powi(k as i32)
    }

    pub fn eval(&self, y: f64) -> f64 {
        let t = y / self.scale;
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        if self.root == 0.0 {
            poly
        } else {
            y.abs().powf(self.root) * poly
        }
    }

    /// Partial sums at `y = scale` grow monotonically over the last decade of terms.
    pub fn diverges_at_edge(&self) -> bool {
        let n = self.coeffs.len();
        if n < 20 {
            return false;
        }
        let mut partial = Vec::with_capacity(n);
        let mut s = 0.0;
        for c in &self.coeffs {
            s += c;
            partial.push(s.abs());
        }
        partial[n - n / 10..].windows(2).all(|w| w[1] > w[0])
    }
}

fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Series solutions of `-(x + x^2) psi'' + (p - 1 - 2x) psi' + l(l+1) psi = 0`.
///
/// At `x = -1`: `a_{k+1}(R+k+1)(R+k+p+1) = a_k((R+k)(R+k+1) - l(l+1))`, roots `0, -p`.
/// At `x = 0`: `-b_{k+1}(R+k+1)(R+k-p+1) = b_k((R+k)(R+k+1) - l(l+1))`, roots `0, p`.
pub fn series_x(p: f64, l: f64, point: ExpansionPoint, root: Root, k_max: usize) -> Result<SeriesSolution> {
    if k_max > MAX_SERIES_TERMS {
        return Err(Error::Domain(format!("series length {k_max} exceeds {MAX_SERIES_TERMS}")));
    }
    let lambda = l * (l + 1.0);
    let (r, sign, shift) = match (point, root) {
        (ExpansionPoint::XMinusOne, Root::Zero) => (0.0, 1.0, p),
        (ExpansionPoint::XMinusOne, Root::Other) => (-p, 1.0, p),
        (ExpansionPoint::XZero, Root::Zero) => (0.0, -1.0, -p),
        (ExpansionPoint::XZero, Root::Other) => (p, -1.0, -p),
        (ExpansionPoint::TauMinusOne, _) => {
            return Err(Error::Domain("use series_tau for the expansion at tau = -1".into()))
        }
    };
    let mut a = vec![1.0];
    let mut residual: f64 = 0.0;
    let mut log_companion = None;
    for k in 0..k_max {
        let kf = k as f64;
        let num = a[k] * ((r + kf) * (r + kf + 1.0) - lambda);
        let den = sign * (r + kf + 1.0) * (r + kf + 1.0 + shift);
        if den.abs() < 1e-12 {
            if num.abs() > 1e-12 * a[k].abs().max(1.0) {
                return Err(Error::Indicial { k: k + 1, obstruction: num });
            }
            log_companion = Some(0.0);
            a.push(0.0);
            continue;
        }
        let next = num / den;
        residual = residual.max(rel_residual(next * den, num));
        a.push(next);
    }
    Ok(SeriesSolution { point, root: r, scale: 1.0, coeffs: a, log_companion, residual })
}

/// Root-zero series at `tau = -1` of the ODE at spacelike infinity, with `l` real.
pub fn series_tau(p: f64, l: f64, k_max: usize) -> Result<SeriesSolution> {
    series_tau_lambda(p, l * (l + 1.0), k_max)
}

/// As [`series_tau`] with `lambda = l(l+1) = -c_tilde`, so complex `l` is allowed.
///
/// Recurrence `2 c_{k+1}(k+1)(k+1+p) = c_k(K + k(k+1+2p))` with
/// `K = (p-l)(p+l+1) = p(p+1) - lambda`, stored as `2^k c_k`.
/// For `p` a natural number the companion solution at root `-p` carries
/// `c_log log(1+tau)` times this one; `c_log` is reported with `d_0 = c_0 = 1`.
pub fn series_tau_lambda(p: f64, lambda: f64, k_max: usize) -> Result<SeriesSolution> {
    if k_max > MAX_SERIES_TERMS {
        return Err(Error::Domain(format!("series length {k_max} exceeds {MAX_SERIES_TERMS}")));
    }
    let big_k = p * (p + 1.0) - lambda;
    let mut e = vec![1.0];
    let mut residual: f64 = 0.0;
    for k in 0..k_max {
        let kf = k as f64;
        let num = e[k] * (big_k + kf * (kf + 1.0 + 2.0 * p));
        let den = (kf + 1.0) * (kf + 1.0 + p);
        if den.abs() < 1e-12 {
            return Err(Error::Indicial { k: k + 1, obstruction: num });
        }
        let next = num / den;
        residual = residual.max(rel_residual(next * den, num));
        e.push(next);
    }
    let log_companion = tau_log_coefficient(p, lambda);
    Ok(SeriesSolution {
        point: ExpansionPoint::TauMinusOne,
        root: 0.0,
        scale: 2.0,
        coeffs: e,
        log_companion,
        residual,
    })
}

/// `c_log` of the root `-p` solution, `None` unless `p` is a natural number.
pub fn tau_log_coefficient(p: f64, lambda: f64) -> Option<f64> {
    if p < 0.0 || p != p.round() {
        return None;
    }
    let n = p as usize;
    if n == 0 {
        return Some(1.0);
    }
    let big_k = p * (p + 1.0) - lambda;
    let q = |m: usize| {
        let kp = m as f64 - 1.0 - p;
        kp * (kp + 1.0 + 2.0 * p) + big_k
    };
    let mut d = 1.0;
    for m in 1..n {
        d *= q(m) / (2.0 * m as f64 * (m as f64 - p));
    }
    Some(d * q(n) / (2.0 * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::hyp::gauss_2f1;

    #[test]
    fn first_coefficient() {
        let (p, l) = (0.4, 0.7);
        let s = series_x(p, l, ExpansionPoint::XMinusOne, Root::Zero, 3).unwrap();
        assert!((s.coeff(1) - (-l * (l + 1.0)) / (1.0 + p)).abs() < 1e-15);
    }

    #[test]
    fn integer_l_terminates() {
        let s = series_x(0.3, 3.0, ExpansionPoint::XMinusOne, Root::Zero, 20).unwrap();
        assert!(s.coeffs[4..].iter().all(|c| *c == 0.0));
        assert!(s.coeffs[3] != 0.0);
    }

    #[test]
    fn matches_hypergeometric_at_both_points() {
        let (p, l) = (0.37, 1.4);
        let s = series_x(p, l, ExpansionPoint::XMinusOne, Root::Zero, 200).unwrap();
        for y in [0.1, 0.3, 0.5] {
            let f = gauss_2f1(-l, 1.0 + l, 1.0 + p, y).unwrap();
            assert!((s.eval(y) - f).abs() < 1e-13);
        }
        let t = series_x(p, l, ExpansionPoint::XZero, Root::Zero, 200).unwrap();
        for x in [-0.1, -0.4] {
            let f = gauss_2f1(-l, 1.0 + l, 1.0 - p, -x).unwrap();
            assert!((t.eval(x) - f).abs() < 1e-13);
        }
        let w = series_x(p, l, ExpansionPoint::XZero, Root::Other, 200).unwrap();
        let x: f64 = -0.3;
        let f = (-x).powf(p) * gauss_2f1(1.0 + p + l, p - l, 1.0 + p, -x).unwrap();
        assert!((w.eval(x) - f).abs() < 1e-13);
    }

    #[test]
    fn tau_log_vanishes_only_below_p() {
        for p in 1..6u32 {
            for l in 0..8u32 {
                let lam = (l * (l + 1)) as f64;
                let c = tau_log_coefficient(p as f64, lam).unwrap();
                if l < p {
                    assert_eq!(c, 0.0, "p={p} l={l}");
                } else {
                    assert!(c.abs() > 1e-12, "p={p} l={l}");
                }
            }
        }
        assert_eq!(tau_log_coefficient(0.0, 0.0), Some(1.0));
        assert_eq!(tau_log_coefficient(0.5, 0.0), None);
    }

    #[test]
    fn tau_series_residual() {
        let s = series_tau(2.0, 0.7, 10_000).unwrap();
        assert!(s.residual <= 1e-13);
        assert!(s.coeffs.iter().all(|c| c.is_finite()));
    }
}
