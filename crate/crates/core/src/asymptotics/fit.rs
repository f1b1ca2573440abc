use crate::error::{Error, Result};
use crate::evolve::GridField;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Fits with a larger condition number are flagged untrusted.
pub const CONDITION_LIMIT: f64 = 1e10;

/// A null cone of the grid, by coordinate value; the nearest node is used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// `u = const`, running out to future null infinity.
    Outgoing(f64),
    /// `v = const`, running back to past null infinity.
    Ingoing(f64),
}

/// Least-squares coefficients in the basis `r^-z log^k(r / r_ref)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub basis: Vec<(f64, u32)>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_rms: f64,
    pub condition_number: f64,
    pub richardson_order: Option<f64>,
    /// `r0` of an outgoing cone, or `r` at the inner end of an ingoing cone.
    pub r_ref: f64,
    /// Coordinate of the node actually used.
    pub cone: Cone,
    pub window: (f64, f64),
    pub n_points: usize,
    pub trusted: bool,
}

impl FitResult {
    pub fn coefficient(&self, z: f64, k: u32) -> Option<f64> {
        self.index(z, k).map(|i| self.coefficients[i])
    }

    pub fn std_error(&self, z: f64, k: u32) -> Option<f64> {
        self.index(z, k).map(|i| self.std_errors[i])
    }

    fn index(&self, z: f64, k: u32) -> Option<usize> {
        self.basis.iter().position(|&(a, b)| (a - z).abs() < 1e-12 && b == k)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let l = (r / self.r_ref).ln();
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(&(z, k), c)| c * r.powf(-z) * l.powi(k as i32))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit result serialises")
    }
}

/// Samples `(r, value)` along a cone, in order of increasing `r`.
pub fn cone_samples(field: &GridField, cone: Cone) -> (Cone, f64, Vec<(f64, f64)>) {
    let g = field.grid();
    let nearest = |x: &[f64], t: f64| {
        (0..x.len()).min_by(|&a, &b| (x[a] - t).abs().total_cmp(&(x[b] - t).abs())).expect("grid is non-empty")
    };
    match cone {
        Cone::Outgoing(u) => {
            let i = nearest(&g.u, u);
            let pts = (0..g.nv()).map(|j| (g.r(i, j), field.at(i, j))).collect();
            (Cone::Outgoing(g.u[i]), g.r0(i), pts)
        }
        Cone::Ingoing(v) => {
            let j = nearest(&g.v, v);
            let pts = (0..g.nu()).rev().map(|i| (g.r(i, j), field.at(i, j))).collect();
            (Cone::Ingoing(g.v[j]), g.r(g.nu() - 1, j), pts)
        }
    }
}

/// The outermost decade of `r` on the cone, leaving out the five outermost nodes.
pub fn default_window(field: &GridField, cone: Cone) -> (f64, f64) {
    let (_, _, pts) = cone_samples(field, cone);
    let n = pts.len();
    let hi = pts[n.saturating_sub(6)].0;
    (hi / 10.0, hi)
}

/// Weighted or plain least squares on explicit samples.
pub fn fit_points(rs: &[f64], values: &[f64], basis: &[(f64, u32)], r_ref: f64) -> Result<(Vec<f64>, Vec<f64>, f64, f64)> {
    let (n, m) = (rs.len(), basis.len());
    if m == 0 {
        return Err(Error::Spec("empty fit basis".into()));
    }
    if n < 2 * m {
        return Err(Error::Resolution(format!("{n} samples for {m} basis functions; need at least {}", 2 * m)));
    }
    let mut a = DMatrix::zeros(n, m);
    for (i, &r) in rs.iter().enumerate() {
        let l = (r / r_ref).ln();
        for (k, &(z, p)) in basis.iter().enumerate() {
            a[(i, k)] = r.powf(-z) * l.powi(p as i32);
        }
    }
    let norms: Vec<f64> = (0..m).map(|k| a.column(k).norm()).collect();
    if let Some(k) = norms.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::RankDeficient(format!("basis element {:?} vanishes on the window", basis[k])));
    }
    for (k, &nk) in norms.iter().enumerate() {
        a.column_mut(k).scale_mut(1.0 / nk);
    }
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let s = &svd.singular_values;
    let (smax, smin) = (s.max(), s.min());
    if !(smin > 1e-14 * smax) {
        return Err(Error::RankDeficient(format!("singular values {smax:e} .. {smin:e}")));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::RankDeficient(e.to_string()))?;
    let resid = &a * &x - &b;
    let rss = resid.norm_squared();
    let rms = (rss / n as f64).sqrt();
    let sigma2 = if n > m { rss / (n - m) as f64 } else { 0.0 };
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let std: Vec<f64> = (0..m)
        .map(|k| {
            let var: f64 = (0..m).map(|i| (vt[(i, k)] / s[i]).powi(2)).sum();
            (sigma2 * var).sqrt() / norms[k]
        })
        .collect();
    let coeffs = (0..m).map(|k| x[k] / norms[k]).collect();
    Ok((coeffs, std, rms, smax / smin))
}

/// Least squares along `cone` in the basis `r^-z log^k(r / r_ref)` over `r` in `window`.
pub fn fit_expansion(field: &GridField, cone: Cone, basis: &[(f64, u32)], window: (f64, f64)) -> Result<FitResult> {
    let (used, r_ref, pts) = cone_samples(field, cone);
    let (lo, hi) = window;
    let (rmin, rmax) = (pts[0].0, pts[pts.len() - 1].0);
    if !(lo < hi) || lo < rmin * (1.0 - 1e-12) || hi > rmax * (1.0 + 1e-12) {
        return Err(Error::Grid(format!("window [{lo}, {hi}] outside the cone's range [{rmin}, {rmax}]")));
    }
    let (rs, vals): (Vec<f64>, Vec<f64>) = pts.into_iter().filter(|&(r, _)| r >= lo && r <= hi).unzip();
    let (coefficients, std_errors, residual_rms, condition_number) = fit_points(&rs, &vals, basis, r_ref)?;
    Ok(FitResult {
        basis: basis.to_vec(),
        coefficients,
        std_errors,
        residual_rms,
        condition_number,
        richardson_order: None,
        r_ref,
        cone: used,
        window,
        n_points: rs.len(),
        trusted: condition_number <= CONDITION_LIMIT,
    })
}

/// Fits on two windows; returns both and the largest coefficient difference.
pub fn two_window_check(
    field: &GridField,
    cone: Cone,
    basis: &[(f64, u32)],
    w1: (f64, f64),
    w2: (f64, f64),
) -> Result<(FitResult, FitResult, f64)> {
    let a = fit_expansion(field, cone, basis, w1)?;
    let b = fit_expansion(field, cone, basis, w2)?;
    let d = a.coefficients.iter().zip(&b.coefficients).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok((a, b, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Geometry, Grid, NullGrid};

    fn grid() -> std::sync::Arc<Grid> {
        Grid::new(NullGrid::with_ratios(-2.0, 1.0, -1e3, 1e5, 1.05, 1.02), Geometry::Minkowski).unwrap()
    }

    #[test]
    fn recovers_exact_combination() {
        let g = grid();
        let f = GridField::from_fn(g.clone(), "f", |i, j| {
            let (r, r0) = (g.r(i, j), g.r0(i));
            3.0 / r + 5.0 * (r / r0).ln() / (r * r)
        })
        .unwrap();
        let basis = [(1.0, 0), (2.0, 1)];
        for w in [(10.0, 1e3), (1e3, 9e4)] {
            let fit = fit_expansion(&f, Cone::Outgoing(-2.0), &basis, w).unwrap();
            assert!((fit.coefficients[0] - 3.0).abs() < 1e-10, "{:?}", fit.coefficients);
            assert!((fit.coefficients[1] - 5.0).abs() < 1e-10 * 5.0);
            assert!(fit.trusted);
        }
    }

    #[test]
    fn closed_form_ell_one_expansion() {
        let g = grid();
        let psi = crate::evolve::minkowski_exact_lmode(1, 0.5, 1.0).unwrap();
        let f = GridField::from_fn(g.clone(), "psi", |i, j| psi.eval(g.r0(i), g.r(i, j))).unwrap();
        let fit = fit_expansion(&f, Cone::Outgoing(-2.0), &[(0.0, 0), (1.0, 0), (2.0, 0)], (10.0, 1e5)).unwrap();
        let r0: f64 = 3.0;
        // psi = r0^-p ((p-1) r + 2 r0) / ((p+1) r)
        assert!((fit.coefficients[0] - r0.powf(-0.5) * (-0.5) / 1.5).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0 * r0.powf(0.5) / 1.5).abs() < 1e-10);
        assert!(fit.coefficients[2].abs() < 1e-8);
    }

    #[test]
    fn collinear_basis_is_rejected() {
        let g = grid();
        let f = GridField::zeros(g, "z");
        let err = fit_expansion(&f, Cone::Outgoing(-2.0), &[(1.0, 0), (1.0, 0)], (10.0, 1e3)).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)));
        assert!(matches!(fit_expansion(&f, Cone::Outgoing(-2.0), &[(1.0, 0)], (1.0, 1e3)), Err(Error::Grid(_))));
    }
}
