use super::decay::{decay_rate_with, Boundary, DecayProbe};
use super::fit::{fit_expansion, Cone};
use crate::error::{Error, Result};
use crate::evolve::{solve_lmode, EquationSpec, Family, GridField, Profile, ScatteringData, MAX_EXACT_ELL};
use crate::geometry::NullGrid;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::sync::Arc;

/// Incoming radiation `dv psi` at past null infinity, supported in `[a, b]`.
#[derive(Clone)]
pub struct CompactProfile {
    pub support: (f64, f64),
    pub f: Profile,
}

impl std::fmt::Debug for CompactProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CompactProfile({:?})", self.support)
    }
}

impl CompactProfile {
    pub fn new(support: (f64, f64), f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CompactProfile { support, f: Arc::new(f) }
    }

    /// `amp ((v - a)(b - v))^4`, normalised to unit peak for `amp = 1`.
    pub fn bump(a: f64, b: f64, amp: f64) -> Self {
        let peak = ((b - a) / 2.0).powi(8);
        Self::new((a, b), move |v| if v <= a || v >= b { 0.0 } else { amp * ((v - a) * (b - v)).powi(4) / peak })
    }

    pub fn eval(&self, v: f64) -> f64 {
        let (a, b) = self.support;
        if v < a || v > b {
            0.0
        } else {
            (self.f)(v)
        }
    }

    /// `int (v - v0)^k h dv`.
    pub fn moment(&self, k: u32, v0: f64) -> f64 {
        let (a, b) = self.support;
        quadrature::double_exponential::integrate(|v| (v - v0).powi(k as i32) * self.eval(v), a, b, 1e-14).integral
    }

    /// `int_{v0}^{v} (v - s)^n / n! h(s) ds`, the `(n+1)`-fold iterated integral.
    pub fn iterated_integral(&self, n: u32, v0: f64, v: f64) -> f64 {
        let (a, b) = self.support;
        let (lo, hi) = (a.max(v0), b.min(v));
        if hi <= lo {
            return 0.0;
        }
        let fact: f64 = (1..=n).map(|x| x as f64).product();
        quadrature::double_exponential::integrate(|s| (v - s).powi(n as i32) / fact * self.eval(s), lo, hi, 1e-14).integral
    }

    pub fn as_profile(&self) -> Profile {
        let me = self.clone();
        Arc::new(move |v| me.eval(v))
    }
}

fn ratio_factor(ell: u32, n: u32) -> f64 {
    ((ell - n + 1)..=(ell + n)).map(|k| k as f64).product()
}

/// `psi_l = sum_n (-1)^n / (n! r^n) (l+n)!/(l-n)! I_{n+1}(v)` for pure incoming radiation on Minkowski.
pub fn explicit_incoming_solution(ell: u32, h: &CompactProfile, v0: f64, u: f64, v: f64) -> f64 {
    let r = v - u;
    let mut fact = 1.0;
    (0..=ell)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / (fact * r.powi(n as i32)) * ratio_factor(ell, n) * h.iterated_integral(n, v0, v)
        })
        .sum()
}

/// `sum_n (-1)^n / (n!)^2 (l+n)!/(l-n)!`, which equals `(-1)^l`.
pub fn antipodal_sum(ell: u32) -> f64 {
    let mut fact = 1.0;
    (0..=ell)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / (fact * fact) * ratio_factor(ell, n)
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct AntipodalReport {
    /// `lim_v lim_u psi` from the explicit formula.
    pub limit_minus: f64,
    /// `lim_u lim_v psi` from the grid solution.
    pub limit_plus: f64,
    pub ratio: f64,
    pub explicit_plus: f64,
    pub grid_minus: f64,
}

fn limit_fit(field: &GridField, cone: Cone, ell: u32, window: (f64, f64)) -> Result<f64> {
    let basis: Vec<(f64, u32)> = (0..=ell + 2).map(|z| (z as f64, 0)).collect();
    let a = fit_expansion(field, cone, &basis, window)?;
    let b = fit_expansion(field, cone, &basis, (window.0 / 3.0, window.1 / 3.0))?;
    let (x, y) = (a.coefficients[0], b.coefficients[0]);
    if (x - y).abs() > 1e-3 * x.abs().max(y.abs()).max(1e-300) {
        return Err(Error::NotConverged(format!("limit moves from {y} to {x} between windows")));
    }
    Ok(x)
}

/// Past and future corner limits of a Minkowski `ell`-mode with incoming radiation `h` and trivial data.
pub fn antipodal_check(ell: u32, h: &CompactProfile, grid: &NullGrid) -> Result<AntipodalReport> {
    if ell > MAX_EXACT_ELL {
        return Err(Error::Unsupported(format!("antipodal check for ell = {ell} > {MAX_EXACT_ELL}")));
    }
    let v0 = grid.v0;
    let q = h.moment(0, v0);
    let limit_minus = q;
    let explicit_plus = antipodal_sum(ell) * q;
    let data = ScatteringData::trivial().with_incoming({
        let p = h.as_profile();
        move |v| p(v)
    });
    let psi = solve_lmode(&EquationSpec::new(ell, Family::Minkowski), &data, grid)?;
    let g = psi.grid();
    let rmax = g.r(g.nu() - 1, g.nv() - 1);
    let limit_plus = limit_fit(&psi, Cone::Outgoing(grid.u0), ell, (rmax / 30.0, rmax * 0.9))?;
    let vb = g.v[g.v.partition_point(|&x| x < h.support.1).min(g.nv() - 1)];
    let j = g.v.iter().position(|&x| x == vb).expect("node exists");
    let rfar = g.r(0, j);
    let grid_minus = limit_fit(&psi, Cone::Ingoing(vb), ell, (rfar / 30.0, rfar * 0.9))?;
    Ok(AntipodalReport { limit_minus, limit_plus, ratio: limit_plus / limit_minus, explicit_plus, grid_minus })
}

/// `h (1 + sum_{m=1}^{k+1} c_m (v - v0)^m)` with vanishing moments of orders `0..=k`.
pub fn kill_moments(h: &CompactProfile, k: u32, v0: f64) -> Result<CompactProfile> {
    let n = k as usize + 1;
    let mu: Vec<f64> = (0..=2 * n).map(|j| h.moment(j as u32, v0)).collect();
    let a = DMatrix::from_fn(n, n, |row, col| mu[row + col + 1]);
    let b = DVector::from_fn(n, |row, _| -mu[row]);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-13 * smax) {
        return Err(Error::Domain(format!("moment projection is degenerate (condition {:e})", smax / smin)));
    }
    let c = svd.solve(&b, 0.0).map_err(|e| Error::Domain(e.to_string()))?;
    let coeffs: Vec<f64> = c.iter().copied().collect();
    let base = h.clone();
    Ok(CompactProfile::new(h.support, move |v| {
        let s = v - v0;
        let poly: f64 = coeffs.iter().enumerate().map(|(m, cm)| cm * s.powi(m as i32 + 1)).sum();
        base.eval(v) * (1.0 + poly)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    /// Moments of orders `0..=k` are killed; `None` for the original profile.
    pub killed_through: Option<u32>,
    pub moments: Vec<f64>,
    pub rate: f64,
}

/// Decay toward `i0` of the `ell`-mode with incoming radiation `h`, before and after killing moments.
pub fn moment_condition_experiment(h: &CompactProfile, k_max: u32, ell: u32, grid: &NullGrid, probe: &DecayProbe) -> Result<Vec<MomentRow>> {
    let v0 = grid.v0;
    let spec = EquationSpec::new(ell, Family::Minkowski);
    let run = |p: &CompactProfile, killed: Option<u32>| -> Result<MomentRow> {
        let prof = p.as_profile();
        let data = ScatteringData::trivial().with_incoming(move |v| prof(v));
        let psi = solve_lmode(&spec, &data, grid)?;
        let rate = decay_rate_with(&psi, Boundary::I0, probe)?;
        let moments = (0..=k_max + 1).map(|k| p.moment(k, v0)).collect();
        Ok(MomentRow { killed_through: killed, moments, rate })
    };
    let mut rows = vec![run(h, None)?];
    for k in 0..=k_max {
        rows.push(run(&kill_moments(h, k, v0)?, Some(k))?);
    }
    Ok(rows)
}
