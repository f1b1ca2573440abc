use crate::error::{Error, Result};
use crate::evolve::GridField;
use crate::geometry::boundary_coords_r;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    ScriMinus,
    I0,
    ScriPlus,
}

/// Where [`decay_rate_with`] samples the field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayProbe {
    /// Toward `i0`: the ray `v - v0 = lambda (u0 - u)`.
    pub lambda: f64,
    /// Toward `scri+`: outgoing cone index; toward `scri-`: ingoing cone index.
    /// `None` picks the innermost cone.
    pub cone: Option<usize>,
    /// Decades of the boundary-defining function used, counted from its smallest value.
    pub decades: f64,
}

impl Default for DecayProbe {
    fn default() -> Self {
        DecayProbe { lambda: 0.5, cone: None, decades: 2.0 }
    }
}

/// Median of pairwise slopes.
pub fn theil_sen(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let mut slopes = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[j] - x[i];
            if dx.abs() > 1e-300 {
                slopes.push((y[j] - y[i]) / dx);
            }
        }
    }
    if slopes.is_empty() {
        return None;
    }
    slopes.sort_by(f64::total_cmp);
    let m = slopes.len();
    Some(if m % 2 == 1 { slopes[m / 2] } else { 0.5 * (slopes[m / 2 - 1] + slopes[m / 2]) })
}

/// `(rho, |psi|)` pairs along the probe, with `rho` the defining function of `boundary`.
pub fn decay_samples(field: &GridField, boundary: Boundary, probe: &DecayProbe) -> Vec<(f64, f64)> {
    let g = field.grid();
    let (nu, nv) = (g.nu(), g.nv());
    let rho = |u: f64, v: f64, r: f64| {
        let (m, z, p) = boundary_coords_r(u, v, r);
        match boundary {
            Boundary::ScriMinus => m,
            Boundary::I0 => z,
            Boundary::ScriPlus => p,
        }
    };
    match boundary {
        Boundary::ScriPlus => {
            let i = probe.cone.unwrap_or(nu - 1).min(nu - 1);
            (0..nv).map(|j| (rho(g.u[i], g.v[j], g.r(i, j)), field.at(i, j).abs())).collect()
        }
        Boundary::ScriMinus => {
            let j = probe.cone.unwrap_or(0).min(nv - 1);
            (0..nu).map(|i| (rho(g.u[i], g.v[j], g.r(i, j)), field.at(i, j).abs())).collect()
        }
        Boundary::I0 => {
            let (u0, v0) = (g.spec.u0, g.spec.v0);
            let mut out = Vec::new();
            for i in 0..nu {
                let v = v0 + probe.lambda * (u0 - g.u[i]);
                if v > g.spec.v_max {
                    continue;
                }
                let j = g.v.partition_point(|&x| x <= v).clamp(1, nv - 1) - 1;
                let w = (v - g.v[j]) / (g.v[j + 1] - g.v[j]);
                let val = (1.0 - w) * field.at(i, j) + w * field.at(i, j + 1);
                let r = (1.0 - w) * g.r(i, j) + w * g.r(i, j + 1);
                out.push((rho(g.u[i], v, r), val.abs()));
            }
            out
        }
    }
}

/// Slope of `log|psi|` against `log rho` toward `boundary`; `+inf` if the field vanishes there.
pub fn decay_rate(field: &GridField, boundary: Boundary) -> Result<f64> {
    decay_rate_with(field, boundary, &DecayProbe::default())
}

pub fn decay_rate_with(field: &GridField, boundary: Boundary, probe: &DecayProbe) -> Result<f64> {
    let pts = decay_samples(field, boundary, probe);
    if pts.is_empty() {
        return Err(Error::Resolution("decay probe misses the grid".into()));
    }
    let rmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let rmax = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    if (rmax / rmin).log10() < probe.decades - 1e-9 {
        return Err(Error::Resolution(format!(
            "only {:.2} decades of the boundary-defining function available",
            (rmax / rmin).log10()
        )));
    }
    let cut = rmin * 10f64.powf(probe.decades);
    let sel: Vec<(f64, f64)> = pts.into_iter().filter(|p| p.0 <= cut).collect();
    let scale = sel.iter().map(|p| p.1).fold(0.0, f64::max);
    let floor = 1e-300_f64.max(scale * 1e-14);
    if !(scale > 1e-300) {
        return Ok(f64::INFINITY);
    }
    let (x, y): (Vec<f64>, Vec<f64>) = sel.iter().filter(|p| p.1 > floor).map(|p| (p.0.ln(), p.1.ln())).unzip();
    if x.len() < 3 {
        return Ok(f64::INFINITY);
    }
    theil_sen(&x, &y).ok_or_else(|| Error::Resolution("degenerate decay sample".into()))
}
