use crate::error::{Error, Result};
use crate::geometry::Grid;
use serde::Serialize;
use std::io::Write;
use std::sync::Arc;

/// Values `psi(u_i, v_j)` on a grid, stored row-major (fixed `u` rows).
#[derive(Clone, Debug)]
pub struct GridField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    pub label: String,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    label: &'a str,
    layout: &'static str,
    dtype: &'static str,
    nu: usize,
    nv: usize,
    grid: &'a crate::geometry::NullGrid,
    geometry: &'a crate::geometry::Geometry,
}

/// Second-order first derivative on a non-uniform 1-D mesh.
pub fn derivative_1d(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            let s = (f[1] - f[0]) / (x[1] - x[0]);
            d[0] = s;
            d[1] = s;
        }
        return d;
    }
    for j in 1..n - 1 {
        let (h1, h2) = (x[j] - x[j - 1], x[j + 1] - x[j]);
        d[j] = -h2 / (h1 * (h1 + h2)) * (f[j - 1] - f[j]) + h1 / (h2 * (h1 + h2)) * (f[j + 1] - f[j]);
    }
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    d[0] = (h1 + h2) / (h1 * h2) * (f[1] - f[0]) - h1 / (h2 * (h1 + h2)) * (f[2] - f[0]);
    let (h1, h2) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    d[n - 1] = h2 / (h1 * (h1 + h2)) * (f[n - 3] - f[n - 1]) - (h1 + h2) / (h1 * h2) * (f[n - 2] - f[n - 1]);
    d
}

fn bracket(x: &[f64], t: f64) -> Option<(usize, f64)> {
    let n = x.len();
    if t < x[0] - 1e-12 * x[0].abs().max(1.0) || t > x[n - 1] + 1e-12 * x[n - 1].abs().max(1.0) {
        return None;
    }
    let k = x.partition_point(|&a| a <= t).clamp(1, n - 1) - 1;
    let w = ((t - x[k]) / (x[k + 1] - x[k])).clamp(0.0, 1.0);
    Some((k, w))
}

impl GridField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.nu() * grid.nv() {
            return Err(Error::Grid(format!(
                "field has {} values for a {} x {} grid",
                values.len(),
                grid.nu(),
                grid.nv()
            )));
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { i: k / grid.nv(), j: k % grid.nv() });
        }
        Ok(GridField { grid, values, label: label.into() })
    }

    pub fn from_fn(grid: Arc<Grid>, label: impl Into<String>, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let nv = grid.nv();
        let values = (0..grid.nu() * nv).map(|k| f(k / nv, k % nv)).collect();
        Self::new(grid, values, label)
    }

    pub fn zeros(grid: Arc<Grid>, label: impl Into<String>) -> Self {
        let n = grid.nu() * grid.nv();
        GridField { grid, values: vec![0.0; n], label: label.into() }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.nv() + j]
    }

    /// Values along the outgoing cone `u = u_i`.
    pub fn row(&self, i: usize) -> &[f64] {
        let nv = self.grid.nv();
        &self.values[i * nv..(i + 1) * nv]
    }

    /// Values along the ingoing cone `v = v_j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.grid.nu()).map(|i| self.at(i, j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn map(&self, label: impl Into<String>, f: impl Fn(usize, usize, f64) -> f64) -> Result<Self> {
        Self::from_fn(self.grid.clone(), label, |i, j| f(i, j, self.at(i, j)))
    }

    pub fn zip(&self, other: &GridField, label: impl Into<String>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.values.len() != other.values.len() {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Self::new(self.grid.clone(), values, label)
    }

    /// `d/dv` at fixed `u`.
    pub fn d_dv(&self) -> GridField {
        let nv = self.grid.nv();
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..self.grid.nu() {
            out.extend(derivative_1d(&self.grid.v, self.row(i)));
        }
        debug_assert_eq!(out.len(), self.grid.nu() * nv);
        GridField { grid: self.grid.clone(), values: out, label: format!("dv {}", self.label) }
    }

    /// `d/du` at fixed `v`.
    pub fn d_du(&self) -> GridField {
        let (nu, nv) = (self.grid.nu(), self.grid.nv());
        let mut out = vec![0.0; nu * nv];
        for j in 0..nv {
            let d = derivative_1d(&self.grid.u, &self.column(j));
            for i in 0..nu {
                out[i * nv + j] = d[i];
            }
        }
        GridField { grid: self.grid.clone(), values: out, label: format!("du {}", self.label) }
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, u: f64, v: f64) -> Option<f64> {
        let (i, a) = bracket(&self.grid.u, u)?;
        let (j, b) = bracket(&self.grid.v, v)?;
        let f00 = self.at(i, j);
        let f01 = self.at(i, j + 1);
        let f10 = self.at(i + 1, j);
        let f11 = self.at(i + 1, j + 1);
        Some((1.0 - a) * ((1.0 - b) * f00 + b * f01) + a * ((1.0 - b) * f10 + b * f11))
    }

    /// Restriction to the nodes of a grid refined from this one by `factor`.
    pub fn coarsen_to(&self, coarse: &Arc<Grid>, factor: usize) -> Result<GridField> {
        let ok = (coarse.nu() - 1) * factor + 1 == self.grid.nu() && (coarse.nv() - 1) * factor + 1 == self.grid.nv();
        if !ok {
            return Err(Error::Grid(format!("cannot restrict by factor {factor}")));
        }
        GridField::from_fn(coarse.clone(), self.label.clone(), |i, j| self.at(i * factor, j * factor))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,v,r,psi")?;
        for i in 0..self.grid.nu() {
            for j in 0..self.grid.nv() {
                writeln!(w, "{:e},{:e},{:e},{:e}", self.grid.u[i], self.grid.v[j], self.grid.r(i, j), self.at(i, j))?;
            }
        }
        Ok(())
    }

    /// Little-endian `f64` values, row-major.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for x in &self.values {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&Sidecar {
            label: &self.label,
            layout: "row-major, rows at fixed u",
            dtype: "f64 little-endian",
            nu: self.grid.nu(),
            nv: self.grid.nv(),
            grid: &self.grid.spec,
            geometry: &self.grid.geometry,
        })
        .expect("sidecar serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Geometry, NullGrid};

    #[test]
    fn derivative_is_second_order_exact_on_quadratics() {
        let x: Vec<f64> = (0..12).map(|k| 1.3f64.powi(k)).collect();
        let f: Vec<f64> = x.iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        let d = derivative_1d(&x, &f);
        for (t, dt) in x.iter().zip(&d) {
            assert!((dt - (6.0 * t - 1.0)).abs() < 1e-9 * t.max(1.0));
        }
    }

    #[test]
    fn bilinear_reproduces_bilinear_functions() {
        let g = Grid::new(NullGrid::with_ratios(-3.0, 1.0, -300.0, 100.0, 1.3, 1.3), Geometry::Minkowski).unwrap();
        let f = GridField::from_fn(g.clone(), "f", |i, j| 2.0 * g.u[i] - g.v[j] + 0.5 * g.u[i] * g.v[j]).unwrap();
        let (u, v) = (-17.3, 4.4);
        assert!((f.interpolate(u, v).unwrap() - (2.0 * u - v + 0.5 * u * v)).abs() < 1e-10);
        assert!(f.interpolate(-1.0, 4.4).is_none());
    }

    #[test]
    fn rejects_non_finite() {
        let g = Grid::new(NullGrid::with_ratios(-3.0, 1.0, -30.0, 10.0, 1.5, 1.5), Geometry::Minkowski).unwrap();
        let n = g.nu() * g.nv();
        let mut vals = vec![0.0; n];
        vals[n - 1] = f64::NAN;
        assert!(matches!(GridField::new(g, vals, "bad"), Err(Error::NonFinite { .. })));
    }
}
