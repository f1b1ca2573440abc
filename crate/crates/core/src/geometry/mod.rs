//! Double-null grids, backgrounds and compactified boundary coordinates.
//!
//! Coordinates are `u = (t - r*)/2`, `v = (t + r*)/2`, so `r* = v - u` and
//! `dv r = D`, `du r = -D` with `D = 1 - 2M/r`.

mod tortoise;

pub use tortoise::{tortoise_forward, tortoise_invert, TORTOISE_TOL};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Node distribution along one null direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Uniform,
    /// Log-uniform in `|u|` (or `v`); `ratio` fixes the node count when it is omitted.
    Geometric {
        #[serde(default)]
        ratio: Option<f64>,
    },
}

impl Default for Spacing {
    fn default() -> Self {
        Spacing::Geometric { ratio: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Minkowski,
    Schwarzschild {
        #[serde(rename = "M")]
        m: f64,
    },
}

impl Geometry {
    pub fn mass(&self) -> f64 {
        match self {
            Geometry::Minkowski => 0.0,
            Geometry::Schwarzschild { m } => *m,
        }
    }

    /// Area radius at `(u, v)`.
    pub fn r(&self, u: f64, v: f64) -> Result<f64> {
        match self {
            Geometry::Minkowski => Ok(v - u),
            Geometry::Schwarzschild { m } => tortoise_invert(v - u, *m, TORTOISE_TOL),
        }
    }

    /// `r` near a known neighbour value, for sweeps.
    pub fn r_near(&self, u: f64, v: f64, guess: f64) -> Result<f64> {
        match self {
            Geometry::Minkowski => Ok(v - u),
            Geometry::Schwarzschild { m } => tortoise::invert_from(v - u, *m, guess, TORTOISE_TOL),
        }
    }

    pub fn lapse(&self, r: f64) -> f64 {
        1.0 - 2.0 * self.mass() / r
    }
}

/// Boundary-defining functions `(rho_minus, rho_zero, rho_plus)` at `(u, v)` with radius `r`.
pub fn boundary_coords_r(u: f64, v: f64, r: f64) -> (f64, f64, f64) {
    (v / r, r / (u.abs() * v), u.abs() / r)
}

/// Boundary-defining functions built from the area radius.
pub fn boundary_coords(u: f64, v: f64, geom: &Geometry) -> Result<(f64, f64, f64)> {
    let r = geom.r(u, v)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("r = {r} at ({u}, {v})")));
    }
    Ok(boundary_coords_r(u, v, r))
}

/// Boundary-defining functions built from `r* = v - u`.
pub fn boundary_coords_tortoise(u: f64, v: f64) -> (f64, f64, f64) {
    boundary_coords_r(u, v, v - u)
}

/// Parameters of a double-null grid on `[u_min, u0] x [v0, v_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullGrid {
    pub u0: f64,
    pub v0: f64,
    pub u_min: f64,
    pub v_max: f64,
    #[serde(rename = "Nu")]
    pub nu: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
    #[serde(default)]
    pub u_spacing: Spacing,
    #[serde(default)]
    pub v_spacing: Spacing,
}

fn nodes(a: f64, b: f64, n: usize, spacing: Spacing, reflect: bool) -> Vec<f64> {
    let t = |i: usize| i as f64 / (n - 1) as f64;
    let mut x: Vec<f64> = match spacing {
        Spacing::Uniform => (0..n).map(|i| a + (b - a) * t(i)).collect(),
        Spacing::Geometric { .. } if reflect => {
            let (la, lb) = ((-a).ln(), (-b).ln());
            (0..n).map(|i| -(la + (lb - la) * t(i)).exp()).collect()
        }
        Spacing::Geometric { .. } => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n).map(|i| (la + (lb - la) * t(i)).exp()).collect()
        }
    };
    x[0] = a;
    x[n - 1] = b;
    x
}

fn count_for_ratio(a: f64, b: f64, ratio: f64) -> usize {
    ((b / a).abs().ln().abs() / ratio.ln()).ceil() as usize + 1
}

impl NullGrid {
    pub fn validate(&self) -> Result<()> {
        let ok = self.u_min < self.u0 && self.u0 < 0.0 && 0.0 < self.v0 && self.v0 < self.v_max;
        if !ok || !(self.u_min.is_finite() && self.v_max.is_finite()) {
            return Err(Error::Grid(format!(
                "need u_min < u0 < 0 < v0 < v_max, got u_min={}, u0={}, v0={}, v_max={}",
                self.u_min, self.u0, self.v0, self.v_max
            )));
        }
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::Grid(format!("need Nu, Nv >= 2, got {} x {}", self.nu, self.nv)));
        }
        for s in [self.u_spacing, self.v_spacing] {
            if let Spacing::Geometric { ratio: Some(q) } = s {
                if !(q > 1.0) {
                    return Err(Error::Grid(format!("geometric ratio must exceed 1, got {q}")));
                }
            }
        }
        Ok(())
    }

    /// Grid with node counts derived from geometric ratios.
    pub fn with_ratios(u0: f64, v0: f64, u_min: f64, v_max: f64, u_ratio: f64, v_ratio: f64) -> Self {
        NullGrid {
            u0,
            v0,
            u_min,
            v_max,
            nu: count_for_ratio(u_min, u0, u_ratio).max(2),
            nv: count_for_ratio(v0, v_max, v_ratio).max(2),
            u_spacing: Spacing::Geometric { ratio: Some(u_ratio) },
            v_spacing: Spacing::Geometric { ratio: Some(v_ratio) },
        }
    }

    /// Same domain with every cell split into `factor x factor` cells.
    pub fn refined(&self, factor: usize) -> Self {
        NullGrid {
            nu: (self.nu - 1) * factor + 1,
            nv: (self.nv - 1) * factor + 1,
            ..self.clone()
        }
    }

    pub fn u_nodes(&self) -> Vec<f64> {
        nodes(self.u_min, self.u0, self.nu, self.u_spacing, true)
    }

    pub fn v_nodes(&self) -> Vec<f64> {
        nodes(self.v0, self.v_max, self.nv, self.v_spacing, false)
    }
}

/// A validated grid together with its background and cached radii.
#[derive(Clone, Debug)]
pub struct Grid {
    pub spec: NullGrid,
    pub geometry: Geometry,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    r: Vec<f64>,
}

impl Grid {
    pub fn new(spec: NullGrid, geometry: Geometry) -> Result<Arc<Self>> {
        spec.validate()?;
        if let Geometry::Schwarzschild { m } = geometry {
            if !(m > 0.0) {
                return Err(Error::Grid(format!("Schwarzschild mass must be positive, got {m}")));
            }
        }
        let u = spec.u_nodes();
        let v = spec.v_nodes();
        let mut r = Vec::with_capacity(u.len() * v.len());
        for &ui in &u {
            let mut guess = geometry.r(ui, v[0])?;
            for &vj in &v {
                guess = geometry.r_near(ui, vj, guess)?;
                r.push(guess);
            }
        }
        Ok(Arc::new(Grid { spec, geometry, u, v, r }))
    }

    pub fn nu(&self) -> usize {
        self.u.len()
    }

    pub fn nv(&self) -> usize {
        self.v.len()
    }

    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.v.len() + j]
    }

    /// `r0(u_i) = r(u_i, v0)`.
    pub fn r0(&self, i: usize) -> f64 {
        self.r(i, 0)
    }

    pub fn is_minkowski(&self) -> bool {
        matches!(self.geometry, Geometry::Minkowski)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_coords_example() {
        let (a, b, c) = boundary_coords(-10.0, 1.0, &Geometry::Minkowski).unwrap();
        assert!((a - 1.0 / 11.0).abs() < 1e-15);
        assert!((b - 1.1).abs() < 1e-15);
        assert!((c - 10.0 / 11.0).abs() < 1e-15);
        assert!((a * b * c - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_nodes_hit_endpoints() {
        let g = NullGrid {
            u0: -3.0,
            v0: 1.0,
            u_min: -3000.0,
            v_max: 1000.0,
            nu: 31,
            nv: 31,
            u_spacing: Spacing::Geometric { ratio: None },
            v_spacing: Spacing::Geometric { ratio: None },
        };
        let u = g.u_nodes();
        let v = g.v_nodes();
        assert_eq!(u[0], -3000.0);
        assert_eq!(*u.last().unwrap(), -3.0);
        assert!(u.windows(2).all(|w| w[0] < w[1]));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!((v[10] - 10.0).abs() < 1e-12);
        assert!((u[10] + 300.0).abs() < 1e-10);
    }

    #[test]
    fn refinement_contains_coarse_nodes() {
        let g = NullGrid::with_ratios(-10.0, 1.0, -1e4, 1e3, 1.5, 1.5);
        let f = g.refined(2);
        let (vc, vf) = (g.v_nodes(), f.v_nodes());
        for (j, x) in vc.iter().enumerate() {
            assert!((vf[2 * j] - x).abs() <= 1e-12 * x.abs());
        }
    }

    #[test]
    fn rejects_bad_ordering() {
        let g = NullGrid {
            u0: 1.0,
            v0: 1.0,
            u_min: -10.0,
            v_max: 10.0,
            nu: 4,
            nv: 4,
            u_spacing: Spacing::Uniform,
            v_spacing: Spacing::Uniform,
        };
        assert!(matches!(g.validate(), Err(Error::Grid(_))));
    }

    #[test]
    fn radius_monotone_on_schwarzschild_grid() {
        let g = NullGrid::with_ratios(-5.0, 1.0, -500.0, 500.0, 1.2, 1.2);
        let grid = Grid::new(g, Geometry::Schwarzschild { m: 1.0 }).unwrap();
        for i in 0..grid.nu() {
            for j in 1..grid.nv() {
                assert!(grid.r(i, j) > grid.r(i, j - 1));
                assert!(grid.r(i, j) > 2.0);
            }
        }
        for i in 1..grid.nu() {
            assert!(grid.r(i, 0) < grid.r(i - 1, 0));
        }
    }
}
