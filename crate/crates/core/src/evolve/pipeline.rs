//! First iterates of the coefficient algorithm: `psi0` solves the unperturbed
//! equation with the given data, `psi1` the unperturbed equation with source
//! `P[psi0]` and trivial data.
//!
//! For Schwarzschild both iterates live on a chart grid with coordinates
//! `ubar = v0 - r0`, `vbar = v0 + r - r0`, in which `r0 = v0 - ubar` and
//! `r = vbar - ubar` as in Minkowski, and `du dv` becomes the Minkowski operator
//! up to terms linear in `M`.

use super::exact::{minkowski_exact_lmode, Monomials, MAX_EXACT_ELL};
use super::field::GridField;
use super::solver::{solve_lmode_on, SolveOptions};
use super::spec::{EquationSpec, Family, ScatteringData, Semilinear, SemilinearKind, Source};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Grid, NullGrid};
use std::sync::Arc;

/// `G` for the first semilinear iterate, as a function of `(r0, r)` for unit data.
///
/// `(DudvProduct, 0 -> 0)`: data `r0^-p`, `G = -r du phi0 dv phi0 = 1/2 du(r^-2 r0^-2p)`.
/// `(AngularGradientSq, 1 -> 0)`: `psi0 = r^-1 r0^-p ((p-1) r + 2 r0)`,
/// `G = -r^-5 r0^-2p ((p-1) r + 2 r0)^2` with unit spherical normalisation.
pub fn semilinear_source(kind: SemilinearKind, ell_in: u32, p: f64, ell_out: u32) -> Result<Monomials> {
    match (kind, ell_in, ell_out) {
        (SemilinearKind::DudvProduct, 0, 0) => {
            Ok(Monomials::new([(p, -2.0 * p - 1.0, -2.0), (1.0, -2.0 * p, -3.0)]))
        }
        (SemilinearKind::AngularGradientSq, 1, 0) => {
            let q = p - 1.0;
            Ok(Monomials::new([
                (-q * q, -2.0 * p, -3.0),
                (-4.0 * q, 1.0 - 2.0 * p, -4.0),
                (-4.0, 2.0 - 2.0 * p, -5.0),
            ]))
        }
        _ => Err(Error::Unsupported(format!("semilinear source {kind:?} for {ell_in} -> {ell_out}"))),
    }
}

/// The coefficient combination `4 - 16(p-1)/(2p-2) + 12(p-1)^2/((2p-2)(2p-1))`
/// multiplying the first non-integrable piece of the `1 -> 0` source.
pub fn semilinear_leading_coefficient(p: f64) -> Result<f64> {
    if (p - 1.0).abs() < 1e-12 || (p - 0.5).abs() < 1e-12 {
        return Err(Error::Pole { func: "semilinear_leading_coefficient", x: p });
    }
    let q = p - 1.0;
    Ok(4.0 - 16.0 * q / (2.0 * p - 2.0) + 12.0 * q * q / ((2.0 * p - 2.0) * (2.0 * p - 1.0)))
}

/// `S1` with `psi = psi0 + M psi1` in the chart, so that
/// `dubar dvbar psi1 = -L psi1 / r^2 + S1`, where `d_r0 = -dubar - dvbar` and `d_r = dvbar`.
///
/// `S1 = 2 [-(1/r0 + 1/r) d_r0 d_r - (2/r) d_r^2 + r^-2 d_r + (L + k)/r^3] psi0`
/// with `k = -1` (wave equation) or `k = 3` (Regge-Wheeler).
pub fn schwarzschild_first_order_source(psi0: &Monomials, ell: u32, regge_wheeler: bool) -> Monomials {
    let l = (ell * (ell + 1)) as f64;
    let k = if regge_wheeler { 3.0 } else { -1.0 };
    let dr = psi0.d_r();
    let mixed = dr.d_r0();
    let terms = -(mixed.shift(-1.0, 0.0) + mixed.shift(0.0, -1.0))
        + dr.d_r().shift(0.0, -1.0).scale(-2.0)
        + dr.shift(0.0, -2.0)
        + psi0.shift(0.0, -3.0).scale(l + k);
    terms.scale(2.0)
}

/// The perturbation, read off the equation family or semilinear term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Perturbation {
    None,
    Cubic { m: f64 },
    Schwarzschild { m: f64, regge_wheeler: bool },
    Semilinear(Semilinear),
}

/// Unperturbed equation and perturbation of `spec`.
pub fn split(spec: &EquationSpec) -> Result<(EquationSpec, Perturbation)> {
    let (family, pert) = match spec.family {
        Family::CubicPotential { m } => (Family::Minkowski, Perturbation::Cubic { m }),
        Family::Schwarzschild { m } => (Family::Minkowski, Perturbation::Schwarzschild { m, regge_wheeler: false }),
        Family::ReggeWheeler { m } => (Family::Minkowski, Perturbation::Schwarzschild { m, regge_wheeler: true }),
        f => (f, Perturbation::None),
    };
    let pert = match (pert, spec.semilinear) {
        (Perturbation::None, Some(s)) => {
            s.validate()?;
            Perturbation::Semilinear(s)
        }
        (p, None) => p,
        (_, Some(_)) => return Err(Error::Unsupported("potential and semilinear perturbations together".into())),
    };
    let base_ell = match pert {
        Perturbation::Semilinear(s) => s.ell_in,
        _ => spec.ell,
    };
    Ok((EquationSpec { ell: base_ell, family, source: spec.source.clone(), semilinear: None }, pert))
}

/// Output of [`iterate_pipeline`]; fields share one grid.
#[derive(Clone, Debug)]
pub struct Iterates {
    pub fields: Vec<GridField>,
    pub perturbation: Perturbation,
    /// Closed-form `psi0` and first-iterate source, when the data are a pure power law.
    pub psi0_exact: Option<Monomials>,
    pub source_exact: Option<Monomials>,
    /// Fields are on the `(ubar, vbar)` chart rather than the physical grid.
    pub chart: bool,
}

/// `[psi0]` for `depth = 1`, `[psi0, psi1]` for `depth = 2`.
pub fn iterate_pipeline(spec: &EquationSpec, data: &ScatteringData, grid: &NullGrid, depth: usize) -> Result<Vec<GridField>> {
    Ok(iterates(spec, data, grid, depth, &SolveOptions::default())?.fields)
}

pub fn iterates(spec: &EquationSpec, data: &ScatteringData, grid: &NullGrid, depth: usize, opts: &SolveOptions) -> Result<Iterates> {
    if !(1..=2).contains(&depth) {
        return Err(Error::Unsupported(format!("iterate depth {depth}; only 1 and 2 are implemented")));
    }
    let (base, pert) = split(spec)?;
    let chart = matches!(pert, Perturbation::Schwarzschild { .. });
    let g = Grid::new(grid.clone(), if base.family.needs_schwarzschild() { Geometry::Schwarzschild { m: base.family.mass() } } else { Geometry::Minkowski })?;
    let v0 = grid.v0;

    let exact = match (data.power_law, base.family, &base.source, data.has_incoming()) {
        (Some(pl), Family::Minkowski, None, false) if base.ell <= MAX_EXACT_ELL => {
            Some(minkowski_exact_lmode(base.ell, pl.p, pl.c)?)
        }
        _ => None,
    };
    let psi0 = match &exact {
        Some(m) => GridField::from_fn(g.clone(), "psi0 (closed form)", |i, j| m.eval(v0 - g.u[i], g.v[j] - g.u[i]))?,
        None => {
            let mut f = solve_lmode_on(&base, data, &g, opts)?;
            f.label = "psi0".into();
            f
        }
    };
    let mut out = Iterates { fields: vec![psi0], perturbation: pert, psi0_exact: exact.clone(), source_exact: None, chart };
    if depth == 1 {
        return Ok(out);
    }

    let ell_out = match pert {
        Perturbation::Semilinear(s) => s.ell_out,
        _ => spec.ell,
    };
    let source_exact = match (&exact, pert) {
        (_, Perturbation::None) => None,
        (Some(m), Perturbation::Cubic { m: mass }) => Some(m.shift(0.0, -3.0).scale(mass)),
        (Some(m), Perturbation::Schwarzschild { m: mass, regge_wheeler }) => {
            Some(schwarzschild_first_order_source(m, spec.ell, regge_wheeler).scale(mass))
        }
        (Some(_), Perturbation::Semilinear(s)) => {
            let pl = data.power_law.expect("closed form implies power-law data");
            let amp = match s.ell_in {
                0 => pl.c,
                _ => pl.c / (pl.p + 1.0),
            };
            Some(semilinear_source(s.kind, s.ell_in, pl.p, s.ell_out)?.scale(s.strength * amp * amp))
        }
        (None, _) => None,
    };
    let psi1_spec_base = EquationSpec::new(ell_out, base.family);
    let psi1 = match (&source_exact, pert) {
        (_, Perturbation::None) => GridField::zeros(g.clone(), "psi1"),
        (Some(src), _) => {
            let spec1 = psi1_spec_base.with_source(Source::Monomials { terms: src.clone(), v0 });
            solve_lmode_on(&spec1, &ScatteringData::trivial(), &g, opts)?
        }
        (None, p) => {
            let src = nodal_source(&out.fields[0], p, spec.ell)?;
            let spec1 = psi1_spec_base.with_source(Source::Nodal(Arc::new(src)));
            solve_lmode_on(&spec1, &ScatteringData::trivial(), &g, opts)?
        }
    };
    let mut psi1 = psi1;
    psi1.label = "psi1".into();
    out.fields.push(psi1);
    out.source_exact = source_exact;
    Ok(out)
}

/// `P[psi0]` by finite differences when no closed form is available.
fn nodal_source(psi0: &GridField, pert: Perturbation, ell: u32) -> Result<GridField> {
    let g = psi0.grid().clone();
    let v0 = g.spec.v0;
    match pert {
        Perturbation::None => Ok(GridField::zeros(g, "source")),
        Perturbation::Cubic { m } => psi0.map("source", |i, j, x| m * x / g.r(i, j).powi(3)),
        Perturbation::Semilinear(s) => {
            if s.kind != SemilinearKind::DudvProduct || s.ell_in != 0 {
                return Err(Error::Unsupported("angular-gradient iterates need power-law data".into()));
            }
            let phi = psi0.map("phi", |i, j, x| x / g.r(i, j))?;
            let (pu, pv) = (phi.d_du(), phi.d_dv());
            GridField::from_fn(g.clone(), "source", |i, j| -s.strength * g.r(i, j) * pu.at(i, j) * pv.at(i, j))
        }
        Perturbation::Schwarzschild { m, regge_wheeler } => {
            let l = (ell * (ell + 1)) as f64;
            let k = if regge_wheeler { 3.0 } else { -1.0 };
            let dr = psi0.d_dv();
            let drr = dr.d_dv();
            let dr0 = psi0.d_du().zip(&dr, "d_r0 psi", |a, b| -a - b)?;
            let mixed = dr0.d_dv();
            GridField::from_fn(g.clone(), "source", |i, j| {
                let (r, r0) = (g.r(i, j), v0 - g.u[i]);
                2.0 * m
                    * (-(1.0 / r0 + 1.0 / r) * mixed.at(i, j) - 2.0 / r * drr.at(i, j)
                        + dr.at(i, j) / (r * r)
                        + (l + k) * psi0.at(i, j) / (r * r * r))
            })
        }
    }
}

/// `psi0 + psi1` from the chart, evaluated at the nodes of a physical Schwarzschild grid.
pub fn compose_on_physical(iter: &Iterates, physical: &Arc<Grid>) -> Result<GridField> {
    if !iter.chart {
        return Err(Error::Spec("iterates are already on the physical grid".into()));
    }
    let v0 = physical.spec.v0;
    let (a, b) = (&iter.fields[0], iter.fields.get(1));
    GridField::from_fn(physical.clone(), "psi0 + psi1", |i, j| {
        let (r, r0) = (physical.r(i, j), physical.r0(i));
        let (ub, vb) = (v0 - r0, v0 - r0 + r);
        let s0 = match &iter.psi0_exact {
            Some(m) => m.eval(r0, r),
            None => a.interpolate(ub, vb).unwrap_or(f64::NAN),
        };
        s0 + b.and_then(|f| f.interpolate(ub, vb)).unwrap_or(f64::NAN)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::conservation::conservation_transport;
    use crate::geometry::Spacing;

    #[test]
    fn semilinear_coefficient_at_two() {
        assert!((semilinear_leading_coefficient(2.0).unwrap() + 2.0).abs() < 1e-14);
        for p in [-0.5, 0.3, 0.7, 1.5, 3.0] {
            let c = semilinear_leading_coefficient(p).unwrap();
            assert!((c - (-2.0 * p - 2.0) / (2.0 * p - 1.0)).abs() < 1e-12);
            assert!(c != 0.0);
        }
    }

    #[test]
    fn dudv_source_is_exact_derivative() {
        let p = 0.7;
        let g = semilinear_source(SemilinearKind::DudvProduct, 0, p, 0).unwrap();
        let prim = Monomials::new([(0.5, -2.0 * p, -2.0)]).d_u();
        for (r0, r) in [(2.0, 3.0), (7.0, 300.0)] {
            assert!((g.eval(r0, r) - prim.eval(r0, r)).abs() < 1e-14);
        }
        let psi0 = minkowski_exact_lmode(0, p, 1.0).unwrap();
        let phi = psi0.shift(0.0, -1.0);
        let direct = -(&(&phi.d_u() * &phi.d_v())).shift(0.0, 1.0);
        assert!((direct.eval(3.0, 10.0) - g.eval(3.0, 10.0)).abs() < 1e-14);
    }

    #[test]
    fn angular_source_matches_printed_square() {
        let p: f64 = 2.0;
        let g = semilinear_source(SemilinearKind::AngularGradientSq, 1, p, 0).unwrap();
        let (r0, r) = (3.0_f64, 8.0_f64);
        let printed = r.powi(-5) * r0.powf(-2.0 * p) * ((p - 1.0) * r + 2.0 * r0).powi(2);
        assert!((g.eval(r0, r) + printed).abs() < 1e-15);
    }

    #[test]
    fn zero_perturbation_gives_zero_iterate() {
        let grid = NullGrid::with_ratios(-2.0, 1.0, -100.0, 50.0, 1.2, 1.2);
        let spec = EquationSpec::new(1, Family::Minkowski);
        let f = iterate_pipeline(&spec, &ScatteringData::power_law(0.0, 1.0), &grid, 2).unwrap();
        assert_eq!(f[1].max_abs(), 0.0);
        assert!(iterate_pipeline(&spec, &ScatteringData::power_law(0.0, 1.0), &grid, 3).is_err());
    }

    #[test]
    fn cubic_l0_transversal_matches_quadrature() {
        let (m, p) = (0.5, 1.0);
        let grid = NullGrid { u0: -2.0, v0: 1.0, u_min: -1e5, v_max: 50.0, nu: 400, nv: 200, u_spacing: Spacing::default(), v_spacing: Spacing::default() };
        let spec = EquationSpec::new(0, Family::CubicPotential { m });
        let it = iterates(&spec, &ScatteringData::power_law(p, 1.0), &grid, 2, &SolveOptions::default()).unwrap();
        let psi1 = &it.fields[1];
        let g = psi1.grid();
        let dv = psi1.d_dv();
        let i = g.nu() - 1;
        for j in [10, 100, 190] {
            let (u, v) = (g.u[i], g.v[j]);
            let f = |s: f64| if s <= 0.0 { 0.0 } else {
                let up = u / s;
                m * (1.0 - up).powf(-p) * (v - up).powi(-3) * (-u) / (s * s)
            };
            let want = quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-14).integral;
            let got = dv.at(i, j);
            assert!((got - want).abs() < 1e-3 * want.abs(), "j={j}: {got} vs {want}");
        }
    }

    #[test]
    fn cubic_l1_transport_rhs_is_exact_derivative() {
        // d_u(r^-2 d_v(r^2 d_v) psi1) = r^-4 (r^2 d_v)(r^2 G), G = M psi0 / r^3.
        let (m, p, ell) = (1.0, 0.0, 1u32);
        let psi0 = minkowski_exact_lmode(ell, p, 1.0).unwrap();
        let big_c = crate::evolve::exact::cone_transversal_coefficient(ell, p, ell);
        let g = psi0.shift(0.0, -3.0).scale(m);
        let rhs = g.shift(0.0, 2.0).r2_dv_pow(ell).shift(0.0, -2.0 * ell as f64 - 2.0);
        let pred = Monomials::new([(0.5 * m * big_c, ell as f64 - p, -2.0 * ell as f64 - 2.0)]).d_u();
        for (r0, r) in [(2.0, 2.0), (3.0, 17.0), (10.0, 1e3)] {
            assert!((rhs.eval(r0, r) - pred.eval(r0, r)).abs() < 1e-13 * pred.eval(r0, r).abs().max(1e-12));
        }
        let grid = NullGrid::with_ratios(-2.0, 1.0, -1e3, 1e3, 1.05, 1.05);
        let it = iterates(&EquationSpec::new(ell, Family::CubicPotential { m }), &ScatteringData::power_law(p, 1.0), &grid, 2, &SolveOptions::default()).unwrap();
        let gf = it.fields[1].grid().clone();
        let src = GridField::from_fn(gf.clone(), "G", |i, j| g.eval(grid.v0 - gf.u[i], gf.r(i, j))).unwrap();
        let (_, resid) = conservation_transport(&it.fields[1], ell, Some(&src)).unwrap();
        assert!(resid < 1e-3, "{resid}");
    }
}
