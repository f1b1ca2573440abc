use super::field::GridField;
use super::spec::{EquationSpec, Profile, ScatteringData, SemilinearKind, Source};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Grid, NullGrid};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Semilinear runs abort once `|psi|` exceeds this.
    pub blowup_bound: f64,
    /// Fixed-point sweeps of the implicit cell update for semilinear terms.
    pub picard_max: usize,
    pub picard_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { blowup_bound: 1e8, picard_max: 8, picard_tol: 1e-14 }
    }
}

/// Background implied by the equation family.
pub fn geometry_for(spec: &EquationSpec) -> Geometry {
    if spec.family.needs_schwarzschild() {
        Geometry::Schwarzschild { m: spec.family.mass() }
    } else {
        Geometry::Minkowski
    }
}

/// Box-scheme solve of `du dv psi = -W psi + G + N` on a fresh grid.
pub fn solve_lmode(spec: &EquationSpec, data: &ScatteringData, grid: &NullGrid) -> Result<GridField> {
    let g = Grid::new(grid.clone(), geometry_for(spec))?;
    solve_lmode_on(spec, data, &g, &SolveOptions::default())
}

const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

fn gauss3(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    GL3.iter().map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

fn cone_rhs(spec: &EquationSpec, data: &ScatteringData, geom: Geometry, v0: f64, u: f64) -> f64 {
    let r = geom.r(u, v0).unwrap_or(f64::NAN);
    let g = match &spec.source {
        Some(Source::Closed(f)) => f(u, v0, r),
        Some(Source::Monomials { terms, v0: w0 }) => terms.eval(w0 - u, r),
        Some(Source::Nodal(_)) | None => 0.0,
    };
    -spec.family.potential(spec.ell, r) * (data.psi_ingoing)(u, r) + g
}

/// `dv psi` at the corner `(u_min, v0)`, from integrating the linear part of
/// `du (dv psi) = -W psi + G` along the ingoing cone.
///
/// With a transversal seed the integration starts at the anchor `u1`, where
/// `dv psi = 2 T psi - du psi`; otherwise it starts at past null infinity with
/// `dv psi = 0`.
pub fn corner_transversal(spec: &EquationSpec, data: &ScatteringData, grid: &Grid) -> Result<f64> {
    let (u_min, u0, v0) = (grid.spec.u_min, grid.spec.u0, grid.spec.v0);
    let geom = grid.geometry;
    let rhs = |u: f64| cone_rhs(spec, data, geom, v0, u);
    let out = match &data.transversal_seed {
        None => {
            // u = u_min / t maps (0, 1] onto (-inf, u_min].
            let f = |t: f64| if t <= 0.0 { 0.0 } else { rhs(u_min / t) * (-u_min) / (t * t) };
            let scale = rhs(u_min).abs() * u_min.abs();
            let res = quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-12 * scale.max(1e-300));
            res.integral
        }
        Some(seed) => {
            if seed.values.len() > 2 {
                return Err(Error::Unsupported("transversal seeds beyond T psi".into()));
            }
            if !(u_min < seed.u1 && seed.u1 <= u0) {
                return Err(Error::Spec(format!("anchor u1 = {} outside ({u_min}, {u0}]", seed.u1)));
            }
            let psi_in = |u: f64| -> Result<f64> { Ok((data.psi_ingoing)(u, geom.r(u, v0)?)) };
            let psi1 = psi_in(seed.u1)?;
            if let Some(&given) = seed.values.first() {
                if (given - psi1).abs() > 1e-10 * psi1.abs().max(1.0) {
                    return Err(Error::Spec(format!("seed psi = {given} disagrees with cone data {psi1}")));
                }
            }
            let t_psi = seed.values.get(1).copied().unwrap_or(0.0);
            let h = 1e-4 * seed.u1.abs().max(1.0);
            let du_psi = (8.0 * (psi_in(seed.u1 + h / 2.0)? - psi_in(seed.u1 - h / 2.0)?)
                - (psi_in(seed.u1 + h)? - psi_in(seed.u1 - h)?))
                / (6.0 * h);
            let panels = 2000;
            let (la, lb) = ((-u_min).ln(), (-seed.u1).ln());
            let mut integral = 0.0;
            for k in 0..panels {
                let a = -(la + (lb - la) * k as f64 / panels as f64).exp();
                let b = -(la + (lb - la) * (k + 1) as f64 / panels as f64).exp();
                integral += gauss3(&rhs, a, b);
            }
            2.0 * t_psi - du_psi - integral
        }
    };
    if !out.is_finite() {
        return Err(Error::NotConverged("transversal derivative at the far-past corner".into()));
    }
    Ok(out)
}

/// As [`solve_lmode`] on a prepared grid.
pub fn solve_lmode_on(spec: &EquationSpec, data: &ScatteringData, grid: &Arc<Grid>, opts: &SolveOptions) -> Result<GridField> {
    spec.validate(&grid.geometry)?;
    if let Some(s) = &spec.semilinear {
        if s.kind != SemilinearKind::DudvProduct || s.ell_in != 0 {
            return Err(Error::Unsupported(
                "only the l = 0 du-dv product enters the sweep; use the iterate pipeline for projections".into(),
            ));
        }
    }
    if let Some(Source::Nodal(f)) = &spec.source {
        if f.grid().nu() != grid.nu() || f.grid().nv() != grid.nv() {
            return Err(Error::Grid("nodal source lives on a different grid".into()));
        }
    }
    if matches!(spec.source, Some(Source::Monomials { .. })) && !grid.is_minkowski() {
        return Err(Error::Spec("monomial sources are written in Minkowski (r0, r)".into()));
    }
    let (nu, nv) = (grid.nu(), grid.nv());
    let geom = grid.geometry;
    let mut psi = vec![0.0; nu * nv];

    for i in 0..nu {
        psi[i * nv] = (data.psi_ingoing)(grid.u[i], grid.r0(i));
    }
    // Row derivative: incoming radiation plus either the supplied past tail or
    // the recovered corner value, frozen along the row.
    let frozen = match &data.past_tail {
        Some(_) if data.transversal_seed.is_none() => 0.0,
        _ => corner_transversal(spec, data, grid)?,
    };
    let profiles: Vec<&Profile> = data.incoming.iter().chain(data.past_tail.iter()).collect();
    let h = |v: f64| profiles.iter().map(|f| f(v)).sum::<f64>() + frozen;
    for j in 1..nv {
        psi[j] = psi[j - 1] + gauss3(&h, grid.v[j - 1], grid.v[j]);
    }
    if let Some(k) = psi.iter().position(|x| !x.is_finite()) {
        let (i, j) = if k < nv { (0, k) } else { (k / nv, 0) };
        return Err(Error::NonFinite { i, j });
    }

    let kappa = spec.semilinear.map(|s| s.strength);
    for i in 0..nu - 1 {
        let (ua, ub) = (grid.u[i], grid.u[i + 1]);
        let du = ub - ua;
        let uc = 0.5 * (ua + ub);
        for j in 0..nv - 1 {
            let (va, vb) = (grid.v[j], grid.v[j + 1]);
            let dv = vb - va;
            let vc = 0.5 * (va + vb);
            let rc = match geom {
                Geometry::Minkowski => vc - uc,
                _ => geom.r_near(uc, vc, 0.5 * (grid.r(i, j + 1) + grid.r(i + 1, j)))?,
            };
            let a = psi[i * nv + j];
            let b = psi[(i + 1) * nv + j];
            let c = psi[i * nv + j + 1];
            let hh = du * dv;
            let w = spec.family.potential(spec.ell, rc);
            let s = match &spec.source {
                None => 0.0,
                Some(Source::Closed(f)) => f(uc, vc, rc),
                Some(Source::Monomials { terms, v0 }) => terms.eval(v0 - uc, rc),
                Some(Source::Nodal(f)) => 0.25 * (f.at(i, j) + f.at(i + 1, j) + f.at(i, j + 1) + f.at(i + 1, j + 1)),
            };
            let lin = b + c - a - hh * w * (a + b + c) / 4.0 + hh * s;
            let den = 1.0 + hh * w / 4.0;
            let mut d = lin / den;
            if let Some(kappa) = kappa {
                let lapse = geom.lapse(rc);
                let nonlin = |d: f64| {
                    let p = 0.25 * (a + b + c + d);
                    let dpu = 0.5 * ((b - a) + (d - c)) / du;
                    let dpv = 0.5 * ((c - a) + (d - b)) / dv;
                    let dphi_u = dpu / rc + lapse * p / (rc * rc);
                    let dphi_v = dpv / rc - lapse * p / (rc * rc);
                    -kappa * rc * dphi_u * dphi_v
                };
                d = b + c - a;
                for _ in 0..opts.picard_max.max(1) {
                    let next = (lin + hh * nonlin(d)) / den;
                    let step = (next - d).abs();
                    d = next;
                    if step <= opts.picard_tol * d.abs().max(1e-300) {
                        break;
                    }
                }
                if d.abs() > opts.blowup_bound {
                    return Err(Error::BlowUp { i: i + 1, j: j + 1, value: d });
                }
            }
            if !d.is_finite() {
                return Err(Error::NonFinite { i: i + 1, j: j + 1 });
            }
            psi[(i + 1) * nv + j + 1] = d;
        }
    }
    GridField::new(grid.clone(), psi, format!("psi l={} {:?}", spec.ell, spec.family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::exact::minkowski_exact_lmode;
    use crate::evolve::spec::{Family, Semilinear};

    fn small_grid() -> NullGrid {
        NullGrid::with_ratios(-2.0, 1.0, -200.0, 200.0, 1.08, 1.08)
    }

    #[test]
    fn constant_data_stay_constant() {
        let spec = EquationSpec::new(0, Family::Minkowski);
        let f = solve_lmode(&spec, &ScatteringData::ingoing(|_, _| 1.0), &small_grid()).unwrap();
        assert!(f.values().iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn second_order_against_closed_form() {
        let (ell, p) = (1, 0.5);
        let exact = minkowski_exact_lmode(ell, p, 1.0).unwrap();
        let v0 = 1.0;
        let tail = {
            let e = exact.d_v();
            let u_min = small_grid().u_min;
            Arc::new(move |v: f64| e.eval(v0 - u_min, v - u_min)) as Profile
        };
        let data = ScatteringData::power_law(p, 1.0).with_past_tail(tail);
        let spec = EquationSpec::new(ell, Family::Minkowski);
        let mut errs = Vec::new();
        for k in [1, 2, 4] {
            let f = solve_lmode(&spec, &data, &small_grid().refined(k)).unwrap();
            let g = f.grid();
            let (i, j) = (g.nu() - 1, g.nv() - 1);
            errs.push((f.at(i, j) - exact.eval(g.r0(i), g.r(i, j))).abs());
        }
        let o1 = (errs[0] / errs[1]).log2();
        let o2 = (errs[1] / errs[2]).log2();
        assert!(o1 > 1.8 && o2 > 1.8, "orders {o1} {o2} errs {errs:?}");
    }

    #[test]
    fn causality() {
        let spec = EquationSpec::new(1, Family::Minkowski);
        let grid = small_grid();
        let u1 = -20.0;
        let a = solve_lmode(&spec, &ScatteringData::ingoing(|_, r0| 1.0 / r0), &grid).unwrap();
        let b = solve_lmode(&spec, &ScatteringData::ingoing(move |u, r0| 1.0 / r0 + if u > u1 { 0.3 } else { 0.0 }), &grid).unwrap();
        let g = a.grid();
        for i in 0..g.nu() {
            if g.u[i] <= u1 {
                assert_eq!(a.row(i), b.row(i));
            }
        }
    }

    #[test]
    fn linearity() {
        let grid = small_grid();
        let s1 = Source::closed(|_, _, r| 1.0 / (r * r * r));
        let spec1 = EquationSpec::new(2, Family::ScaleInvariant { c: 0.3 }).with_source(s1);
        let spec0 = EquationSpec::new(2, Family::ScaleInvariant { c: 0.3 });
        let d1 = ScatteringData::ingoing(|_, r0| r0.powf(-0.5));
        let sum = solve_lmode(&spec1, &d1, &grid).unwrap();
        let a = solve_lmode(&spec0, &d1, &grid).unwrap();
        let b = solve_lmode(&spec1, &ScatteringData::trivial(), &grid).unwrap();
        for k in 0..sum.values().len() {
            let want = a.values()[k] + b.values()[k];
            assert!((sum.values()[k] - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn tiny_mass_matches_minkowski() {
        let grid = NullGrid::with_ratios(-5.0, 1.0, -100.0, 100.0, 1.1, 1.1);
        let data = ScatteringData::ingoing(|_, r0| 1.0 / r0);
        let a = solve_lmode(&EquationSpec::new(1, Family::Minkowski), &data, &grid).unwrap();
        let b = solve_lmode(&EquationSpec::new(1, Family::Schwarzschild { m: 1e-8 }), &data, &grid).unwrap();
        for k in 0..a.values().len() {
            let x = a.values()[k];
            assert!((x - b.values()[k]).abs() <= 1e-6 * x.abs().max(1e-3));
        }
    }

    #[test]
    fn semilinear_blowup_guard() {
        let spec = EquationSpec::new(0, Family::Minkowski).with_semilinear(Semilinear {
            kind: SemilinearKind::DudvProduct,
            ell_in: 0,
            ell_out: 0,
            strength: -50.0,
        });
        let opts = SolveOptions { blowup_bound: 10.0, ..Default::default() };
        let g = Grid::new(small_grid(), Geometry::Minkowski).unwrap();
        let r = solve_lmode_on(&spec, &ScatteringData::ingoing(|_, r0| 200.0 / r0), &g, &opts);
        assert!(matches!(r, Err(Error::BlowUp { .. }) | Err(Error::NonFinite { .. })), "{r:?}");
    }

    #[test]
    fn spec_geometry_mismatch_is_rejected() {
        let spec = EquationSpec::new(0, Family::Schwarzschild { m: 1.0 });
        let g = Grid::new(small_grid(), Geometry::Minkowski).unwrap();
        assert!(solve_lmode_on(&spec, &ScatteringData::trivial(), &g, &SolveOptions::default()).is_err());
    }
}
