//! Fixed-`ell` conservation law on Minkowski:
//! `du (r^-2l dv (r^2 dv)^l psi) = r^(-2l-2) (r^2 dv)^l (r^2 G)` whenever
//! `du dv psi = -l(l+1) psi / r^2 + G`.

use super::field::{derivative_1d, GridField};
use crate::error::{Error, Result};

fn r2_dv(field: &GridField) -> Result<GridField> {
    let g = field.grid().clone();
    let d = field.d_dv();
    d.map("r^2 dv", |i, j, x| g.r(i, j).powi(2) * x)
}

fn r2_dv_pow(field: &GridField, n: u32) -> Result<GridField> {
    (0..n).try_fold(field.clone(), |acc, _| r2_dv(&acc))
}

/// `Phi = r^-2l dv (r^2 dv)^l psi` and the largest interior defect of the transport law.
///
/// `source` is `G` in `du dv psi = -W psi + G`; any deviation of the potential
/// from `l(l+1)/r^2` must be folded into it. Requires a Minkowski grid.
pub fn conservation_transport(psi: &GridField, ell: u32, source: Option<&GridField>) -> Result<(GridField, f64)> {
    let g = psi.grid().clone();
    if !g.is_minkowski() {
        return Err(Error::Unsupported("conservation transport is stated on Minkowski grids".into()));
    }
    let skip = ell as usize + 1;
    if g.nv() < 2 * skip + 3 || g.nu() < 5 {
        return Err(Error::Resolution(format!(
            "{} x {} grid too coarse for {} nested v-derivatives",
            g.nu(),
            g.nv(),
            ell + 1
        )));
    }
    if let Some(s) = source {
        if s.values().len() != psi.values().len() {
            return Err(Error::Grid("source and field live on different grids".into()));
        }
    }
    let top = r2_dv_pow(psi, ell + 1)?;
    let phi = top.map(format!("Phi_{ell}"), |i, j, x| x * g.r(i, j).powi(-2 * ell as i32 - 2))?;
    let rhs = match source {
        Some(s) => {
            let r2g = s.map("r^2 G", |i, j, x| g.r(i, j).powi(2) * x)?;
            Some(r2_dv_pow(&r2g, ell)?.map("rhs", |i, j, x| x * g.r(i, j).powi(-2 * ell as i32 - 2))?)
        }
        None => None,
    };
    let (nu, nv) = (g.nu(), g.nv());
    let mut resid: f64 = 0.0;
    for j in skip..nv - skip {
        let col = phi.column(j);
        let d = derivative_1d(&g.u, &col);
        for i in 1..nu - 1 {
            let want = rhs.as_ref().map_or(0.0, |f| f.at(i, j));
            resid = resid.max((d[i] - want).abs());
        }
    }
    Ok((phi, resid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::exact::minkowski_exact_lmode;
    use crate::geometry::{Geometry, Grid, NullGrid};

    #[test]
    fn constant_field_has_zero_flux() {
        let g = Grid::new(NullGrid::with_ratios(-2.0, 1.0, -100.0, 100.0, 1.2, 1.2), Geometry::Minkowski).unwrap();
        let f = GridField::from_fn(g, "one", |_, _| 1.0).unwrap();
        let (phi, resid) = conservation_transport(&f, 0, None).unwrap();
        assert_eq!(phi.max_abs(), 0.0);
        assert_eq!(resid, 0.0);
    }

    #[test]
    fn no_incoming_closed_form_has_small_flux() {
        for ell in 0..=3 {
            let psi0 = minkowski_exact_lmode(ell, 0.5, 1.0).unwrap();
            let (mut last, mut last_phi) = (f64::INFINITY, f64::INFINITY);
            for k in [1usize, 2, 4] {
                let grid = NullGrid::with_ratios(-2.0, 1.0, -200.0, 200.0, 1.1, 1.1).refined(k);
                let g = Grid::new(grid.clone(), Geometry::Minkowski).unwrap();
                let f = GridField::from_fn(g.clone(), "psi", |i, j| psi0.eval(grid.v0 - g.u[i], g.r(i, j))).unwrap();
                let (phi, resid) = conservation_transport(&f, ell, None).unwrap();
                let s = (ell as usize + 1) * k;
                let interior = (k..g.nu() - k)
                    .flat_map(|i| (s..g.nv() - s).map(move |j| (i, j)))
                    .fold(0.0f64, |m, (i, j)| m.max(phi.at(i, j).abs()));
                assert!(resid <= 0.5 * last || resid == 0.0, "ell={ell} k={k}: {resid} vs {last}");
                assert!(interior <= 0.5 * last_phi || interior == 0.0, "ell={ell} k={k}: {interior} vs {last_phi}");
                last = resid;
                last_phi = interior;
            }
        }
    }

    #[test]
    fn rejects_coarse_grids() {
        let g = Grid::new(NullGrid::with_ratios(-2.0, 1.0, -10.0, 3.0, 1.5, 1.5), Geometry::Minkowski).unwrap();
        let f = GridField::zeros(g, "z");
        assert!(matches!(conservation_transport(&f, 3, None), Err(Error::Resolution(_))));
    }
}
