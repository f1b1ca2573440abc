use crate::error::{Error, Result};
use crate::evolve::{Family, GridField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplier {
    /// The stationary vector field `T = (du + dv) / 2`.
    T,
}

/// Cumulative fluxes of the `T`-current for a fixed mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Fluxes {
    /// `int (du psi)^2 + W psi^2 du` over each ingoing cone `v = v_j`.
    pub ingoing: Vec<f64>,
    /// `int (dv psi)^2 + W psi^2 dv` over each outgoing cone `u = u_i`.
    pub outgoing: Vec<f64>,
}

impl Fluxes {
    /// `E_in(v0) + E_out(u_min) - E_in(v_max) - E_out(u0)`, zero for exact homogeneous solutions.
    pub fn balance(&self) -> f64 {
        self.ingoing[0] + self.outgoing[0] - self.ingoing[self.ingoing.len() - 1] - self.outgoing[self.outgoing.len() - 1]
    }
}

fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    x.windows(2).zip(f.windows(2)).map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1])).sum()
}

/// Fluxes of `du[(dv psi)^2 + W psi^2] + dv[(du psi)^2 + W psi^2] = 0` for `du dv psi = -W psi`.
pub fn energy_flux(field: &GridField, ell: u32, family: Family, multiplier: Multiplier) -> Result<Fluxes> {
    let Multiplier::T = multiplier;
    let g = field.grid().clone();
    if g.nu() < 3 || g.nv() < 3 {
        return Err(Error::Resolution("fluxes need three nodes per direction".into()));
    }
    let (du, dv) = (field.d_du(), field.d_dv());
    let w = |i: usize, j: usize| family.potential(ell, g.r(i, j));
    let outgoing = (0..g.nu())
        .map(|i| {
            let f: Vec<f64> = (0..g.nv()).map(|j| dv.at(i, j).powi(2) + w(i, j) * field.at(i, j).powi(2)).collect();
            trapezoid(&g.v, &f)
        })
        .collect();
    let ingoing = (0..g.nv())
        .map(|j| {
            let f: Vec<f64> = (0..g.nu()).map(|i| du.at(i, j).powi(2) + w(i, j) * field.at(i, j).powi(2)).collect();
            trapezoid(&g.u, &f)
        })
        .collect();
    Ok(Fluxes { ingoing, outgoing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{solve_lmode, EquationSpec, ScatteringData};
    use crate::geometry::{Geometry, Grid, NullGrid};

    #[test]
    fn trivial_fields() {
        let g = Grid::new(NullGrid::with_ratios(-2.0, 1.0, -100.0, 100.0, 1.1, 1.1), Geometry::Minkowski).unwrap();
        let z = GridField::zeros(g.clone(), "0");
        let f = energy_flux(&z, 1, Family::Minkowski, Multiplier::T).unwrap();
        assert!(f.ingoing.iter().chain(&f.outgoing).all(|&x| x == 0.0));
        let c = GridField::from_fn(g, "1", |_, _| 1.0).unwrap();
        let f = energy_flux(&c, 0, Family::Minkowski, Multiplier::T).unwrap();
        assert!(f.outgoing.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn outgoing_flux_bounded_by_ingoing_data_flux() {
        let grid = NullGrid::with_ratios(-2.0, 1.0, -1e5, 1e4, 1.02, 1.02);
        let psi = solve_lmode(&EquationSpec::new(1, Family::Minkowski), &ScatteringData::power_law(0.0, 1.0), &grid).unwrap();
        let f = energy_flux(&psi, 1, Family::Minkowski, Multiplier::T).unwrap();
        let (e_in, e_out) = (f.ingoing[0], f.outgoing[f.outgoing.len() - 1]);
        assert!(e_out <= e_in * 1.01, "{e_out} vs {e_in}");
        assert!(f.balance().abs() < 1e-2 * e_in, "{}", f.balance());
    }
}
