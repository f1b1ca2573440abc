use crate::error::{Error, Result};
use crate::evolve::GridField;

/// `((u - s) du + (v - s) dv + p) psi` by finite differences.
pub fn scaling_commute(field: &GridField, p: f64, shift: f64) -> Result<GridField> {
    let g = field.grid().clone();
    let (du, dv) = (field.d_du(), field.d_dv());
    GridField::from_fn(g.clone(), format!("(S + {p}) {}", field.label), |i, j| {
        (g.u[i] - shift) * du.at(i, j) + (g.v[j] - shift) * dv.at(i, j) + p * field.at(i, j)
    })
}

/// `Psi_n = prod_{m<n} (r dv + m) psi`.
pub fn rdv_commute(field: &GridField, n: u32) -> Result<GridField> {
    let g = field.grid().clone();
    let mut out = field.clone();
    for m in 0..n {
        let d = out.d_dv();
        out = GridField::from_fn(g.clone(), format!("Psi_{}", m + 1), |i, j| {
            g.r(i, j) * d.at(i, j) + m as f64 * out.at(i, j)
        })?;
    }
    out.label = format!("Psi_{n} {}", field.label);
    Ok(out)
}

/// `T^-k g (t, r) = int_{2 v0 - r}^t g(t', r) (t - t')^(k-1) / (k-1)! dt'` along lines of constant `r* = v - u`,
/// with `t = u + v`. The lines are sampled at the `v` nodes and `g` is interpolated in `u`.
/// Where a line leaves the grid through `u = u_min` the remainder is dropped.
pub fn time_integral(field: &GridField, k: u32, v0: f64) -> Result<GridField> {
    if k == 0 {
        return Ok(field.clone());
    }
    let g = field.grid().clone();
    if (v0 - g.spec.v0).abs() > 1e-12 * v0.abs().max(1.0) {
        return Err(Error::Grid(format!("time integral from v0 = {v0} on a grid starting at {}", g.spec.v0)));
    }
    let scale = field.max_abs();
    let margin_col = field.column(0).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale > 0.0 && margin_col > 1e-12 * scale {
        return Err(Error::Domain("field must vanish on the initial ingoing cone".into()));
    }
    let fact: f64 = (1..k).map(|x| x as f64).product();
    let (nu, nv) = (g.nu(), g.nv());
    let mut vals = vec![0.0; nu * nv];
    for i in 0..nu {
        for j in 1..nv {
            let (ui, vj) = (g.u[i], g.v[j]);
            let t = ui + vj;
            let mut acc = 0.0;
            let mut prev: Option<(f64, f64)> = None;
            for jj in 0..=j {
                let vv = g.v[jj];
                let uu = ui - (vj - vv);
                let point = if uu < g.spec.u_min {
                    None
                } else if jj == j {
                    Some(field.at(i, j))
                } else {
                    field.interpolate(uu, vv)
                };
                let Some(gv) = point else {
                    prev = None;
                    continue;
                };
                let tp = uu + vv;
                let w = (t - tp).powi(k as i32 - 1) / fact;
                if let Some((tq, fq)) = prev {
                    acc += 0.5 * (tp - tq) * (fq + gv * w);
                }
                prev = Some((tp, gv * w));
            }
            vals[i * nv + j] = acc;
        }
    }
    GridField::new(g, vals, format!("T^-{k} {}", field.label))
}
