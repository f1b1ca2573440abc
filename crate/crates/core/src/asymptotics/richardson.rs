use super::fit::{cone_samples, default_window, fit_points, Cone, FitResult, CONDITION_LIMIT};
use crate::error::{Error, Result};
use crate::evolve::GridField;
use serde::Serialize;

/// Cone, windows and basis for extracting one coefficient across refinements.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractOptions {
    pub cone: Cone,
    /// Defaults to the outermost decade of the coarsest cone.
    pub window: Option<(f64, f64)>,
    /// Defaults to `window` scaled inward by a factor 3.
    pub second_window: Option<(f64, f64)>,
    /// Defaults to [`default_basis`].
    pub basis: Option<Vec<(f64, u32)>>,
    /// Assumed convergence order of the scheme.
    pub order: f64,
    /// Apply a second Richardson pass at `order + 2` to the extrapolants.
    pub romberg: bool,
}

impl ExtractOptions {
    pub fn on(cone: Cone) -> Self {
        ExtractOptions { cone, window: None, second_window: None, basis: None, order: 2.0, romberg: false }
    }

    pub fn window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn second_window(mut self, lo: f64, hi: f64) -> Self {
        self.second_window = Some((lo, hi));
        self
    }

    pub fn basis(mut self, basis: Vec<(f64, u32)>) -> Self {
        self.basis = Some(basis);
        self
    }

    pub fn romberg(mut self) -> Self {
        self.romberg = true;
        self
    }
}

/// Integer powers `0..=ceil(q)+3`, `q` itself, and `log` terms at `q`, `q+1`, `q+2`.
pub fn default_basis(q: f64) -> Vec<(f64, u32)> {
    let top = q.ceil() as i64 + 3;
    let mut b: Vec<(f64, u32)> = (0..=top).map(|z| (z as f64, 0)).collect();
    if (q - q.round()).abs() > 1e-12 {
        b.push((q, 0));
    }
    for n in 0..3 {
        let z = q + n as f64;
        if z <= top as f64 + 1e-12 {
            b.push((z, 1));
        }
    }
    b
}

/// A coefficient extracted across refinements.
#[derive(Clone, Debug, Serialize)]
pub struct Extracted {
    pub value: f64,
    pub uncertainty: f64,
    /// Raw coefficient at each refinement, coarse to fine.
    pub raw: Vec<f64>,
    pub extrapolants: Vec<f64>,
    pub observed_order: Option<f64>,
    /// Successive raw differences shrink.
    pub monotone: bool,
    pub second_window_value: f64,
    pub finest: FitResult,
}

struct Level {
    rs: Vec<f64>,
    values: Vec<f64>,
}

/// Restrict each field to the nodes of the coarsest one along the cone.
fn levels(fields: &[GridField], cone: Cone) -> Result<(Cone, f64, Vec<Level>)> {
    let coarse = fields[0].grid();
    let (used, r_ref, _) = cone_samples(&fields[0], cone);
    let mut out = Vec::with_capacity(fields.len());
    for f in fields {
        let g = f.grid();
        let fu = (g.nu() - 1) / (coarse.nu() - 1);
        let fv = (g.nv() - 1) / (coarse.nv() - 1);
        if fu == 0 || fu != fv || (coarse.nu() - 1) * fu + 1 != g.nu() || (coarse.nv() - 1) * fv + 1 != g.nv() {
            return Err(Error::Grid("refinement sequence is not nested".into()));
        }
        let restricted = f.coarsen_to(coarse, fu)?;
        let (_, _, pts) = cone_samples(&restricted, used);
        let (rs, values) = pts.into_iter().unzip();
        out.push(Level { rs, values });
    }
    Ok((used, r_ref, out))
}

fn coefficient_on(level: &Level, window: (f64, f64), basis: &[(f64, u32)], r_ref: f64, idx: usize) -> Result<(f64, f64, f64, f64, Vec<f64>, Vec<f64>, usize)> {
    let (rs, vals): (Vec<f64>, Vec<f64>) =
        level.rs.iter().zip(&level.values).filter(|(r, _)| **r >= window.0 && **r <= window.1).map(|(a, b)| (*a, *b)).unzip();
    let (c, s, rms, cond) = fit_points(&rs, &vals, basis, r_ref)?;
    Ok((c[idx], s[idx], rms, cond, c, s, rs.len()))
}

fn richardson(raw: &[f64], ratio: &[f64], order: f64) -> Vec<f64> {
    raw.windows(2)
        .zip(ratio)
        .map(|(w, rho)| w[1] + (w[1] - w[0]) / (rho.powf(order) - 1.0))
        .collect()
}

/// Pointwise extrapolation of the sampled data, matching the coefficient sequence.
fn combined_level(levels: &[Level], ratio: &[f64], order: f64, romberg: bool) -> Level {
    let n = levels[0].rs.len();
    let mut last = vec![0.0; n];
    for x in 0..n {
        let column: Vec<f64> = levels.iter().map(|l| l.values[x]).collect();
        let mut e = richardson(&column, ratio, order);
        if romberg {
            e = richardson(&e, &ratio[1..], order + 2.0);
        }
        last[x] = *e.last().expect("two levels give one extrapolant");
    }
    Level { rs: levels[0].rs.clone(), values: last }
}

/// Richardson-extrapolated coefficient of `r^-z log^k(r/r0)` along a fixed cone.
///
/// The fields must come from nested refinements of one grid, coarse to fine.
/// The uncertainty is the largest of the spread of the last two extrapolants,
/// the shift between the two windows and the least-squares standard error of a fit
/// to the extrapolated samples.
pub fn extract_coefficient(fields: &[GridField], z: f64, k: u32, opts: &ExtractOptions) -> Result<Extracted> {
    if fields.len() < 2 {
        return Err(Error::Resolution("need at least two refinements".into()));
    }
    let basis = opts.basis.clone().unwrap_or_else(|| default_basis(z));
    let idx = basis
        .iter()
        .position(|&(a, b)| (a - z).abs() < 1e-12 && b == k)
        .ok_or_else(|| Error::Spec(format!("({z}, {k}) is not in the fit basis")))?;
    let window = opts.window.unwrap_or_else(|| default_window(&fields[0], opts.cone));
    let second = opts.second_window.unwrap_or((window.0 / 3.0, window.1 / 3.0));
    let (used, r_ref, levels) = levels(fields, opts.cone)?;

    let ratio: Vec<f64> = fields
        .windows(2)
        .map(|w| (w[1].grid().nv() - 1) as f64 / (w[0].grid().nv() - 1) as f64)
        .collect();
    let mut raw = Vec::new();
    let mut raw2 = Vec::new();
    let mut finest = None;
    for lvl in &levels {
        let (c, _, rms, cond, all, std, n) = coefficient_on(lvl, window, &basis, r_ref, idx)?;
        raw.push(c);
        raw2.push(coefficient_on(lvl, second, &basis, r_ref, idx)?.0);
        finest = Some((rms, cond, all, std, n));
    }
    let (rms, cond, all, std, n) = finest.expect("at least two levels");
    let mut ext = richardson(&raw, &ratio, opts.order);
    let mut ext2 = richardson(&raw2, &ratio, opts.order);
    if opts.romberg {
        if ext.len() < 3 {
            return Err(Error::Resolution("a second Richardson pass needs four refinements".into()));
        }
        ext = richardson(&ext, &ratio[1..], opts.order + 2.0);
        ext2 = richardson(&ext2, &ratio[1..], opts.order + 2.0);
    }
    let value = *ext.last().expect("two levels give one extrapolant");
    let combined_std = coefficient_on(&combined_level(&levels, &ratio, opts.order, opts.romberg), window, &basis, r_ref, idx)?.1;
    let second_window_value = *ext2.last().expect("two levels give one extrapolant");
    let spread = if ext.len() >= 2 {
        (ext[ext.len() - 1] - ext[ext.len() - 2]).abs()
    } else {
        (raw[1] - raw[0]).abs() / (ratio[0].powf(opts.order) - 1.0)
    };
    let observed_order = (raw.len() >= 3).then(|| {
        let n = raw.len();
        ((raw[n - 2] - raw[n - 3]).abs() / (raw[n - 1] - raw[n - 2]).abs()).ln() / ratio[n - 2].ln()
    });
    let diffs: Vec<f64> = raw.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let monotone = diffs.windows(2).all(|d| d[1] <= d[0]);
    let uncertainty = spread.max((second_window_value - value).abs()).max(combined_std);
    Ok(Extracted {
        value,
        uncertainty,
        raw,
        extrapolants: ext,
        observed_order: observed_order.filter(|x| x.is_finite()),
        monotone,
        second_window_value,
        finest: FitResult {
            basis,
            coefficients: all,
            std_errors: std,
            residual_rms: rms,
            condition_number: cond,
            richardson_order: observed_order.filter(|x| x.is_finite()),
            r_ref,
            cone: used,
            window,
            n_points: n,
            trusted: cond <= CONDITION_LIMIT,
        },
    })
}

/// `(value, uncertainty)` of the `r^-q log r` coefficient along `opts.cone`.
pub fn log_coefficient(fields: &[GridField], q: f64, opts: &ExtractOptions) -> Result<(f64, f64)> {
    let e = extract_coefficient(fields, q, 1, opts)?;
    Ok((e.value, e.uncertainty))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogVerdict {
    /// `|value| <= 3 uncertainty`.
    Absent,
    /// `|value| > 5 uncertainty`, the log term reduces the residual tenfold
    /// and the two windows agree.
    Present,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogDetection {
    pub coefficient: Extracted,
    /// Residual without the log term over residual with it, on the finest level.
    pub residual_drop: f64,
    pub windows_agree: bool,
    pub verdict: LogVerdict,
}

/// Fit with and without the `(q, 1)` element and classify the log term.
pub fn detect_log(fields: &[GridField], q: f64, opts: &ExtractOptions) -> Result<LogDetection> {
    let with = extract_coefficient(fields, q, 1, opts)?;
    let reduced: Vec<(f64, u32)> =
        with.finest.basis.iter().copied().filter(|&(z, k)| !((z - q).abs() < 1e-12 && k == 1)).collect();
    let (_, r_ref, levels) = levels(&fields[fields.len() - 1..], opts.cone)?;
    let finest = levels.last().expect("one level");
    let (rs, vals): (Vec<f64>, Vec<f64>) = finest
        .rs
        .iter()
        .zip(&finest.values)
        .filter(|(r, _)| **r >= with.finest.window.0 && **r <= with.finest.window.1)
        .map(|(a, b)| (*a, *b))
        .unzip();
    let without = fit_points(&rs, &vals, &reduced, r_ref)?.2;
    let full = fit_points(&rs, &vals, &with.finest.basis, r_ref)?.2;
    let residual_drop = if full > 0.0 { without / full } else { f64::INFINITY };
    let windows_agree = (with.second_window_value - with.value).abs() <= with.uncertainty;
    let (v, u) = (with.value.abs(), with.uncertainty);
    let verdict = if v <= 3.0 * u {
        LogVerdict::Absent
    } else if v > 5.0 * u && residual_drop >= 10.0 && windows_agree {
        LogVerdict::Present
    } else {
        LogVerdict::Inconclusive
    };
    Ok(LogDetection { coefficient: with, residual_drop, windows_agree, verdict })
}
