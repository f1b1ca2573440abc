//! The registered experiments. Each turns a validated config into report rows.

use crate::commands::PRINTED_TABLE;
use crate::config::{Bump, ExperimentConfig, Experiment, GridDescriptor, Mode, Tolerances};
use crate::report::{num, Provenance, Report, Row};
use nullscri_core::asymptotics::{
    antipodal_check, extract_coefficient, moment_condition_experiment, CompactProfile, Cone, DecayProbe, ExtractOptions, Extracted,
};
use nullscri_core::evolve::{
    conservation_transport, iterates, semilinear_leading_coefficient, solve_lmode, EquationSpec, Family, GridField, ScatteringData,
    Semilinear, SemilinearKind, SolveOptions,
};
use nullscri_core::geometry::NullGrid;
use nullscri_core::indexsets::{expansion_apply_euler, ode_integrate_expansion, Expansion, Power, Term};
use nullscri_core::noinc::{bracket_by_quadrature, check_guess, ratio_table, schwarzschild_bracket, ExactRatio};
use nullscri_core::specialfn::{connection_by_continuation, connection_coeffs, effective_mode, series_tau, series_tau_lambda};
use nullscri_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// Why a run stopped before producing a report.
#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Config(String),
    /// A numerical guard tripped: non-finite values, blow-up, failed convergence or an ill-posed fit.
    Numerical(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical guard: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite { .. }
            | Error::BlowUp { .. }
            | Error::Tortoise { .. }
            | Error::NotConverged(_)
            | Error::RankDeficient(_)
            | Error::Resolution(_)
            | Error::Indicial { .. } => RunError::Numerical(e.to_string()),
            _ => RunError::Config(e.to_string()),
        }
    }
}

type Rows = Result<Vec<Row>, RunError>;

/// Effective tolerances after overrides and `--tol-scale`.
#[derive(Clone, Copy, Debug)]
struct Tol {
    sigmas: f64,
    rel: f64,
    abs: f64,
}

impl Tol {
    fn new(over: &Tolerances, scale: f64, sigmas: f64, rel: f64, abs: f64) -> Self {
        Tol {
            sigmas: over.sigmas.unwrap_or(sigmas) * scale,
            rel: over.rel.unwrap_or(rel) * scale,
            abs: over.abs.unwrap_or(abs) * scale,
        }
    }

    fn matches(&self, value: f64, target: f64, unc: f64) -> bool {
        (value - target).abs() <= (self.rel * target.abs()).max(self.sigmas * unc).max(self.abs)
    }

    fn vanishes(&self, value: f64, unc: f64) -> bool {
        value.abs() <= (self.sigmas * unc).max(self.abs)
    }
}

/// Runs one experiment. `tol_scale` multiplies every matching tolerance.
pub fn run_experiment(cfg: &ExperimentConfig, tol_scale: f64) -> Result<Report, RunError> {
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(RunError::Config(format!("tol-scale must be positive, got {tol_scale}")));
    }
    let t = |sigmas, rel, abs| Tol::new(&cfg.tolerances, tol_scale, sigmas, rel, abs);
    let grid = cfg.grid.as_ref();
    let factors = cfg.factors();
    let rows = match &cfg.experiment {
        Experiment::RatioTable { p_max, ell_max } => ratio_rows(*p_max, *ell_max),
        Experiment::SchwarzschildLog { modes, window, second_window, u_min_alt } => {
            let g = grid.expect("validated");
            let w = Windows { first: *window, second: *second_window, romberg: false };
            schwarzschild_rows(g, cfg.mass(), modes, &w, *u_min_alt, &factors, t(3.0, 0.1, 0.0))
        }
        Experiment::PotentialCancellation { m, vanishing, nonvanishing, nonblocking, window, second_window, u_min_alt, nonzero_sigmas } => {
            let g = grid.expect("validated");
            let w = Windows { first: *window, second: *second_window, romberg: false };
            potential_rows(g, *m, vanishing, nonvanishing, nonblocking, &w, *u_min_alt, *nonzero_sigmas, &factors, t(3.0, 0.0, 0.0))
        }
        Experiment::MinkowskiPeeling { ells, ps, window, second_window, u_min_alt, romberg } => {
            let g = grid.expect("validated");
            let w = Windows { first: *window, second: *second_window, romberg: *romberg };
            peeling_rows(g, ells, ps, &w, *u_min_alt, &factors, t(3.0, 0.0, 0.0))
        }
        Experiment::Semilinear {
            ell_in,
            vanishing,
            nonvanishing,
            window,
            second_window,
            u_min_alt,
            nonzero_sigmas,
            expression_targets,
            expression_nonzero,
        } => {
            let g = grid.expect("validated");
            let w = Windows { first: *window, second: *second_window, romberg: false };
            let mut rows = semilinear_rows(g, *ell_in, vanishing, nonvanishing, &w, *u_min_alt, *nonzero_sigmas, &factors, t(3.0, 0.0, 0.0))?;
            rows.extend(expression_rows(expression_targets, expression_nonzero, t(0.0, 0.0, 1e-12))?);
            Ok(rows)
        }
        Experiment::Antipodal { ells, profile } => antipodal_rows(grid.expect("validated"), ells, profile, t(0.0, 0.01, 0.0)),
        Experiment::Connection { samples, seed, p_range, l_range, natural_l, natural_l_ps } => {
            connection_rows(*samples, *seed, *p_range, *l_range, natural_l, natural_l_ps, t(0.0, 1e-6, 1e-6))
        }
        Experiment::PeelingClassification { peeling, failure, log_ps } => classification_rows(peeling, failure, log_ps),
        Experiment::SeriesAsymptotics { cases, k_range } => series_rows(cases, *k_range, t(0.0, 0.01, 0.0)),
        Experiment::OdeRoundTrip { samples, seed, max_terms } => round_trip_rows(*samples, *seed, *max_terms, t(0.0, 0.0, 1e-12)),
        Experiment::Conservation { ells, p, min_order, roundoff } => {
            conservation_rows(grid.expect("validated"), ells, *p, *min_order, *roundoff, &factors)
        }
        Experiment::SchwarzschildBracket { ps } => bracket_rows(ps, t(0.0, 0.0, 1e-6), t(0.0, 0.0, 1e-10)),
        Experiment::MomentDecay { ell, kill_through, profile, lambda, decades, min_gain } => {
            moment_rows(grid.expect("validated"), *ell, *kill_through, profile, *lambda, *decades, *min_gain)
        }
        Experiment::Guess { p_max, n_max } => guess_rows(*p_max, *n_max),
    }?;
    Ok(Report { name: cfg.name.clone(), case: cfg.experiment.case_name().to_string(), rows })
}

fn sign(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn ratio_rows(p_max: u32, ell_max: u32) -> Rows {
    let table = ratio_table(p_max, ell_max)?;
    let mut rows = Vec::new();
    for p in 0..=p_max {
        for ell in 0..=ell_max {
            let got = table.get(p, ell).expect("inside the table");
            let printed = PRINTED_TABLE.get(p as usize).and_then(|r| r.get(ell as usize));
            let (target, pass, prov) = match printed {
                Some(s) => (s.to_string(), ExactRatio::parse(s)? == *got, Provenance::PrintedTable),
                None => ("-".to_string(), true, Provenance::Identity),
            };
            rows.push(Row::new(format!("p={p},ell={ell}"), target, got.to_string(), pass, prov));
        }
    }
    Ok(rows)
}

/// Fit windows along the outgoing cone `u = u0`.
struct Windows {
    first: [f64; 2],
    second: [f64; 2],
    romberg: bool,
}

impl Windows {
    fn options(&self, u0: f64) -> ExtractOptions {
        let o = ExtractOptions::on(Cone::Outgoing(u0)).window(self.first[0], self.first[1]).second_window(self.second[0], self.second[1]);
        if self.romberg {
            o.romberg()
        } else {
            o
        }
    }
}

/// Value at the configured `u_min` with the shift to `u_min_alt` folded into the uncertainty.
struct TwoCut {
    main: Extracted,
    alt: Extracted,
}

impl TwoCut {
    fn value(&self) -> f64 {
        self.main.value
    }

    fn uncertainty(&self) -> f64 {
        self.main.uncertainty.max((self.main.value - self.alt.value).abs())
    }
}

fn two_cut(g: &GridDescriptor, u_min_alt: f64, factors: &[usize], z: f64, w: &Windows, field: impl Fn(&NullGrid) -> Result<GridField, Error> + Sync) -> Result<TwoCut, RunError> {
    let at = |base: NullGrid| -> Result<Extracted, RunError> {
        let fields = factors.par_iter().map(|&k| field(&base.refined(k))).collect::<Result<Vec<_>, Error>>()?;
        Ok(extract_coefficient(&fields, z, 1, &w.options(base.u0))?)
    };
    Ok(TwoCut { main: at(g.null_grid())?, alt: at(g.with_u_min(u_min_alt))? })
}

fn first_iterate(spec: &EquationSpec, p: f64, grid: &NullGrid) -> Result<GridField, Error> {
    let mut it = iterates(spec, &ScatteringData::power_law(p, 1.0), grid, 2, &SolveOptions::default())?;
    Ok(it.fields.swap_remove(1))
}

fn schwarzschild_rows(g: &GridDescriptor, m: f64, modes: &[Mode], w: &Windows, u_min_alt: f64, factors: &[usize], tol: Tol) -> Rows {
    modes
        .par_iter()
        .map(|md| {
            let (ell, p) = (md.ell, md.p);
            if p.fract() != 0.0 || p < 0.0 || p > ell as f64 {
                return Err(RunError::Config(format!("the closed form needs natural p <= ell, got ell = {ell}, p = {p}")));
            }
            let pn = p as u32;
            let target = sign(ell + pn) * (ell + pn + 1) as f64 * (ell - pn) as f64 / (p + 1.0);
            let spec = EquationSpec::new(ell, Family::Schwarzschild { m });
            let c = two_cut(g, u_min_alt, factors, p + 1.0, w, |grid| first_iterate(&spec, p, grid))?;
            let pass = tol.matches(c.value(), target, c.uncertainty());
            Ok(Row::new(format!("ell={ell},p={p}"), num(target), num(c.value()), pass, Provenance::PrintedFormula).with_uncertainty(c.uncertainty()))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn potential_rows(
    g: &GridDescriptor,
    m: f64,
    vanishing: &[Mode],
    nonvanishing: &[Mode],
    nonblocking: &[Mode],
    w: &Windows,
    u_min_alt: f64,
    nonzero_sigmas: f64,
    factors: &[usize],
    tol: Tol,
) -> Rows {
    let jobs: Vec<(Mode, bool)> = vanishing.iter().map(|m| (*m, true)).chain(nonvanishing.iter().map(|m| (*m, false))).collect();
    jobs.par_iter()
        .map(|&(md, zero)| {
            let spec = EquationSpec::new(md.ell, Family::CubicPotential { m });
            let c = two_cut(g, u_min_alt, factors, md.p + 1.0, w, |grid| first_iterate(&spec, md.p, grid))?;
            let (v, u) = (c.value(), c.uncertainty());
            let (target, pass) = if zero { ("0".to_string(), tol.vanishes(v, u)) } else { (format!("|c| > {nonzero_sigmas} unc"), v.abs() > nonzero_sigmas * u) };
            let row = Row::new(format!("ell={},p={}", md.ell, md.p), target, num(v), pass, Provenance::Claim).with_uncertainty(u);
            Ok(if nonblocking.contains(&md) { row.nonblocking() } else { row })
        })
        .collect()
}

fn peeling_rows(g: &GridDescriptor, ells: &[u32], ps: &[f64], w: &Windows, u_min_alt: f64, factors: &[usize], tol: Tol) -> Rows {
    let mut jobs = Vec::new();
    for &ell in ells {
        for &p in ps {
            for n in 0..=2 {
                jobs.push((ell, p, p + n as f64));
            }
        }
    }
    jobs.par_iter()
        .map(|&(ell, p, z)| {
            let spec = EquationSpec::new(ell, Family::Minkowski);
            let data = ScatteringData::power_law(p, 1.0);
            let c = two_cut(g, u_min_alt, factors, z, w, |grid| solve_lmode(&spec, &data, grid))?;
            let pass = tol.vanishes(c.value(), c.uncertainty());
            Ok(Row::new(format!("ell={ell},p={p},order={z}"), "0", num(c.value()), pass, Provenance::Claim).with_uncertainty(c.uncertainty()))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn semilinear_rows(
    g: &GridDescriptor,
    ell_in: u32,
    vanishing: &[f64],
    nonvanishing: &[f64],
    w: &Windows,
    u_min_alt: f64,
    nonzero_sigmas: f64,
    factors: &[usize],
    tol: Tol,
) -> Rows {
    let jobs: Vec<(f64, bool)> = vanishing.iter().map(|p| (*p, true)).chain(nonvanishing.iter().map(|p| (*p, false))).collect();
    let spec = EquationSpec::new(0, Family::Minkowski).with_semilinear(Semilinear { kind: SemilinearKind::AngularGradientSq, ell_in, ell_out: 0, strength: 1.0 });
    jobs.par_iter()
        .map(|&(p, zero)| {
            let c = two_cut(g, u_min_alt, factors, 2.0 * p + 1.0, w, |grid| first_iterate(&spec, p, grid))?;
            let (v, u) = (c.value(), c.uncertainty());
            let (target, pass) = if zero { ("0".to_string(), tol.vanishes(v, u)) } else { (format!("|c| > {nonzero_sigmas} unc"), v.abs() > nonzero_sigmas * u) };
            Ok(Row::new(format!("iterate,p={p},order={}", 2.0 * p + 1.0), target, num(v), pass, Provenance::Claim).with_uncertainty(u))
        })
        .collect()
}

fn expression_rows(targets: &[[f64; 2]], nonzero: &[f64], tol: Tol) -> Rows {
    let mut rows = Vec::new();
    for &[p, want] in targets {
        let v = semilinear_leading_coefficient(p)?;
        rows.push(Row::new(format!("expression,p={p}"), num(want), num(v), tol.matches(v, want, 0.0), Provenance::PrintedFormula));
    }
    for &p in nonzero {
        let row = match semilinear_leading_coefficient(p) {
            Ok(v) => Row::new(format!("expression,p={p}"), "nonzero", num(v), v.is_finite() && v.abs() > 1e-12, Provenance::Claim),
            Err(e) => Row::new(format!("expression,p={p}"), "nonzero", e.to_string(), false, Provenance::Claim),
        };
        rows.push(row);
    }
    Ok(rows)
}

fn profile(b: &Bump) -> CompactProfile {
    CompactProfile::bump(b.a, b.b, b.amp)
}

fn antipodal_rows(g: &GridDescriptor, ells: &[u32], bump: &Bump, tol: Tol) -> Rows {
    let h = profile(bump);
    let grid = g.null_grid();
    let reports = ells.par_iter().map(|&ell| antipodal_check(ell, &h, &grid)).collect::<Result<Vec<_>, Error>>()?;
    let mut rows = Vec::new();
    for (&ell, r) in ells.iter().zip(&reports) {
        let want = sign(ell);
        rows.push(Row::new(format!("ell={ell},ratio"), num(want), num(r.ratio), tol.matches(r.ratio, want, 0.0), Provenance::Claim));
        let plus = Row::new(format!("ell={ell},future_limit"), num(r.explicit_plus), num(r.limit_plus), tol.matches(r.limit_plus, r.explicit_plus, 0.0), Provenance::Oracle);
        let minus = Row::new(format!("ell={ell},past_limit"), num(r.limit_minus), num(r.grid_minus), tol.matches(r.grid_minus, r.limit_minus, 0.0), Provenance::Oracle);
        rows.extend([plus, minus]);
    }
    Ok(rows)
}

/// Draws `(p, l)` with `p` at least `0.05` from every integer.
fn connection_samples(count: usize, seed: u64, p_range: [f64; 2], l_range: [f64; 2]) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(p_range[0]..p_range[1]);
        let l = rng.gen_range(l_range[0]..l_range[1]);
        if (p - p.round()).abs() >= 0.05 {
            out.push((p, l));
        }
    }
    out
}

fn connection_rows(count: usize, seed: u64, p_range: [f64; 2], l_range: [f64; 2], natural_l: &[u32], natural_ps: &[f64], tol: Tol) -> Rows {
    if !(p_range[0] < p_range[1] && l_range[0] < l_range[1]) {
        return Err(RunError::Config("empty sampling range".into()));
    }
    let samples = connection_samples(count, seed, p_range, l_range);
    let mut rows = samples
        .par_iter()
        .map(|&(p, l)| {
            let (_, c2) = connection_coeffs(p, l)?;
            let (_, d2) = connection_by_continuation(p, l)?;
            let pass = (c2 - d2).abs() <= tol.abs.max(tol.rel * c2.abs());
            Ok(Row::new(format!("p={p:.6},l={l:.6}"), num(c2), num(d2), pass, Provenance::PrintedFormula).with_uncertainty((c2 - d2).abs()))
        })
        .collect::<Rows>()?;
    for &p in natural_ps {
        for &l in natural_l {
            let (_, c2) = connection_coeffs(p, l as f64)?;
            rows.push(Row::new(format!("p={p},l={l}"), "0", num(c2), c2 == 0.0, Provenance::Claim));
        }
    }
    Ok(rows)
}

fn classification_rows(peeling: &[crate::config::DimensionCase], failure: &[crate::config::DimensionCase], log_ps: &[u32]) -> Rows {
    let mut rows = Vec::new();
    for (cases, want) in [(peeling, true), (failure, false)] {
        for d in cases {
            let m = effective_mode(d.n, d.ell, d.c)?;
            let label = if want { "peeling" } else { "failure" };
            let got = if m.peeling { "peeling" } else { "failure" };
            rows.push(Row::new(format!("n={},ell={},c={}", d.n, d.ell, d.c), label, got, m.peeling == want, Provenance::Claim));
            if !want {
                for &p in log_ps {
                    let s = series_tau_lambda(p as f64, m.lambda, 4)?;
                    let c = s.log_companion.unwrap_or(0.0);
                    rows.push(Row::new(format!("n={},ell={},c={},c_log,p={p}", d.n, d.ell, d.c), "nonzero", num(c), c.abs() > 1e-12, Provenance::Claim));
                }
            }
        }
    }
    Ok(rows)
}

fn series_rows(cases: &[[f64; 2]], k_range: [usize; 2], tol: Tol) -> Rows {
    let [k_lo, k_hi] = k_range;
    if !(1 <= k_lo && k_lo < k_hi) {
        return Err(RunError::Config(format!("k range [{k_lo}, {k_hi}] is empty")));
    }
    let mut rows = Vec::new();
    for &[p, l] in cases {
        let s = series_tau(p, l, k_hi)?;
        let scaled: Vec<f64> = (k_lo..=k_hi).map(|k| s.coeffs[k] * (k as f64).powf(1.0 - p)).collect();
        let (lo, hi) = scaled.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let last = *scaled.last().expect("non-empty range");
        let spread = (hi - lo) / last.abs();
        let pass = spread.is_finite() && spread <= tol.rel;
        rows.push(Row::new(format!("p={p},l={l}"), format!("spread <= {}", num(tol.rel)), num(last), pass, Provenance::Claim).with_uncertainty(spread * last.abs()));
    }
    Ok(rows)
}

/// A rational power in `[-3, 6)` with denominator at most 4.
fn random_power(rng: &mut ChaCha8Rng) -> Power {
    let den = rng.gen_range(1..=4);
    Power::ratio(rng.gen_range(-3 * den..6 * den), den)
}

fn round_trip_rows(count: usize, seed: u64, max_terms: usize, tol: Tol) -> Rows {
    if max_terms == 0 {
        return Err(RunError::Config("max_terms must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let error_order = Power::int(6);
    let (mut worst, mut failures, mut log_gains) = (0.0f64, 0usize, 0usize);
    for _ in 0..count {
        let n = rng.gen_range(1..=max_terms);
        let terms: Vec<Term> = (0..n).map(|_| Term { z: random_power(&mut rng), k: rng.gen_range(0..=3), coeff: rng.gen_range(-1.0..1.0) }).collect();
        let g = Expansion::new(terms, error_order)?;
        let c = if rng.gen_bool(0.3) && !g.terms().is_empty() {
            log_gains += 1;
            g.terms()[rng.gen_range(0..g.terms().len())].z
        } else {
            random_power(&mut rng)
        };
        let big = ode_integrate_expansion(&g, c, rng.gen_range(-1.0..1.0))?;
        let back = expansion_apply_euler(&big, c);
        let scale = g.terms().iter().fold(1.0f64, |m, t| m.max(t.coeff.abs()));
        let d = back.max_abs_diff(&g) / scale;
        worst = worst.max(d);
        if !(d <= tol.abs) {
            failures += 1;
        }
    }
    let case = format!("samples={count},log_gaining={log_gains}");
    Ok(vec![Row::new(case, format!("max defect <= {}", num(tol.abs)), num(worst), failures == 0, Provenance::Identity)])
}

fn conservation_rows(g: &GridDescriptor, ells: &[u32], p: f64, min_order: f64, roundoff: f64, factors: &[usize]) -> Rows {
    let base = g.null_grid();
    ells.par_iter()
        .map(|&ell| {
            let spec = EquationSpec::new(ell, Family::Minkowski);
            let data = ScatteringData::power_law(p, 1.0);
            let res = factors
                .iter()
                .map(|&k| Ok(conservation_transport(&solve_lmode(&spec, &data, &base.refined(k))?, ell, None)?.1))
                .collect::<Result<Vec<f64>, Error>>()?;
            let orders: Vec<f64> = res.windows(2).zip(factors.windows(2)).map(|(r, f)| (r[0] / r[1]).ln() / (f[1] as f64 / f[0] as f64).ln()).collect();
            let exact = res.iter().all(|r| *r <= roundoff);
            let min = orders.iter().copied().fold(f64::INFINITY, f64::min);
            let (value, pass) = if exact { (format!("residual {} (round-off)", num(res.iter().copied().fold(0.0, f64::max))), true) } else { (num(min), min >= min_order) };
            Ok(Row::new(format!("ell={ell},p={p}"), format!("order >= {min_order}"), value, pass, Provenance::Claim))
        })
        .collect()
}

fn bracket_rows(ps: &[f64], quad: Tol, closed: Tol) -> Rows {
    let mut rows = Vec::new();
    for &p in ps {
        let (b, q) = (schwarzschild_bracket(p)?, bracket_by_quadrature(p)?);
        rows.push(Row::new(format!("p={p},quadrature"), num(q), num(b), quad.matches(b, q, 0.0), Provenance::Oracle).with_uncertainty((b - q).abs()));
    }
    let want = 8.0 * std::f64::consts::LN_2 - 5.0;
    let b = schwarzschild_bracket(1.0)?;
    rows.push(Row::new("p=1,closed_form", num(want), num(b), closed.matches(b, want, 0.0), Provenance::PrintedValue));
    Ok(rows)
}

fn moment_rows(g: &GridDescriptor, ell: u32, kill_through: u32, bump: &Bump, lambda: f64, decades: f64, min_gain: f64) -> Rows {
    let probe = DecayProbe { lambda, cone: None, decades };
    let rows = moment_condition_experiment(&profile(bump), kill_through, ell, &g.null_grid(), &probe)?;
    let base = rows[0].rate;
    let killed = rows.iter().find(|r| r.killed_through == Some(kill_through)).expect("row for every killed order").rate;
    let gain = killed - base;
    let case = format!("ell={ell},killed_through={kill_through},rate {} -> {}", num(base), num(killed));
    Ok(vec![Row::new(case, format!("gain >= {min_gain}"), num(gain), gain >= min_gain, Provenance::Claim)])
}

fn guess_rows(p_max: u32, n_max: u32) -> Rows {
    let mut rows = Vec::new();
    for p in 1..=p_max {
        for r in check_guess(p, n_max)?.rows {
            let value = format!("rhs_odd={} ratio_even={}", num(r.rhs_odd), num(r.ratio_even));
            rows.push(Row::new(format!("p={p},n={}", r.n), format!("rhs_odd=0 ratio_even={}", num(2.0 / p as f64)), value, r.pass, Provenance::Hypothesis));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_avoid_integers_and_repeat() {
        let a = connection_samples(50, 7, [-0.9, 2.9], [0.0, 3.0]);
        assert_eq!(a, connection_samples(50, 7, [-0.9, 2.9], [0.0, 3.0]));
        assert!(a.iter().all(|(p, _)| (p - p.round()).abs() >= 0.05));
    }

    #[test]
    fn error_classes() {
        assert_eq!(RunError::from(Error::NonFinite { i: 1, j: 2 }).exit_code(), 3);
        assert_eq!(RunError::from(Error::Domain("x".into())).exit_code(), 2);
    }

    #[test]
    fn tolerance_scaling() {
        let t = Tol::new(&Tolerances::default(), 2.0, 3.0, 0.1, 0.0);
        assert!(t.matches(-2.3, -2.0, 0.0));
        assert!(!t.matches(-2.5, -2.0, 0.0));
        assert!(t.vanishes(5.9e-3, 1e-3));
    }
}
