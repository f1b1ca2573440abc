use crate::error::{Error, Result};
use crate::specialfn::gauss_2f1_terminating_exact;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

/// Largest `p` and `ell` accepted by [`ratio_table`].
pub const TABLE_BOUND: u32 = 20;

/// Both sides of the order-`p` no-incoming-radiation relation `lhs P_l psi0 = rhs P_l psi1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiplierPair {
    pub p: f64,
    pub ell: u32,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs / lhs`, `+inf` when `lhs` vanishes and NaN when both do.
    pub ratio: f64,
}

impl MultiplierPair {
    /// `lhs psi0 - rhs psi1`.
    pub fn residual(&self, psi0: f64, psi1: f64) -> f64 {
        self.lhs * psi0 - self.rhs * psi1
    }
}

fn to_pair(p: f64, ell: u32, lhs: &BigRational, rhs: &BigRational) -> MultiplierPair {
    let ratio = match (lhs.is_zero(), rhs.is_zero()) {
        (true, true) => f64::NAN,
        (true, false) => f64::INFINITY,
        (false, true) => 0.0,
        (false, false) => (rhs / lhs).to_f64().unwrap_or(f64::NAN),
    };
    MultiplierPair { p, ell, lhs: lhs.to_f64().unwrap_or(f64::NAN), rhs: rhs.to_f64().unwrap_or(f64::NAN), ratio }
}

/// `(p F(-l, 1+l; 1+p; 1/2) - l(1+l)/(k(p+1)) F(1-l, 2+l; 2+p; 1/2), F(-l, 1+l; 1+p; 1/2))`.
fn sides(p: &BigRational, ell: u32, k: i64) -> Result<(BigRational, BigRational)> {
    let li = ell as i64;
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    let rhs = gauss_2f1_terminating_exact(ell, &q(1 + li), &(p + &one), &half)?;
    let mut lhs = p * &rhs;
    if ell > 0 {
        let f2 = gauss_2f1_terminating_exact(ell - 1, &q(2 + li), &(p + q(2)), &half)?;
        lhs -= q(li * (1 + li)) / (q(k) * (p + &one)) * f2;
    }
    Ok((lhs, rhs))
}

fn float_sides(p: f64, ell: u32, k: i64) -> Result<MultiplierPair> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("multiplier needs p > -1, got {p}")));
    }
    let pq = BigRational::from_float(p).expect("finite");
    let (lhs, rhs) = sides(&pq, ell, k)?;
    Ok(to_pair(p, ell, &lhs, &rhs))
}

/// `lhs = p F(-l, 1+l; 1+p; 1/2) - l(1+l)/(4(p+1)) F(1-l, 2+l; 2+p; 1/2)` and `rhs = F(-l, 1+l; 1+p; 1/2)`.
/// Both sums are evaluated exactly at the binary value of `p` and then rounded.
pub fn multiplier(p: f64, ell: u32) -> Result<MultiplierPair> {
    float_sides(p, ell, 4)
}

/// The relation satisfied by Cauchy data `(r^-p psi0, r^-p-1 psi1)` of the exact no-incoming mode
/// `|u|^-p F(-l, 1+l; 1+p; 1 + u/r)` on `t = 0`: `lhs = p F + F'/2` with `F, F'` at `1/2`,
/// which is [`multiplier`] with `l(1+l)/(2(p+1))` in place of `l(1+l)/(4(p+1))`.
pub fn multiplier_from_solution(p: f64, ell: u32) -> Result<MultiplierPair> {
    float_sides(p, ell, 2)
}

/// An exact ratio, with `Infinite` for a vanishing denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactRatio {
    Finite(BigRational),
    Infinite,
}

impl ExactRatio {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactRatio::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
            ExactRatio::Infinite => f64::INFINITY,
        }
    }

    /// Parses `inf`, `a` or `a/b`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(ExactRatio::Infinite);
        }
        let bad = || Error::Spec(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
        };
        if d.is_zero() {
            return Err(bad());
        }
        Ok(ExactRatio::Finite(BigRational::new(n, d)))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactRatio::Infinite => write!(f, "inf"),
            ExactRatio::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            ExactRatio::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPair {
    pub p: u32,
    pub ell: u32,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub ratio: ExactRatio,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// [`multiplier`] at integer `p`, summed over the rationals.
pub fn multiplier_exact(p: u32, ell: u32) -> Result<ExactPair> {
    let (lhs, rhs) = sides(&q(p as i64), ell, 4)?;
    let ratio = if lhs.is_zero() { ExactRatio::Infinite } else { ExactRatio::Finite(&rhs / &lhs) };
    Ok(ExactPair { p, ell, lhs, rhs, ratio })
}

/// `rhs / lhs` for `p in 0..=p_max`, `ell in 0..=ell_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioTable {
    pub p_max: u32,
    pub ell_max: u32,
    /// Row-major by `p`.
    pub entries: Vec<Vec<ExactRatio>>,
}

impl RatioTable {
    pub fn get(&self, p: u32, ell: u32) -> Option<&ExactRatio> {
        self.entries.get(p as usize)?.get(ell as usize)
    }

    /// `p,ell,ratio,ratio_float` with exact fractions in the third column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,ell,ratio,ratio_float\n");
        for (p, row) in self.entries.iter().enumerate() {
            for (ell, r) in row.iter().enumerate() {
                out.push_str(&format!("{p},{ell},{r},{:e}\n", r.to_f64()));
            }
        }
        out
    }

    /// One line per `p`, fractions separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|r| r.to_string()).collect();
            out.push_str(&format!("p={p}: {}\n", cells.join(" ")));
        }
        out
    }
}

pub fn ratio_table(p_max: u32, ell_max: u32) -> Result<RatioTable> {
    if p_max > TABLE_BOUND || ell_max > TABLE_BOUND {
        return Err(Error::Domain(format!("ratio table bounds must be <= {TABLE_BOUND}")));
    }
    let entries = (0..=p_max)
        .map(|p| (0..=ell_max).map(|ell| multiplier_exact(p, ell).map(|e| e.ratio)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioTable { p_max, ell_max, entries })
}

/// Conjectured pattern: `rhs(p, p+2n+1) = 0` and `rhs/lhs (p, p+2n) = 2/p`.
#[derive(Clone, Debug, Serialize)]
pub struct GuessRow {
    pub p: u32,
    pub n: u32,
    pub rhs_odd: f64,
    pub ratio_even: f64,
    /// Both identities hold to the float tolerance.
    pub pass: bool,
    /// Both identities hold exactly over the rationals.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GuessReport {
    pub label: &'static str,
    pub tolerance: f64,
    pub rows: Vec<GuessRow>,
}

impl GuessReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub const GUESS_TOLERANCE: f64 = 1e-10;

pub fn check_guess(p: u32, n_max: u32) -> Result<GuessReport> {
    if p == 0 {
        return Err(Error::Domain("the pattern is stated for p >= 1".into()));
    }
    let target = 2.0 / p as f64;
    let exact_target = BigRational::new(2.into(), BigInt::from(p));
    let rows = (0..=n_max)
        .map(|n| {
            let odd = multiplier(p as f64, p + 2 * n + 1)?;
            let even = multiplier(p as f64, p + 2 * n)?;
            let pass = odd.rhs.abs() <= GUESS_TOLERANCE && (even.ratio - target).abs() <= GUESS_TOLERANCE;
            let odd_x = multiplier_exact(p, p + 2 * n + 1)?;
            let even_x = multiplier_exact(p, p + 2 * n)?;
            let exact = odd_x.rhs.is_zero() && even_x.ratio == ExactRatio::Finite(exact_target.clone());
            Ok(GuessRow { p, n, rhs_odd: odd.rhs, ratio_even: even.ratio, pass, exact })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GuessReport { label: "HYPOTHESIS", tolerance: GUESS_TOLERANCE, rows })
}

/// Whether the pattern holds exactly for `p` at every `ell` in `p..=ell_max`.
pub(crate) fn guess_holds_through(p: u32, ell_max: u32) -> Result<bool> {
    if p == 0 || ell_max < p {
        return Ok(true);
    }
    let n_max = (ell_max - p) / 2;
    Ok(check_guess(p, n_max)?.rows.iter().all(|r| r.exact && r.pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{gauss_2f1, gauss_2f1_deriv};

    fn psi_exact(p: f64, ell: u32, u: f64, v: f64) -> f64 {
        let r = v - u;
        let l = ell as f64;
        (-u).powf(-p) * gauss_2f1(-l, 1.0 + l, 1.0 + p, 1.0 + u / r).unwrap()
    }

    /// Data of the exact solution on `t = 0` at radius `r`, by central differences in `t`.
    fn cauchy_data(p: f64, ell: u32, r: f64) -> (f64, f64) {
        let at = |t: f64| psi_exact(p, ell, (t - r) / 2.0, (t + r) / 2.0);
        let h = 1e-4 * r;
        let dt = (at(h) - at(-h)) / (2.0 * h);
        (r.powf(p) * at(0.0), r.powf(p + 1.0) * dt)
    }

    #[test]
    fn agrees_with_float_hypergeometric() {
        for p in [0.0, 1.0, 2.0, 0.37, -0.6, 4.25] {
            for ell in 0..7u32 {
                let m = multiplier(p, ell).unwrap();
                let l = ell as f64;
                let f = gauss_2f1(-l, 1.0 + l, 1.0 + p, 0.5).unwrap();
                let d = gauss_2f1_deriv(-l, 1.0 + l, 1.0 + p, 0.5).unwrap();
                assert!((m.rhs - f).abs() < 1e-12, "p={p} ell={ell}");
                assert!((m.lhs - (p * f + d / 4.0)).abs() < 1e-11, "p={p} ell={ell}");
            }
        }
        for p in 0..6 {
            for ell in 0..11 {
                let (f, e) = (multiplier(p as f64, ell).unwrap(), multiplier_exact(p, ell).unwrap());
                assert_eq!(f.ratio, e.ratio.to_f64());
            }
        }
    }

    #[test]
    fn spot_values() {
        assert_eq!(multiplier(1.0, 0).unwrap().ratio, 1.0);
        assert!((multiplier(1.0, 1).unwrap().ratio - 2.0).abs() < 1e-14);
        assert_eq!(multiplier_exact(5, 4).unwrap().ratio, ExactRatio::parse("256/955").unwrap());
        assert_eq!(multiplier_exact(3, 2).unwrap().ratio.to_string(), "16/39");
        assert_eq!(multiplier(0.0, 2).unwrap().ratio, f64::INFINITY);
        assert_eq!(multiplier(0.0, 3).unwrap().ratio, 0.0);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["inf", "0", "2", "-7/3", "256/955"] {
            assert_eq!(ExactRatio::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(ExactRatio::parse("4/2").unwrap().to_string(), "2");
        assert!(ExactRatio::parse("1/0").is_err());
    }

    #[test]
    fn table_bounds() {
        assert!(ratio_table(21, 3).is_err());
        let t = ratio_table(20, 20).unwrap();
        assert_eq!(t.entries.len(), 21);
        assert!(t.to_text().starts_with("p=0: inf 0 inf"));
    }

    #[test]
    fn guess_spot_checks() {
        let r = check_guess(1, 0).unwrap();
        assert!(r.rows[0].rhs_odd.abs() < 1e-14 && (r.rows[0].ratio_even - 2.0).abs() < 1e-14);
        assert!((check_guess(2, 1).unwrap().rows[1].ratio_even - 1.0).abs() < 1e-12);
        assert!(check_guess(4, 2).unwrap().rows[2].rhs_odd.abs() < 1e-10);
        assert!(check_guess(0, 1).is_err());
    }

    #[test]
    fn solution_relation_annihilates_exact_solutions() {
        for p in 0..=3 {
            for ell in 0..=3 {
                let m = multiplier_from_solution(p as f64, ell).unwrap();
                for r in [3.0, 40.0] {
                    let (a, b) = cauchy_data(p as f64, ell, r);
                    let res = m.residual(a, b);
                    assert!(res.abs() <= 1e-6 * (a.abs() + b.abs()).max(1.0), "p={p} ell={ell} residual {res}");
                }
            }
        }
    }

    #[test]
    fn printed_relation_misses_the_static_dipole() {
        // psi = 1/r solves the l=1 mode equation and has no incoming radiation,
        // with Cauchy data (psi0, psi1) = (1, 0) at p = 1.
        let (a, b) = cauchy_data(1.0, 1, 5.0);
        assert!((a - 1.0).abs() < 1e-12 && b.abs() < 1e-8);
        assert!((multiplier(1.0, 1).unwrap().residual(a, b) - 0.25).abs() < 1e-8);
        assert!(multiplier_from_solution(1.0, 1).unwrap().residual(a, b).abs() < 1e-8);
        for ell in 0..6 {
            let (x, y) = (multiplier(0.0, ell).unwrap(), multiplier_from_solution(0.0, ell).unwrap());
            assert_eq!(x.ratio.is_infinite(), y.ratio.is_infinite());
            assert_eq!(x.ratio == 0.0, y.ratio == 0.0);
        }
    }
}
