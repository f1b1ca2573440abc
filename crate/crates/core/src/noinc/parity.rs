use super::multiplier::{guess_holds_through, multiplier};
use crate::error::Result;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Spherical-harmonic coefficients keyed by `(ell, m)`.
pub type ModeCoefficients = BTreeMap<(u32, i32), f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `psi0` has the wrong parity in this slot.
    Psi0Parity,
    /// `psi1` has the wrong parity in this slot (only at `p = 0`).
    Psi1Parity,
    /// `psi0 - (2/p) psi1` does not vanish in this slot.
    Combination,
    /// `lhs psi0 - rhs psi1` does not vanish in this slot.
    Multiplier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Parity,
    Multiplier,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub ell: u32,
    pub m: i32,
    pub rule: Rule,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityVerdict {
    pub p: u32,
    pub pass: bool,
    pub method: Method,
    /// Failing slots with `ell >= p`.
    pub violations: Vec<Violation>,
    /// Whether the parity rule and the per-mode multiplier flag the same slots.
    pub consistent: bool,
    /// Slots with `ell < p` where the multiplier relation fails; they do not affect `pass`.
    pub low_modes: Vec<Violation>,
}

fn tolerance(a: &ModeCoefficients, b: &ModeCoefficients) -> f64 {
    let scale = a.values().chain(b.values()).fold(1.0f64, |m, x| m.max(x.abs()));
    1e-10 * scale
}

fn multiplier_violations(p: u32, slots: &BTreeSet<(u32, i32)>, psi0: &ModeCoefficients, psi1: &ModeCoefficients, tol: f64) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for &(ell, m) in slots {
        let pair = multiplier(p as f64, ell)?;
        let (a, b) = (psi0.get(&(ell, m)).copied().unwrap_or(0.0), psi1.get(&(ell, m)).copied().unwrap_or(0.0));
        let defect = pair.residual(a, b);
        if defect.abs() > tol * (pair.lhs.abs() + pair.rhs.abs()).max(1.0) {
            out.push(Violation { ell, m, rule: Rule::Multiplier, defect });
        }
    }
    Ok(out)
}

fn parity_violations(p: u32, slots: &BTreeSet<(u32, i32)>, psi0: &ModeCoefficients, psi1: &ModeCoefficients, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for &(ell, m) in slots {
        let (a, b) = (psi0.get(&(ell, m)).copied().unwrap_or(0.0), psi1.get(&(ell, m)).copied().unwrap_or(0.0));
        let same = ell % 2 == p % 2;
        let hit = if p == 0 {
            if same { (b.abs() > tol).then_some((Rule::Psi1Parity, b)) } else { (a.abs() > tol).then_some((Rule::Psi0Parity, a)) }
        } else if same {
            let c = a - 2.0 / p as f64 * b;
            (c.abs() > tol).then_some((Rule::Combination, c))
        } else {
            (a.abs() > tol).then_some((Rule::Psi0Parity, a))
        };
        if let Some((rule, defect)) = hit {
            out.push(Violation { ell, m, rule, defect });
        }
    }
    out
}

fn slots_of(v: &[Violation]) -> BTreeSet<(u32, i32)> {
    v.iter().map(|x| (x.ell, x.m)).collect()
}

/// Checks the `ell >= p` no-log condition on order-`p` data.
///
/// The parity form is used when the conjectured multiplier pattern holds through the largest
/// `ell` present; otherwise each mode is tested against its multiplier directly.
pub fn parity_classify(p: u32, psi0: &ModeCoefficients, psi1: &ModeCoefficients) -> Result<ParityVerdict> {
    let tol = tolerance(psi0, psi1);
    let all: BTreeSet<(u32, i32)> = psi0.keys().chain(psi1.keys()).copied().collect();
    let (high, low): (BTreeSet<(u32, i32)>, BTreeSet<(u32, i32)>) = all.iter().partition(|(ell, _)| *ell >= p);
    let ell_max = high.iter().map(|s| s.0).max().unwrap_or(p);
    let by_multiplier = multiplier_violations(p, &high, psi0, psi1, tol)?;
    let by_parity = parity_violations(p, &high, psi0, psi1, tol);
    let consistent = slots_of(&by_multiplier) == slots_of(&by_parity);
    let (method, violations) = if guess_holds_through(p, ell_max)? { (Method::Parity, by_parity) } else { (Method::Multiplier, by_multiplier) };
    let low_modes = multiplier_violations(p, &low, psi0, psi1, tol)?;
    Ok(ParityVerdict { p, pass: violations.is_empty(), method, violations, consistent, low_modes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modes(items: &[((u32, i32), f64)]) -> ModeCoefficients {
        items.iter().copied().collect()
    }

    #[test]
    fn printed_examples() {
        let v = parity_classify(0, &modes(&[((2, 0), 1.0)]), &modes(&[((3, 1), 0.7)])).unwrap();
        assert!(v.pass && v.consistent && v.method == Method::Parity);
        let v = parity_classify(0, &modes(&[((1, -1), 1.0)]), &ModeCoefficients::new()).unwrap();
        assert!(!v.pass);
        assert_eq!((v.violations[0].ell, v.violations[0].rule), (1, Rule::Psi0Parity));
        assert!(parity_classify(3, &ModeCoefficients::new(), &ModeCoefficients::new()).unwrap().pass);
    }

    #[test]
    fn combination_rule() {
        // p = 2: even slots need psi1 = psi0, odd slots need psi0 = 0.
        let ok = parity_classify(2, &modes(&[((2, 0), 1.5), ((4, 3), -2.0)]), &modes(&[((2, 0), 1.5), ((4, 3), -2.0), ((3, 1), 9.0)])).unwrap();
        assert!(ok.pass && ok.consistent);
        let bad = parity_classify(2, &modes(&[((2, 0), 1.0), ((3, 0), 1.0)]), &modes(&[((2, 0), 0.0)])).unwrap();
        let rules: Vec<Rule> = bad.violations.iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::Combination, Rule::Psi0Parity]);
        assert!(bad.consistent);
    }

    #[test]
    fn low_modes_are_reported_separately() {
        // (p, ell) = (2, 0): rhs/lhs = 1/2, so psi1 = 2 psi0 is required there.
        let v = parity_classify(2, &modes(&[((0, 0), 1.0)]), &modes(&[((0, 0), 1.0)])).unwrap();
        assert!(v.pass);
        assert_eq!(v.low_modes.len(), 1);
        let w = parity_classify(2, &modes(&[((0, 0), 1.0)]), &modes(&[((0, 0), 2.0)])).unwrap();
        assert!(w.low_modes.is_empty());
    }
}
