use super::power::Power;
use super::set::{IndexSet, Pair};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const PRUNE_REL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub z: Power,
    pub k: u32,
    pub coeff: f64,
}

/// A finite sum of `coeff * x^z log^k x`, valid modulo `o(x^error_order)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    terms: Vec<Term>,
    error_order: Power,
}

impl Expansion {
    /// Merges repeated `(z, k)` and prunes coefficients below `1e-14` of the largest.
    pub fn new(terms: Vec<Term>, error_order: impl Into<Power>) -> Result<Self> {
        let error_order = error_order.into();
        let mut map: BTreeMap<(Power, u32), f64> = BTreeMap::new();
        for t in terms {
            if !t.coeff.is_finite() {
                return Err(Error::IndexSet(format!("non-finite coefficient at ({}, {})", t.z, t.k)));
            }
            if t.z >= error_order {
                return Err(Error::IndexSet(format!(
                    "term power {} not below error order {}",
                    t.z, error_order
                )));
            }
            *map.entry((t.z, t.k)).or_insert(0.0) += t.coeff;
        }
        let scale = map.values().fold(0.0_f64, |m, c| m.max(c.abs()));
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.abs() > PRUNE_REL * scale)
            .map(|((z, k), coeff)| Term { z, k, coeff })
            .collect();
        Ok(Expansion { terms, error_order })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn error_order(&self) -> Power {
        self.error_order
    }

    pub fn coeff(&self, z: impl Into<Power>, k: u32) -> f64 {
        let z = z.into();
        self.terms.iter().find(|t| t.z == z && t.k == k).map_or(0.0, |t| t.coeff)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        self.terms.iter().map(|t| t.coeff * x.powf(t.z.value()) * lx.powi(t.k as i32)).sum()
    }

    /// Closure of the occurring pairs, materialised below the error order.
    pub fn index_set(&self) -> Result<IndexSet> {
        let pairs: Vec<Pair> = self.terms.iter().map(|t| Pair { z: t.z, k: t.k }).collect();
        IndexSet::closure(&pairs, self.error_order)
    }

    /// `(x d/dx - c)` applied term by term.
    pub fn apply_euler(&self, c: impl Into<Power>) -> Expansion {
        let c = c.into();
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let dz = (t.z - c).value();
            out.push(Term { z: t.z, k: t.k, coeff: dz * t.coeff });
            if t.k > 0 {
                out.push(Term { z: t.z, k: t.k - 1, coeff: t.k as f64 * t.coeff });
            }
        }
        Expansion::new(out, self.error_order).expect("same powers as input")
    }

    pub fn max_abs_diff(&self, other: &Expansion) -> f64 {
        let mut keys: Vec<(Power, u32)> = self.terms.iter().map(|t| (t.z, t.k)).collect();
        keys.extend(other.terms.iter().map(|t| (t.z, t.k)));
        keys.iter().map(|(z, k)| (self.coeff(*z, *k) - other.coeff(*z, *k)).abs()).fold(0.0, f64::max)
    }
}

/// Solves `(x d/dx - c) G = g` termwise.
///
/// Away from `z = c` the coefficients follow
/// `alpha_k = (beta_k - (k + 1) alpha_{k+1}) / (z - c)` from the top log down;
/// at `z = c` a log is gained, `alpha_{k+1} = beta_k / (k + 1)`, and
/// `free_coeff` multiplies the kernel `x^c`.
pub fn ode_integrate_expansion(g: &Expansion, c: impl Into<Power>, free_coeff: f64) -> Result<Expansion> {
    let c = c.into();
    let mut by_power: BTreeMap<Power, BTreeMap<u32, f64>> = BTreeMap::new();
    for t in g.terms() {
        by_power.entry(t.z).or_default().insert(t.k, t.coeff);
    }
    let mut out = Vec::new();
    let mut saw_c = false;
    for (z, logs) in &by_power {
        let kmax = *logs.keys().max().unwrap_or(&0);
        let beta = |k: u32| logs.get(&k).copied().unwrap_or(0.0);
        if *z == c {
            saw_c = true;
            for k in 0..=kmax {
                out.push(Term { z: *z, k: k + 1, coeff: beta(k) / (k as f64 + 1.0) });
            }
            out.push(Term { z: *z, k: 0, coeff: free_coeff });
        } else {
            let dz = (*z - c).value();
            let mut next = 0.0;
            for k in (0..=kmax).rev() {
                let a = (beta(k) - (k as f64 + 1.0) * next) / dz;
                out.push(Term { z: *z, k, coeff: a });
                next = a;
            }
        }
    }
    if !saw_c && c < g.error_order() {
        out.push(Term { z: c, k: 0, coeff: free_coeff });
    }
    Expansion::new(out, g.error_order())
}

/// `(x d/dx - c) G`, the inverse of [`ode_integrate_expansion`].
pub fn expansion_apply_euler(g: &Expansion, c: impl Into<Power>) -> Expansion {
    g.apply_euler(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_power_gains_a_log() {
        let g = Expansion::new(vec![Term { z: Power::int(2), k: 0, coeff: 3.0 }], 5).unwrap();
        let sol = ode_integrate_expansion(&g, 2, 0.5).unwrap();
        assert_eq!(sol.coeff(2, 1), 3.0);
        assert_eq!(sol.coeff(2, 0), 0.5);
        assert!(expansion_apply_euler(&sol, 2).max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn non_resonant_log_terms() {
        let g = Expansion::new(
            vec![
                Term { z: Power::ratio(1, 2), k: 2, coeff: 1.0 },
                Term { z: Power::ratio(1, 2), k: 0, coeff: -2.0 },
            ],
            3,
        )
        .unwrap();
        let sol = ode_integrate_expansion(&g, 0, 0.0).unwrap();
        assert!((sol.coeff(Power::ratio(1, 2), 2) - 2.0).abs() < 1e-15);
        assert!((sol.coeff(Power::ratio(1, 2), 1) + 8.0).abs() < 1e-15);
        assert!(expansion_apply_euler(&sol, 0).max_abs_diff(&g) < 1e-14);
    }

    #[test]
    fn index_set_bound() {
        let g = Expansion::new(vec![Term { z: Power::int(1), k: 1, coeff: 1.0 }], 4).unwrap();
        let sol = ode_integrate_expansion(&g, 1, 1.0).unwrap();
        let bound = g
            .index_set()
            .unwrap()
            .ebar_union(&IndexSet::closure(&[Pair::new(1, 0)], 4).unwrap())
            .unwrap();
        assert!(sol.index_set().unwrap().is_subset(&bound));
    }

    #[test]
    fn rejects_terms_past_error_order() {
        assert!(Expansion::new(vec![Term { z: Power::int(3), k: 0, coeff: 1.0 }], 3).is_err());
    }
}
