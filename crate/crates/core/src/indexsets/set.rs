use super::power::Power;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Upper bound on materialised distinct powers.
pub const MAX_POWERS: usize = 100_000;

/// A pair `(z, k)` standing for `rho^z log^k rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    pub z: Power,
    pub k: u32,
}

impl Pair {
    pub fn new(z: impl Into<Power>, k: u32) -> Self {
        Pair { z: z.into(), k }
    }
}

/// Comparison used by [`IndexSet::truncate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cut {
    Lt,
    Le,
    Gt,
    Ge,
}

/// An index set, materialised for all powers up to a truncation order.
///
/// Stored as the maximal log exponent at each power. Membership is closed
/// under `(z, k) -> (z + 1, k)` and `(z, k) -> (z, k - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSet {
    max_log: BTreeMap<Power, u32>,
    truncation: Power,
    strict: bool,
}

fn insert_max(map: &mut BTreeMap<Power, u32>, z: Power, k: u32) {
    map.entry(z).and_modify(|e| *e = (*e).max(k)).or_insert(k);
}

fn below(z: &Power, c: &Power, strict: bool) -> bool {
    if strict {
        z < c
    } else {
        z <= c
    }
}

impl IndexSet {
    pub fn empty(truncation: impl Into<Power>) -> Self {
        IndexSet { max_log: BTreeMap::new(), truncation: truncation.into(), strict: false }
    }

    /// Smallest index set containing `raw`, materialised up to `truncation`.
    pub fn closure(raw: &[Pair], truncation: impl Into<Power>) -> Result<Self> {
        let c: Power = truncation.into();
        Self::close_map(raw.iter().map(|p| (p.z, p.k)), c, false)
    }

    fn close_map(raw: impl Iterator<Item = (Power, u32)>, c: Power, strict: bool) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::IndexSet("truncation order must be finite".into()));
        }
        let mut seeds: BTreeMap<Power, u32> = BTreeMap::new();
        for (z, k) in raw {
            if !z.is_finite() {
                return Err(Error::IndexSet(format!("non-finite power {z}")));
            }
            if below(&z, &c, strict) {
                insert_max(&mut seeds, z, k);
            }
        }
        let mut max_log = BTreeMap::new();
        for (z, k) in seeds {
            let mut w = z;
            while below(&w, &c, strict) {
                insert_max(&mut max_log, w, k);
                if max_log.len() > MAX_POWERS {
                    return Err(Error::IndexSet(format!(
                        "more than {MAX_POWERS} powers below truncation {c}"
                    )));
                }
                w = w + 1;
            }
        }
        Ok(IndexSet { max_log, truncation: c, strict })
    }

    pub fn truncation(&self) -> Power {
        self.truncation
    }

    pub fn is_empty(&self) -> bool {
        self.max_log.is_empty()
    }

    /// Number of pairs `(z, k)` in the materialised part.
    pub fn len(&self) -> usize {
        self.max_log.values().map(|k| *k as usize + 1).sum()
    }

    pub fn max_log(&self, z: &Power) -> Option<u32> {
        self.max_log.get(z).copied()
    }

    /// `None` when `z` lies beyond the truncation order.
    pub fn contains(&self, z: impl Into<Power>, k: u32) -> Option<bool> {
        let z = z.into();
        if !below(&z, &self.truncation, self.strict) {
            return None;
        }
        Some(self.max_log.get(&z).is_some_and(|m| k <= *m))
    }

    pub fn powers(&self) -> impl Iterator<Item = (Power, u32)> + '_ {
        self.max_log.iter().map(|(z, k)| (*z, *k))
    }

    pub fn elements(&self) -> Vec<Pair> {
        self.max_log
            .iter()
            .flat_map(|(z, k)| (0..=*k).map(move |j| Pair { z: *z, k: j }))
            .collect()
    }

    /// Minimal generating pairs: none is implied by another.
    pub fn generators(&self) -> Vec<Pair> {
        let mut out = Vec::new();
        for (z, k) in &self.max_log {
            let implied = self.max_log.iter().any(|(w, j)| {
                w < z && j >= k && z.nat_offset(w).is_some()
            });
            if !implied {
                out.push(Pair { z: *z, k: *k });
            }
        }
        out
    }

    /// Smallest power, with its largest log exponent.
    pub fn min_element(&self) -> Option<Pair> {
        self.max_log.iter().next().map(|(z, k)| Pair { z: *z, k: *k })
    }

    pub fn is_index_set(&self) -> bool {
        self.max_log.iter().all(|(z, k)| {
            let next = *z + 1;
            !below(&next, &self.truncation, self.strict)
                || self.max_log.get(&next).is_some_and(|j| j >= k)
        })
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.max_log.iter().all(|(z, k)| match other.contains(*z, *k) {
            Some(b) => b,
            None => true,
        })
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        let c = self.truncation.min(other.truncation);
        Self::close_map(self.powers().chain(other.powers()), c, false)
    }

    /// The extended union: logs add up (plus one) where powers coincide.
    pub fn ebar_union(&self, other: &IndexSet) -> Result<IndexSet> {
        let a: Vec<Pair> = self.max_log.iter().map(|(z, k)| Pair { z: *z, k: *k }).collect();
        let b: Vec<Pair> = other.max_log.iter().map(|(z, k)| Pair { z: *z, k: *k }).collect();
        ebar_union_raw(&a, &b, self.truncation.min(other.truncation))
    }

    /// `{(z1 + z2, k1 + k2)}`, truncated where both factors are fully known.
    pub fn sum(&self, other: &IndexSet) -> Result<IndexSet> {
        let mut c = self.truncation.min(other.truncation);
        if let (Some(ma), Some(mb)) = (self.min_element(), other.min_element()) {
            c = c.min(self.truncation + mb.z).min(other.truncation + ma.z);
        }
        let mut raw = Vec::new();
        for (za, ka) in self.powers() {
            for (zb, kb) in other.powers() {
                raw.push((za + zb, ka + kb));
            }
        }
        Self::close_map(raw.into_iter(), c, false)
    }

    pub fn shift(&self, dz: impl Into<Power>) -> IndexSet {
        let dz = dz.into();
        IndexSet {
            max_log: self.max_log.iter().map(|(z, k)| (*z + dz, *k)).collect(),
            truncation: self.truncation + dz,
            strict: self.strict,
        }
    }

    pub fn truncate(&self, cut: Cut, c: impl Into<Power>) -> IndexSet {
        let c = c.into();
        let keep = |z: &Power| match cut {
            Cut::Lt => *z < c,
            Cut::Le => *z <= c,
            Cut::Gt => *z > c,
            Cut::Ge => *z >= c,
        };
        let max_log = self.max_log.iter().filter(|(z, _)| keep(z)).map(|(z, k)| (*z, *k)).collect();
        let (truncation, strict) = match cut {
            Cut::Lt if c <= self.truncation => (c, true),
            Cut::Le if c < self.truncation => (c, false),
            _ => (self.truncation, self.strict),
        };
        IndexSet { max_log, truncation, strict }
    }
}

/// Extended union of arbitrary finite pair sets, followed by closure.
pub fn ebar_union_raw(a: &[Pair], b: &[Pair], truncation: Power) -> Result<IndexSet> {
    let mut ma: BTreeMap<Power, u32> = BTreeMap::new();
    let mut mb: BTreeMap<Power, u32> = BTreeMap::new();
    for p in a {
        insert_max(&mut ma, p.z, p.k);
    }
    for p in b {
        insert_max(&mut mb, p.z, p.k);
    }
    let mut raw: Vec<(Power, u32)> = Vec::new();
    for (z, ka) in &ma {
        if let Some(kb) = mb.get(z) {
            raw.push((*z, ka + kb + 1));
        }
    }
    raw.extend(ma.into_iter());
    raw.extend(mb.into_iter());
    IndexSet::close_map(raw.into_iter(), truncation, false)
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> =
            self.generators().iter().map(|p| format!("({}, {})", p.z, p.k)).collect();
        let rel = if self.strict { "<" } else { "<=" };
        write!(f, "closure{{{}}} for z {rel} {}", gens.join(", "), self.truncation)
    }
}

#[derive(Serialize, Deserialize)]
struct IndexSetRepr {
    generators: Vec<Pair>,
    truncation: Power,
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IndexSetRepr { generators: self.generators(), truncation: self.truncation }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = IndexSetRepr::deserialize(d)?;
        IndexSet::closure(&repr.generators, repr.truncation).map_err(serde::de::Error::custom)
    }
}
