use super::exact::Monomials;
use super::field::GridField;
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Model equation for a fixed spherical harmonic, written as
/// `du dv psi = -W(r) psi + G` with `psi = r phi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Minkowski,
    /// `Box phi + c phi / r^2 = 0`.
    ScaleInvariant { c: f64 },
    /// `Box phi = -M phi / r^3`.
    CubicPotential {
        #[serde(rename = "M")]
        m: f64,
    },
    Schwarzschild {
        #[serde(rename = "M")]
        m: f64,
    },
    ReggeWheeler {
        #[serde(rename = "M")]
        m: f64,
    },
}

impl Family {
    /// `W(r)` for the mode `ell`.
    pub fn potential(&self, ell: u32, r: f64) -> f64 {
        let l = (ell * (ell + 1)) as f64;
        let r2 = r * r;
        match *self {
            Family::Minkowski => l / r2,
            Family::ScaleInvariant { c } => (l - c) / r2,
            Family::CubicPotential { m } => l / r2 - m / (r2 * r),
            Family::Schwarzschild { m } => (1.0 - 2.0 * m / r) * (l / r2 + 2.0 * m / (r2 * r)),
            Family::ReggeWheeler { m } => (1.0 - 2.0 * m / r) * (l / r2 - 6.0 * m / (r2 * r)),
        }
    }

    pub fn mass(&self) -> f64 {
        match *self {
            Family::CubicPotential { m } | Family::Schwarzschild { m } | Family::ReggeWheeler { m } => m,
            _ => 0.0,
        }
    }

    pub fn needs_schwarzschild(&self) -> bool {
        matches!(self, Family::Schwarzschild { .. } | Family::ReggeWheeler { .. })
    }

    pub fn is_linear_minkowski(&self) -> bool {
        matches!(self, Family::Minkowski)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemilinearKind {
    /// `Box phi = kappa du phi dv phi`.
    DudvProduct,
    /// `Box phi = kappa r^-2 |angular gradient of phi|^2`.
    AngularGradientSq,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Semilinear {
    pub kind: SemilinearKind,
    pub ell_in: u32,
    pub ell_out: u32,
    #[serde(default = "one")]
    pub strength: f64,
}

fn one() -> f64 {
    1.0
}

impl Semilinear {
    pub fn validate(&self) -> Result<()> {
        match (self.ell_in, self.ell_out) {
            (0, 0) | (1, 0) => Ok(()),
            (a, b) => Err(Error::Unsupported(format!("semilinear projection {a} -> {b}"))),
        }
    }
}

pub type ClosedSource = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Inhomogeneity `G` in `du dv psi = -W psi + G`.
#[derive(Clone)]
pub enum Source {
    /// `G(u, v, r)`.
    Closed(ClosedSource),
    /// `G` as a finite sum `sum c r0^a r^b` with `r0 = v0 - u` and `r = v - u`.
    Monomials { terms: Monomials, v0: f64 },
    /// Nodal values, averaged over each cell.
    Nodal(Arc<GridField>),
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Closed(_) => write!(f, "Source::Closed(..)"),
            Source::Monomials { terms, v0 } => write!(f, "Source::Monomials({} terms, v0 = {v0})", terms.len()),
            Source::Nodal(g) => write!(f, "Source::Nodal({})", g.label),
        }
    }
}

impl Source {
    pub fn closed(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Source::Closed(Arc::new(f))
    }
}

#[derive(Clone, Debug)]
pub struct EquationSpec {
    pub ell: u32,
    pub family: Family,
    pub source: Option<Source>,
    pub semilinear: Option<Semilinear>,
}

impl EquationSpec {
    pub fn new(ell: u32, family: Family) -> Self {
        EquationSpec { ell, family, source: None, semilinear: None }
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = Some(source);
        self
    }

    pub fn with_semilinear(mut self, s: Semilinear) -> Self {
        self.semilinear = Some(s);
        self
    }

    pub fn is_linear(&self) -> bool {
        self.semilinear.is_none()
    }

    pub fn validate(&self, geometry: &Geometry) -> Result<()> {
        match (self.family, geometry) {
            (Family::Schwarzschild { m } | Family::ReggeWheeler { m }, Geometry::Schwarzschild { m: mg }) => {
                if (m - mg).abs() > 1e-14 * m.abs().max(1.0) {
                    return Err(Error::Spec(format!("equation mass {m} differs from background mass {mg}")));
                }
            }
            (f, Geometry::Minkowski) if f.needs_schwarzschild() => {
                return Err(Error::Spec(format!("{f:?} needs a Schwarzschild background")));
            }
            (f, Geometry::Schwarzschild { .. }) if !f.needs_schwarzschild() => {
                return Err(Error::Spec(format!("{f:?} is posed on Minkowski")));
            }
            _ => {}
        }
        if let Some(s) = &self.semilinear {
            s.validate()?;
            if s.ell_out != self.ell {
                return Err(Error::Spec(format!("semilinear output mode {} but equation mode {}", s.ell_out, self.ell)));
            }
        }
        Ok(())
    }
}

/// A function of one variable shared between threads.
pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Pure power-law data `C r0^-p` on the ingoing cone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub p: f64,
    pub c: f64,
}

/// Transversal derivatives `T^j psi`, `T = (du + dv)/2`, at the anchor sphere `(u1, v0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalSeed {
    pub u1: f64,
    pub values: Vec<f64>,
}

/// Characteristic data: `psi` on the ingoing cone `v = v0` as a function of `(u, r0)`,
/// and `dv psi` along the far-past row `u = u_min`.
#[derive(Clone)]
pub struct ScatteringData {
    pub psi_ingoing: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    /// Incoming radiation `dv psi` at past null infinity; `None` means none.
    pub incoming: Option<Profile>,
    /// `dv psi` that the untruncated solution carries across `u = u_min`,
    /// added to `incoming` on the far-past row.
    pub past_tail: Option<Profile>,
    pub transversal_seed: Option<TransversalSeed>,
    pub power_law: Option<PowerLaw>,
}

impl fmt::Debug for ScatteringData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScatteringData")
            .field("incoming", &self.incoming.is_some())
            .field("past_tail", &self.past_tail.is_some())
            .field("transversal_seed", &self.transversal_seed)
            .field("power_law", &self.power_law)
            .finish()
    }
}

impl ScatteringData {
    pub fn trivial() -> Self {
        ScatteringData {
            psi_ingoing: Arc::new(|_, _| 0.0),
            incoming: None,
            past_tail: None,
            transversal_seed: None,
            power_law: None,
        }
    }

    pub fn ingoing(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ScatteringData { psi_ingoing: Arc::new(f), ..Self::trivial() }
    }

    /// `psi = C r0^-p` on the ingoing cone, no incoming radiation.
    pub fn power_law(p: f64, c: f64) -> Self {
        ScatteringData {
            psi_ingoing: Arc::new(move |_, r0| c * r0.powf(-p)),
            power_law: Some(PowerLaw { p, c }),
            ..Self::trivial()
        }
    }

    pub fn with_incoming(mut self, h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.incoming = Some(Arc::new(h));
        self
    }

    pub fn with_past_tail(mut self, h: Profile) -> Self {
        self.past_tail = Some(h);
        self
    }

    pub fn with_seed(mut self, seed: TransversalSeed) -> Self {
        self.transversal_seed = Some(seed);
        self
    }

    pub fn has_incoming(&self) -> bool {
        self.incoming.is_some() || self.transversal_seed.is_some()
    }
}
