//! Experiment configuration files.
//!
//! A config names one experiment `case` with its parameters, an optional grid,
//! the number of nested refinements and optional tolerance overrides. Unknown
//! keys are rejected everywhere.

use nullscri_core::geometry::{Geometry, NullGrid, Spacing};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

pub const MAX_REFINEMENTS: u32 = 5;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub experiment: Experiment,
    #[serde(default)]
    pub grid: Option<GridDescriptor>,
    /// Number of nested levels; level `k` splits each base cell `2^k` times per direction.
    #[serde(default = "one")]
    pub refinements: u32,
    #[serde(default)]
    pub output: Output,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn one() -> u32 {
    1
}

/// File names of the report, relative to the output directory.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub csv: Option<String>,
    pub manifest: Option<String>,
}

/// Overrides of the acceptance tolerances. `None` keeps the experiment default.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Multiple of the reported uncertainty a vanishing or matching value may deviate by.
    pub sigmas: Option<f64>,
    /// Relative tolerance on a matched target.
    pub rel: Option<f64>,
    /// Absolute tolerance on a matched target.
    pub abs: Option<f64>,
}

/// Grid descriptor; the geometry, when given, must agree with the experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDescriptor {
    pub u0: f64,
    pub v0: f64,
    pub u_min: f64,
    pub v_max: f64,
    #[serde(rename = "Nu")]
    pub nu: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
    #[serde(default)]
    pub u_spacing: Spacing,
    #[serde(default)]
    pub v_spacing: Spacing,
    #[serde(default)]
    pub geometry: Option<Geometry>,
}

impl GridDescriptor {
    pub fn null_grid(&self) -> NullGrid {
        NullGrid {
            u0: self.u0,
            v0: self.v0,
            u_min: self.u_min,
            v_max: self.v_max,
            nu: self.nu,
            nv: self.nv,
            u_spacing: self.u_spacing,
            v_spacing: self.v_spacing,
        }
    }

    /// Same grid with the far-past cut moved to `u_min`.
    pub fn with_u_min(&self, u_min: f64) -> NullGrid {
        NullGrid { u_min, ..self.null_grid() }
    }
}

/// The polynomial bump `amp ((v - a)(b - v))^4` on `[a, b]`, unit peak for `amp = 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub a: f64,
    pub b: f64,
    #[serde(default = "unit")]
    pub amp: f64,
}

fn unit() -> f64 {
    1.0
}

/// An `(ell, p)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub ell: u32,
    pub p: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionCase {
    pub n: u32,
    pub ell: u32,
    pub c: f64,
}

/// The registered experiments and their parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// `RHS/LHS` against the printed table.
    RatioTable { p_max: u32, ell_max: u32 },
    /// Order-`(p+1)` log coefficient of the first Schwarzschild corrector.
    SchwarzschildLog {
        modes: Vec<Mode>,
        window: [f64; 2],
        second_window: [f64; 2],
        u_min_alt: f64,
    },
    /// Order-`(p+1)` log coefficient of the first iterate for the `-M/r^3` potential.
    PotentialCancellation {
        #[serde(rename = "M")]
        m: f64,
        vanishing: Vec<Mode>,
        nonvanishing: Vec<Mode>,
        /// Modes whose claim is known to be unattainable; reported but not asserted.
        #[serde(default)]
        nonblocking: Vec<Mode>,
        window: [f64; 2],
        second_window: [f64; 2],
        u_min_alt: f64,
        nonzero_sigmas: f64,
    },
    /// Every log coefficient at orders `p..=p+2` of Minkowski no-incoming modes.
    MinkowskiPeeling {
        ells: Vec<u32>,
        ps: Vec<f64>,
        window: [f64; 2],
        second_window: [f64; 2],
        u_min_alt: f64,
        #[serde(default)]
        romberg: bool,
    },
    /// `ell = 0` projection of the first semilinear iterate at order `2p+1`.
    Semilinear {
        ell_in: u32,
        vanishing: Vec<f64>,
        nonvanishing: Vec<f64>,
        window: [f64; 2],
        second_window: [f64; 2],
        u_min_alt: f64,
        nonzero_sigmas: f64,
        /// `(p, value)` pairs for the closed-form coefficient expression.
        expression_targets: Vec<[f64; 2]>,
        /// Values of `p` at which the expression must not vanish.
        expression_nonzero: Vec<f64>,
    },
    /// Corner limits of modes with compact incoming radiation.
    Antipodal { ells: Vec<u32>, profile: Bump },
    /// Gamma-formula connection coefficients against ODE continuation.
    Connection {
        samples: usize,
        seed: u64,
        p_range: [f64; 2],
        l_range: [f64; 2],
        natural_l: Vec<u32>,
        natural_l_ps: Vec<f64>,
    },
    /// Peeling classification of `Box phi = c phi / r^2` in `n` dimensions.
    PeelingClassification {
        peeling: Vec<DimensionCase>,
        failure: Vec<DimensionCase>,
        /// Natural `p` at which the `tau` log coefficient of a failure case must not vanish.
        log_ps: Vec<u32>,
    },
    /// Stabilisation of `2^k c_k k^(1-p)`.
    SeriesAsymptotics { cases: Vec<[f64; 2]>, k_range: [usize; 2] },
    /// `(x d/dx - c)` undoes `ode_integrate_expansion`.
    OdeRoundTrip { samples: usize, seed: u64, max_terms: usize },
    /// Convergence order of the conservation-law residual.
    Conservation {
        ells: Vec<u32>,
        p: f64,
        min_order: f64,
        /// Residuals below this are round-off and count as exactly conserved.
        roundoff: f64,
    },
    /// Closed-form Schwarzschild `ell = 0` bracket against quadrature.
    SchwarzschildBracket { ps: Vec<f64> },
    /// Decay gain toward `i0` from killing moments of the incoming profile.
    MomentDecay {
        ell: u32,
        kill_through: u32,
        profile: Bump,
        lambda: f64,
        decades: f64,
        min_gain: f64,
    },
    /// The conjectured multiplier pattern; never blocking.
    Guess { p_max: u32, n_max: u32 },
}

impl Experiment {
    pub fn case_name(&self) -> &'static str {
        match self {
            Experiment::RatioTable { .. } => "ratio_table",
            Experiment::SchwarzschildLog { .. } => "schwarzschild_log",
            Experiment::PotentialCancellation { .. } => "potential_cancellation",
            Experiment::MinkowskiPeeling { .. } => "minkowski_peeling",
            Experiment::Semilinear { .. } => "semilinear",
            Experiment::Antipodal { .. } => "antipodal",
            Experiment::Connection { .. } => "connection",
            Experiment::PeelingClassification { .. } => "peeling_classification",
            Experiment::SeriesAsymptotics { .. } => "series_asymptotics",
            Experiment::OdeRoundTrip { .. } => "ode_round_trip",
            Experiment::Conservation { .. } => "conservation",
            Experiment::SchwarzschildBracket { .. } => "schwarzschild_bracket",
            Experiment::MomentDecay { .. } => "moment_decay",
            Experiment::Guess { .. } => "guess",
        }
    }

    fn needs_grid(&self) -> bool {
        matches!(
            self,
            Experiment::SchwarzschildLog { .. }
                | Experiment::PotentialCancellation { .. }
                | Experiment::MinkowskiPeeling { .. }
                | Experiment::Semilinear { .. }
                | Experiment::Antipodal { .. }
                | Experiment::Conservation { .. }
                | Experiment::MomentDecay { .. }
        )
    }

    fn min_refinements(&self) -> u32 {
        match self {
            Experiment::MinkowskiPeeling { romberg: true, .. } => 4,
            Experiment::SchwarzschildLog { .. }
            | Experiment::PotentialCancellation { .. }
            | Experiment::MinkowskiPeeling { .. }
            | Experiment::Semilinear { .. }
            | Experiment::Conservation { .. } => 3,
            _ => 1,
        }
    }

    fn geometry_kind(&self) -> Option<&'static str> {
        match self {
            Experiment::SchwarzschildLog { .. } => Some("schwarzschild"),
            e if e.needs_grid() => Some("minkowski"),
            _ => None,
        }
    }
}

/// A config that could not be read, parsed or validated.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub message: String,
    /// 1-based line and column of a JSON syntax or schema error.
    pub location: Option<(usize, usize)>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((l, c)) => write!(f, "line {l}, column {c}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError { message: message.into(), location: None }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError {
            message: e.to_string(),
            location: (e.line() > 0).then(|| (e.line(), e.column())),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::parse(&text)?, text))
    }

    /// Refinement factors `1, 2, 4, ...`.
    pub fn factors(&self) -> Vec<usize> {
        (0..self.refinements).map(|k| 1usize << k).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(invalid(format!("name {:?} must be non-empty and use only [A-Za-z0-9_-]", self.name)));
        }
        if !(1..=MAX_REFINEMENTS).contains(&self.refinements) {
            return Err(invalid(format!("refinements = {} is outside [1, {MAX_REFINEMENTS}]", self.refinements)));
        }
        let need = self.experiment.min_refinements();
        if self.refinements < need {
            return Err(invalid(format!("{} needs at least {need} refinements", self.experiment.case_name())));
        }
        match (&self.grid, self.experiment.needs_grid()) {
            (None, true) => return Err(invalid(format!("{} needs a grid", self.experiment.case_name()))),
            (Some(_), false) => return Err(invalid(format!("{} takes no grid", self.experiment.case_name()))),
            _ => {}
        }
        if let Some(g) = &self.grid {
            if let (Some(geom), Some(kind)) = (&g.geometry, self.experiment.geometry_kind()) {
                let got = match geom {
                    Geometry::Minkowski => "minkowski",
                    Geometry::Schwarzschild { .. } => "schwarzschild",
                };
                if got != kind {
                    return Err(invalid(format!("{} runs on {kind}, the grid says {got}", self.experiment.case_name())));
                }
            }
            if !(g.u_min < g.u0 && g.u0 < 0.0 && 0.0 < g.v0 && g.v0 < g.v_max) || g.nu < 2 || g.nv < 2 {
                return Err(invalid("grid needs u_min < u0 < 0 < v0 < v_max and at least two nodes per direction"));
            }
        }
        for (key, v) in [("sigmas", self.tolerances.sigmas), ("rel", self.tolerances.rel), ("abs", self.tolerances.abs)] {
            if let Some(x) = v {
                if !(x >= 0.0 && x.is_finite()) {
                    return Err(invalid(format!("tolerance {key} = {x} must be finite and non-negative")));
                }
            }
        }
        for name in [&self.output.csv, &self.output.manifest].into_iter().flatten() {
            if name.is_empty() || Path::new(name).is_absolute() || name.contains("..") {
                return Err(invalid(format!("output name {name:?} must be a relative path inside the output directory")));
            }
        }
        Ok(())
    }

    /// Mass of the Schwarzschild background, 1 unless the grid says otherwise.
    pub fn mass(&self) -> f64 {
        match self.grid.as_ref().and_then(|g| g.geometry) {
            Some(Geometry::Schwarzschild { m }) => m,
            _ => 1.0,
        }
    }
}
