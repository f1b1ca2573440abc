//! Coefficient extraction, decay rates and diagnostics on grid fields.
//!
//! Expansions are fitted in the basis `r^-z log^k(r / r_ref)` along a fixed
//! cone; coefficients are Richardson-extrapolated across nested refinements.

mod decay;
mod experiments;
mod fit;
mod flux;
mod operators;
mod richardson;
mod weights;

pub use decay::{decay_rate, decay_rate_with, decay_samples, theil_sen, Boundary, DecayProbe};
pub use experiments::{
    antipodal_check, antipodal_sum, explicit_incoming_solution, kill_moments, moment_condition_experiment,
    AntipodalReport, CompactProfile, MomentRow,
};
pub use fit::{cone_samples, default_window, fit_expansion, fit_points, two_window_check, Cone, FitResult, CONDITION_LIMIT};
pub use flux::{energy_flux, Fluxes, Multiplier};
pub use operators::{rdv_commute, scaling_commute, time_integral};
pub use richardson::{
    default_basis, detect_log, extract_coefficient, log_coefficient, ExtractOptions, Extracted, LogDetection, LogVerdict,
};
pub use weights::{admissible, admissible_inhom, extended_admissible, perturbation_weight, WeightTriple};
