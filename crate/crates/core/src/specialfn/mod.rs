//! Gamma-family functions, Gauss hypergeometric sums, Frobenius series of the
//! mode ODEs and their connection data.
//!
//! The mode ODE in the self-similar variable `x` is
//! `-(x + x^2) psi'' + (p - 1 - 2x) psi' - c_tilde psi = 0` with
//! `c_tilde = -l(l+1)`; the ODE at spacelike infinity is written in `s = 1 + tau`.

mod gamma;
mod hyp;
mod modes;
mod series;

pub use gamma::{digamma, gamma, gamma_ln, harmonic, pochhammer, rgamma, EULER_GAMMA};
pub use hyp::{gauss_2f1, gauss_2f1_deriv, gauss_2f1_terminating_exact};
pub use modes::{connection_by_continuation, connection_coeffs, effective_mode, LValue, ModeParams};
pub use series::{
    series_tau, series_tau_lambda, series_x, tau_log_coefficient, ExpansionPoint, Root, SeriesSolution,
    MAX_SERIES_TERMS,
};
