//! No-incoming-radiation conditions on Cauchy data at `t = 0`.
//!
//! Data of the form `(r^-p psi0, r^-p-1 psi1)` on a fixed `ell` mode produce no incoming
//! radiation to order `p` iff `lhs(p, ell) psi0 = rhs(p, ell) psi1`. On Schwarzschild the
//! `ell = 0` condition one order further picks up a harmonic-number correction.

mod multiplier;
mod parity;
mod schwarzschild;

pub use multiplier::{
    check_guess, multiplier, multiplier_exact, multiplier_from_solution, ratio_table, ExactPair, ExactRatio, GuessReport, GuessRow,
    MultiplierPair, RatioTable, GUESS_TOLERANCE, TABLE_BOUND,
};
pub use parity::{parity_classify, Method, ModeCoefficients, ParityVerdict, Rule, Violation};
pub use schwarzschild::{bracket_by_quadrature, correction_flux, schwarzschild_bracket, schwarzschild_order1};
