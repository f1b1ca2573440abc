//! Polyhomogeneous asymptotics for linear and semilinear wave equations on
//! Minkowski and Schwarzschild backgrounds.
//!
//! The crate is organised around the spherical-mode equation
//! `du dv psi = F(u, v, psi)` in double null coordinates, with `psi = r phi`.
//! [`indexsets`] holds the index-set algebra, [`geometry`] the backgrounds,
//! [`evolve`] the characteristic solver and derived operators, [`asymptotics`]
//! the fitting machinery, [`specialfn`] the hypergeometric and series tools and
//! [`noinc`] the no-incoming-radiation multiplier analysis.

pub mod asymptotics;
pub mod error;
pub mod evolve;
pub mod geometry;
pub mod indexsets;
pub mod noinc;
pub mod specialfn;

pub use error::{Error, Result};
