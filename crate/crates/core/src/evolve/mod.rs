//! Characteristic evolution of fixed-`ell` modes in double null coordinates,
//! closed-form Minkowski solutions, the first iterates of the coefficient
//! algorithm and the conservation-law transport.

mod conservation;
mod exact;
mod field;
mod pipeline;
mod solver;
mod spec;

pub use conservation::conservation_transport;
pub use exact::{cone_transversal_coefficient, minkowski_exact_lmode, Monomial, Monomials, MAX_EXACT_ELL};
pub use field::{derivative_1d, GridField};
pub use pipeline::{
    compose_on_physical, iterate_pipeline, iterates, schwarzschild_first_order_source, semilinear_leading_coefficient,
    semilinear_source, split, Iterates, Perturbation,
};
pub use solver::{corner_transversal, geometry_for, solve_lmode, solve_lmode_on, SolveOptions};
pub use spec::{
    ClosedSource, EquationSpec, Family, PowerLaw, Profile, ScatteringData, Semilinear, SemilinearKind, Source,
    TransversalSeed,
};
