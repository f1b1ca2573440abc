//! Index sets and polyhomogeneous expansions.
//!
//! An index set is a set of pairs `(z, k)` standing for `rho^z log^k rho`,
//! closed under lowering `k` and raising `z` by integers. Only the part below a
//! truncation order is ever materialised.

mod expansion;
mod power;
mod set;

pub use expansion::{expansion_apply_euler, ode_integrate_expansion, Expansion, Term};
pub use power::{Power, POWER_TOL};
pub use set::{ebar_union_raw, Cut, IndexSet, Pair, MAX_POWERS};
