use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index set: {0}")]
    IndexSet(String),
    #[error("pole of {func} at {x}")]
    Pole { func: &'static str, x: f64 },
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("tortoise inversion failed at r* = {rstar}: {reason}")]
    Tortoise { rstar: f64, reason: String },
    #[error("non-finite value at cell ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("blow-up at cell ({i}, {j}): |psi| = {value:e}")]
    BlowUp { i: usize, j: usize, value: f64 },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid equation or data: {0}")]
    Spec(String),
    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("indicial degeneracy at k = {k}: recurrence obstruction {obstruction:e} needs a log companion")]
    Indicial { k: usize, obstruction: f64 },
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
