//! Ground-state search over [`QuboModel`]s.
//!
//! Both solvers work on a fixed-width copy of the model (`i128`
//! coefficients with per-variable local fields), so a single-bit flip costs
//! one pass over that variable's neighbours. Reported energies are always
//! recomputed from the arbitrary-precision model.

mod anneal;
mod compiled;
mod exact;
mod recover;
mod samples;

pub use anneal::{auto_beta_range, solve_sa, trace_chain, ChainTrace, SaParams};
pub use exact::{solve_exact, DEFAULT_VAR_LIMIT};
pub use recover::recover_factors;
pub use samples::{Sample, SampleSet};

use thiserror::Error;

#[cfg(doc)]
use crate::qubo::QuboModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("model has {num_vars} variables, exhaustive limit is {limit}")]
    TooLarge { num_vars: usize, limit: usize },
    #[error("coefficients too large for 128-bit incremental evaluation")]
    CoefficientOverflow,
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),
}
