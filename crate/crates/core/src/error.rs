//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical-space grid was requested below the resolution floor
    /// `2*M_grid + 1`; evaluating there would alias.
    #[error("grid of {requested} points is below the resolution floor {floor}")]
    GridTooCoarse { requested: usize, floor: usize },

    /// Parameter regime in which the requested object does not exist
    /// (e.g. the quadratic object `N(z)` for decay exponent alpha <= 1/4).
    #[error("regime violation: {0}")]
    RegimeViolation(String),

    /// Combinatorial guard on tree enumeration.
    #[error("tree order {0} exceeds the enumeration guard (j <= {1})")]
    TreeOrderTooLarge(usize, usize),

    /// Picard iteration failed to contract within the allotted iterations.
    #[error("Picard iteration did not contract after {iterations} iterations (time window too large?)")]
    NonContraction { iterations: usize },

    /// Two trajectories were combined but live on different time grids.
    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    /// Parameter search exhausted its ceiling.
    #[error("no admissible cutoff N <= 2^{ceiling_log2} satisfies the constraints; binding constraint: {binding}")]
    NoAdmissibleParameters { ceiling_log2: u32, binding: String },

    /// Invalid argument outside any more specific category.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A degenerate input (too few time points, empty ensemble, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Serialization round-trip failures.
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}
