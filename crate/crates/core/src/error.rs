use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    /// Lattice indicator with measure above one.
    #[error("not a state: lattice measure {measure} exceeds 1")]
    NotAState { measure: String },

    #[error("not a channel: |1 - det K|_p * |L| = {lhs} exceeds 1")]
    NotAChannel { lhs: String },

    #[error("lattice is not self-dual (measure {measure})")]
    NotSelfDual { measure: String },

    #[error("measure mismatch: {0} vs {1}")]
    MeasureMismatch(String, String),

    #[error("n = {n} is below the channel threshold {threshold}")]
    BelowThreshold { n: i64, threshold: i64 },

    #[error("outside the finite window: {0}")]
    OutOfWindow(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}
