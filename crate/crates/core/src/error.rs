use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid group parameter: {0}")]
    InvalidGroupParameter(String),
    #[error("no diagram automorphism sends vertex {0} to 0")]
    NoSuchAutomorphism(usize),
    #[error("index set I must be nonempty")]
    EmptyIndexSet,
    #[error("vertex subset contains a whole affine component")]
    AffineComponent,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("stability weights lie outside the closed positive cone")]
    UnsupportedStability,
    #[error("truncated algebra needs more than {limit} paths")]
    CapTooLargeForMemory { limit: usize },
    #[error("quotient is not cyclic")]
    NotCyclic,
    #[error("quiver mismatch: {0}")]
    QuiverMismatch(String),
    #[error("total dimension {dim} exceeds brute-force limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("could not rationalize numeric solution")]
    RationalizationFailed,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Exit-code class used by the command line front end.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::CapTooLargeForMemory { .. } | Error::DimensionTooLarge { .. }
        )
    }

    pub fn is_invariant(&self) -> bool {
        matches!(
            self,
            Error::InvariantViolation(_) | Error::AffineComponent | Error::SingularMatrix
        )
    }
}
