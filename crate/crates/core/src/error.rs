use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a covering correspondence: {0}")]
    NotACovering(String),

    #[error("correspondence is not transversal: {0}")]
    NonTransversal(String),

    #[error("multiplier {multiplier} is not in the endomorphism ring of this lattice ({ring})")]
    MultiplierNotInRing { multiplier: String, ring: String },

    #[error("pairing matrix in degree {degree} is singular")]
    PoincareDualityFailure { degree: usize },

    #[error("repeated eigenvalue {0}: the Möbius map is not transversal")]
    DegenerateEigenvalues(String),

    #[error("bundle degree must be nonnegative, got {0}")]
    NegativeBundleDegree(i64),

    #[error("exterior power {k} out of range for a {n}x{n} matrix")]
    ExteriorPowerOutOfRange { k: usize, n: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration does not fit in machine integers: {0}")]
    Overflow(String),

    /// Two code paths that must agree did not. Always an implementation bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
