use thiserror::Error;

use crate::algebra::AlgebraDefect;
use crate::linalg::CVector;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the library.
///
/// Variants fall into two groups: malformed input (shape, symmetry,
/// positivity of the data itself) and mathematical infeasibility (no
/// positive extension exists, a bound does not dominate). The CLI maps the
/// second group to exit code 2, see [`Error::is_infeasible`].
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("domain basis has numerical rank {rank}, expected {expected}")]
    RankDeficientDomain { rank: usize, expected: usize },

    #[error("Gram matrix of the operator on its domain is not Hermitian (residual {residual:.3e})")]
    NonHermitianGram { residual: f64 },

    #[error("operator is not positive on its domain (Gram min eigenvalue {min_eigenvalue:.3e})")]
    NonPsdGram { min_eigenvalue: f64 },

    #[error("operator admits no positive extension")]
    NotExtendible { witness: CVector },

    #[error("bound does not dominate the minimal extension (eigenvalue {eigenvalue:.3e})")]
    BoundTooSmall { direction: CVector, eigenvalue: f64 },

    #[error("intertwining hypotheses fail: {0}")]
    HypothesesFail(String),

    #[error("invalid *-algebra data: {defect} (residual {residual:.3e})")]
    InvalidAlgebra { defect: AlgebraDefect, residual: f64 },

    #[error("functional is not admissible on the ideal")]
    NotAdmissible,

    #[error("functional is not Hilbert bounded on the ideal")]
    NotHilbertBounded,

    #[error("algebra has no unit")]
    NoUnit,

    #[error("bound functional does not dominate the minimal extension (value {value:.3e})")]
    BoundNotDominating { certificate: CVector, value: f64 },

    #[error("functional is not representable")]
    NotRepresentable,
}

impl Error {
    /// True for errors that express a mathematical obstruction rather than
    /// malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::NotExtendible { .. }
                | Error::BoundTooSmall { .. }
                | Error::HypothesesFail(_)
                | Error::NotAdmissible
                | Error::NotHilbertBounded
                | Error::BoundNotDominating { .. }
                | Error::NotRepresentable
        )
    }
}
