use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds tolerance)")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.6e})")]
    NotAState { min_eig: f64 },

    #[error("operator does not map Hermitian vectors to Hermitian vectors (defect {defect:.3e})")]
    NotHermitianPreserving { defect: f64 },

    #[error("leading Schmidt pair did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("expected tensor rank {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("conjugated second factor is proportional to the identity")]
    DegenerateD,

    #[error("off-diagonal entry vanished; effective tensor rank is at most 2")]
    ZeroOffDiagonal,

    #[error("matrix is not SPC")]
    NotSpc,

    #[error("tensor rank is {0}, canonical form needs rank 4")]
    RankNot4(usize),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("depth {0} outside the supported range 1..=4")]
    DepthOutOfRange(usize),

    #[error("matrix {index} of the family is not real antisymmetric")]
    NotAntisymmetric { index: usize },

    #[error("matrix entries are not all integers")]
    NotInteger,
}

pub type Result<T> = std::result::Result<T, Error>;
