use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix must be square and non-empty, got {rows} rows with row lengths {detail}")]
    NotSquare { rows: usize, detail: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("operator lies outside the basis span (residual {residual:e})")]
    OutsideSpan { residual: f64 },
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid operator basis: {0}")]
    InvalidBasis(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("invalid game: {}", .0.join("; "))]
    InvalidGame(Vec<String>),
    #[error("incomplete payoff table: {0}")]
    IncompleteTable(String),
    #[error("player index {index} out of range for {players} players")]
    PlayerOutOfRange { index: usize, players: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("payoff has imaginary residue {residual:e}")]
    ComplexPayoff { residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
