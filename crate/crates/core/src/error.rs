use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum GefError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    EigenNoConvergence(usize),
    #[error("invalid party dimensions: {0}")]
    InvalidDims(String),
    #[error("invalid subsystem selector: {0}")]
    InvalidSubset(String),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("matrix is not an isometry (column Gram defect {0:.3e})")]
    NotIsometry(f64),
    #[error("expected {expected} parties, got {got}")]
    PartyCount { expected: String, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = GefError> = std::result::Result<T, E>;
