use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit subset is empty")]
    EmptySubset,

    #[error("qubit index {0} appears more than once")]
    DuplicateIndex(usize),

    #[error("partition blocks overlap on qubit {0}")]
    OverlappingBlocks(usize),

    #[error("a correlation quantity needs at least 2 blocks, got {0}")]
    TooFewBlocks(usize),

    #[error("matrix dimension {found} does not match expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} differs from 1")]
    BadTrace(f64),

    #[error("eigenvalue {0:e} is below the positivity floor")]
    NegativeEigenvalue(f64),

    #[error("angle set has {found} entries, expected {expected}")]
    AngleCountMismatch { expected: usize, found: usize },

    #[error("invalid state specification: {0}")]
    InvalidState(String),

    #[error("invalid audit specification: {0}")]
    InvalidAudit(String),

    #[error("invalid Hamiltonian specification: {0}")]
    InvalidHamiltonian(String),

    #[error("ground state is degenerate (spectral gap {0:e})")]
    DegenerateGroundState(f64),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("objective evaluated to a non-finite value")]
    NonFinite,
}
