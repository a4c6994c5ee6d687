use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for {n} vertices (edge {edge:?})")]
    VertexOutOfRange {
        index: usize,
        n: usize,
        edge: (usize, usize),
    },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid vertex {vertex} (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is bipartite; the operation requires a non-bipartite graph")]
    Bipartite,

    #[error("not a regular Hadamard matrix: {0}")]
    NotHadamard(String),

    #[error("spectral decomposition failed its invariant checks: {0}")]
    Spectral(String),

    #[error("walk spectrum failed its invariant checks: {0}")]
    WalkSpectrum(String),

    #[error("{count} distinct eigenvalues exceed the sign-pattern search bound of {limit}")]
    TooManyEigenvalues { count: usize, limit: usize },

    #[error("state is not unit norm (norm {0})")]
    NotUnitNorm(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
