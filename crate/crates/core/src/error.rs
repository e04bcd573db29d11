use thiserror::Error;

/// Errors raised by the simulator, the frame tracker and the compilers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: qudit dimension must be at least 2")]
    InvalidDimension(usize),

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: i64, modulus: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("qudit index {qudit} out of range for a register of {n} qudits")]
    QuditOutOfRange { qudit: usize, n: usize },

    #[error("outcome {outcome} out of range for dimension {d}")]
    OutcomeOutOfRange { outcome: usize, d: usize },

    #[error("zero-norm state")]
    ZeroNorm,

    #[error("unsupported dimension {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: String },

    #[error("operator is not in the Clifford group: {0}")]
    NotClifford(String),

    #[error("pattern does not match cluster: {0}")]
    PatternMismatch(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("decomposition failed after {restarts} restarts (best fidelity {best_fidelity:.12})")]
    DecompositionFailed { restarts: usize, best_fidelity: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
