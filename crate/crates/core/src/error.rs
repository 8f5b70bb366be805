use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem `{label}` has invalid dimension {dim}")]
    InvalidDimension { label: String, dim: usize },

    #[error("subsystem `{0}` is not a qubit")]
    NotAQubit(String),

    #[error("layout `{layout}` has dimension {dim}, above the cap of {cap}")]
    DimensionCap { layout: String, dim: usize, cap: usize },

    #[error("dense realization of dimension {dim} exceeds the oracle cap of {cap}")]
    OracleCap { dim: usize, cap: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("amplitude vector has length {got}, layout needs {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("amplitudes are not normalized (sum of squared magnitudes {0})")]
    AmplitudesNotNormalized(f64),

    #[error("states are not orthogonal (overlap magnitude {0})")]
    NotOrthogonal(f64),

    #[error("operator is not Hermitian (deviation {0})")]
    NotHermitian(f64),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("projector is not idempotent (deviation {0})")]
    NotIdempotent(f64),

    #[error("operator is not an involution (deviation {0})")]
    NotInvolution(f64),

    #[error("operator support violation: {0}")]
    Support(String),

    #[error("atom index {index} is invalid for a chain of {n_atoms} atoms")]
    InvalidAtom { index: usize, n_atoms: usize },

    #[error("atom {0} was already visited in this passage")]
    AtomVisited(usize),

    #[error("target chain is not in its ready (all-up) state (stray weight {0})")]
    TargetNotReady(f64),

    #[error("empty observable set")]
    EmptyObservableSet,

    #[error("invalid photon pattern: {0}")]
    InvalidPattern(String),

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("{module}: precondition violated: {message}")]
    Precondition { module: &'static str, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(module: &'static str, message: impl Into<String>) -> Self {
        Error::Precondition {
            module,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
