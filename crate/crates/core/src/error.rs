use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The spec itself is malformed: dangling labels, missing units, duplicates.
    #[error("malformed spec: {0}")]
    Structural(String),
    /// Endpoints of two cells do not compose.
    #[error("composition error: {0}")]
    Composition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A construction parameter is out of range (e.g. δ < 2).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An enumeration window was too small for the requested computation.
    #[error("bound error: {0}")]
    Bound(String),
    #[error("unknown {kind} `{label}`")]
    Lookup { kind: &'static str, label: String },
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error("star component does not extend to a natural transformation: {0}")]
    NonExtendable(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// Representation-level validation (homomorphism, unitarity, irreducibility).
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unsupported factor: {0}")]
    UnsupportedFactor(String),
}

impl Error {
    pub(crate) fn lookup(kind: &'static str, label: impl Into<String>) -> Self {
        Error::Lookup { kind, label: label.into() }
    }
}
