use std::fmt;

/// Every failure the toolkit can report.
///
/// [`Error::code`] gives the stable name printed by the CLI as `error=<Code>`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient span")]
    NotContained,
    #[error("map is not compatible with the given cocycle/coboundary spaces ({0})")]
    NotChainCompatible(&'static str),
    #[error("unknown cell id `{0}`")]
    UnknownId(String),
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("selection is not closed under taking faces: `{0}` has an unselected face")]
    NotBoundaryClosed(String),
    #[error("boundary of boundary is nonzero in {} place(s)", .0.len())]
    InvalidComplex(Vec<Violation>),
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("no weight given for cell `{0}`")]
    MissingWeight(String),
    #[error("weight for cell `{0}` is not positive")]
    NonPositiveWeight(String),
    #[error("weights are not symmetric under the involution at cell `{0}`")]
    AsymmetricWeights(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("group average is not an integer: {0}")]
    NonIntegerAverage(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("end is parabolic; no end contribution formula applies")]
    ParabolicEnd,
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("complex was not produced as an end model")]
    NotAnEndModel,
    #[error("{0}")]
    Parse(ParseError),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch { .. } => "DimMismatch",
            Error::NotContained => "NotContained",
            Error::NotChainCompatible(_) => "NotChainCompatible",
            Error::UnknownId(_) => "UnknownId",
            Error::DuplicateId(_) => "DuplicateId",
            Error::NotBoundaryClosed(_) => "NotBoundaryClosed",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::MissingWeight(_) => "MissingWeight",
            Error::NonPositiveWeight(_) => "NonPositiveWeight",
            Error::AsymmetricWeights(_) => "AsymmetricWeights",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::CapExceeded(_) => "CapExceeded",
            Error::NonIntegerAverage(_) => "NonIntegerAverage",
            Error::Inconsistent(_) => "Inconsistent",
            Error::ParabolicEnd => "ParabolicEnd",
            Error::OddDimension(_) => "OddDimension",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::NotAnEndModel => "NotAnEndModel",
            Error::Parse(_) => "ParseError",
        }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

/// A `D_{k-1} D_k != 0` failure: column `column` of `D_k` (a k-cell) has a
/// boundary whose boundary does not cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub dim: usize,
    pub column: String,
}

/// Malformed text input, located by line number (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
