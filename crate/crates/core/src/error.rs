use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a value below the floor: {0:e}")]
    DivisionByZero(f64),
    #[error("degenerate normalization: denominator {0:e} below floor")]
    DegenerateNormalization(f64),
    #[error("point outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("degenerate locus: {0}")]
    DegenerateLocus(String),
    #[error("singular metric: determinant {0:e}")]
    SingularMetric(f64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not a simple root")]
    NotSimpleRoot(f64),
    #[error("{0} is not a double root")]
    NotDoubleRoot(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unrecognized multiplicity pattern (P: {p}, Q: {q}) at {endpoint}")]
    UnrecognizedMultiplicityPattern { endpoint: f64, p: usize, q: usize },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::DegenerateNormalization(_) => "DegenerateNormalization",
            Error::OutsideDomain(_) => "OutsideDomain",
            Error::DegenerateLocus(_) => "DegenerateLocus",
            Error::SingularMetric(_) => "SingularMetric",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotSimpleRoot(_) => "NotSimpleRoot",
            Error::NotDoubleRoot(_) => "NotDoubleRoot",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::UnrecognizedMultiplicityPattern { .. } => "UnrecognizedMultiplicityPattern",
            Error::NonConvergence(_) => "NonConvergence",
            Error::InvalidParams(_) => "InvalidParams",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
