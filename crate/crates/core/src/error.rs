use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("measure undefined on empty domain")]
    EmptyDomain,

    #[error("canonicalization limit exceeded: {size} elements, limit {limit}")]
    CanonLimit { size: usize, limit: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("free variable x{0} is not assigned")]
    UnassignedVariable(u32),

    #[error("tuple width {p} is below the largest free variable index {required}")]
    WidthTooSmall { p: usize, required: usize },

    #[error("invalid interpretation: {0}")]
    InvalidInterpretation(String),

    #[error("eta is not an equivalence relation on this structure: {0}")]
    NotEquivalence(String),

    #[error("rho for `{symbol}` is not eta-compatible on this structure: {witness}")]
    NotCompatible { symbol: String, witness: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("empty statistic set")]
    EmptySet,

    #[error("statistic decreased from level {0} to level {next}", next = .0 + 1)]
    DistanceDecreased(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Budget and size-limit failures, as opposed to malformed input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CanonLimit { .. } | Error::BudgetExceeded(_)
        )
    }

    pub fn is_validation(&self) -> bool {
        !self.is_limit() && !matches!(self, Error::Io(_))
    }
}
