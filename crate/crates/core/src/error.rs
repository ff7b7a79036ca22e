use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("right division by the zero operator")]
    DivisorZero,
    #[error("least common left multiple of the zero operator")]
    OperandZero,
    #[error("element has {0} parts; split it by similarity class first")]
    MultiPartElement(usize),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("log-derivative vector of term `{term}` is not integrable in variables {a} and {b}")]
    NotIntegrable { term: String, a: usize, b: usize },
    #[error("log-derivative vector has {got} entries, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("variable index {0} is not a parameter variable")]
    NotAParameter(usize),
    #[error("no telescoper of order <= {0} found")]
    MaxOrderExceeded(usize),
    #[error("inputs are not compatible: D_{i}(f_{j}) != D_{j}(f_{i})")]
    NotCompatible { i: usize, j: usize },
    #[error("system is not compatible: d_{i}(f_{j}) != d_{j}(f_{i})")]
    IncompatibleSystem { i: usize, j: usize },
    #[error("compatibility across similarity classes violated for indices {i} and {j}")]
    CrossClassNonzero { i: usize, j: usize },
    #[error("telescoper coefficients depend on the parameters: {0}")]
    XFreenessViolated(String),
    #[error("no parallel telescoper exists")]
    NoParallelTelescoperExists,
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid problem: {0}")]
    Problem(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A mathematical negative answer.
    Negative,
    /// Malformed or inconsistent input.
    Input,
    /// A bug or a pathological input that tripped an internal guard.
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoParallelTelescoperExists => ErrorClass::Negative,
            Error::MaxOrderExceeded(_)
            | Error::XFreenessViolated(_)
            | Error::CrossClassNonzero { .. }
            | Error::InvariantBreach(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
