use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("non-integer exponent at offset {offset}")]
    NonIntegerExponent { offset: usize },
    #[error("expression is not rational (contains a function application)")]
    NonRational,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("substitution makes the denominator vanish identically")]
    IdenticallySingular,
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristic factor `{factor}` has a root that is not a scaled root of unity")]
    NonCyclotomicRoot { factor: String },
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
    #[error("inconsistent assumptions: {0}")]
    InconsistentAssumptions(String),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("log transform is not rational: {0}")]
    NotLogLinear(String),
    #[error("generator degree {degree} exceeds the configured maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("symbolic verification needs periodic coefficient sequences")]
    Aperiodic,
    #[error("every sample point was singular")]
    AllSamplesSingular,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported generator family: {0}")]
    UnsupportedFamily(String),
    #[error("invariant does not reduce the equation: {0}")]
    NotClosed(String),
    #[error("singular initial data: {0}")]
    SingularInitialData(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
