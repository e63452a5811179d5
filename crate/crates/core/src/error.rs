use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("operation is only defined on the ambient model")]
    QuotientSpaceUnsupported,
    #[error("connection violates the Leibniz rule: {0}")]
    LeibnizViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("morphism is not closed")]
    NotClosed,
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: i32, got: i32 },
    #[error("backend is not finite dimensional over Q(i); exact computation refused")]
    InfiniteDimensionalBackend,
    #[error("gluing datum is not a homotopy equivalence")]
    NotHomotopyEquivalence,
    #[error("fixed-point map is not contractive: sup|rho0| = {0} >= 1")]
    NotContractive(f64),
    #[error("fixed-point iteration did not converge within {0} iterations")]
    MaxIterExceeded(usize),
    #[error("gauge g0 is singular: min |det| = {0}")]
    SingularGauge(f64),
    #[error("missing lower-order solution for multi-index {0:?}")]
    MissingLowerOrder(Vec<u32>),
    #[error("base dimension {0} is not supported")]
    UnsupportedDimension(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
