use thiserror::Error;

/// Errors raised by the algebraic and dynamical operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("family mismatch: {left} vs {right}")]
    FamilyMismatch { left: String, right: String },

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("{0} is not in the semigroup")]
    NotInSemigroup(String),

    #[error("semigroup is not right Ore in its group: {0}")]
    NotOre(String),

    #[error("point {0} is not in the space")]
    NotInSpace(String),

    #[error("undetermined: {what} (search bound {bound} exhausted)")]
    Undetermined { what: String, bound: usize },

    #[error("resource cap exceeded: {what} would exceed {cap} elements (raise GOID_MAX_BALL)")]
    ResourceCap { what: String, cap: usize },

    #[error("label {label} is not in Q at {point}")]
    NotInQ { point: String, label: String },

    #[error("arrows are not composable: {0}")]
    NotComposable(String),

    #[error("action is not by homeomorphisms: {0}")]
    NotHomeomorphism(String),

    #[error("arrow map does not preserve units: {0}")]
    NotUnitPreserving(String),

    #[error("unknown catalog name `{0}`")]
    UnknownName(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("action axiom `{axiom}` fails: {witness}")]
    Axiom { axiom: String, witness: String },

    #[error("certificate does not cover {0}")]
    Coverage(String),

    #[error("malformed certificate: {0}")]
    Malformed(String),

    #[error("verification failed: {0}")]
    CheckFailed(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
