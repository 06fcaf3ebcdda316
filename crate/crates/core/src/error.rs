use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("exponent {exponent} is not invertible modulo {order}")]
    ExponentNotInvertible { exponent: u64, order: u64 },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("point is not a member of the set")]
    NotAMember,

    #[error("subspace dimension {dim} exceeds the supported maximum {max}")]
    Dimension { dim: usize, max: usize },

    #[error("{what}: {count} exceeds the enumeration limit {limit}; use a smaller field or dimension")]
    GuardExceeded {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("no prime congruent to 2 mod {modulus} in ({lower}, {upper}]")]
    SearchExhausted { modulus: u64, lower: u64, upper: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("solver not applicable: {0}")]
    SolverNotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by malformed input rather than by the mathematics of the
    /// instance.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::ModulusMismatch { .. }
                | Error::Parameter(_)
                | Error::Arity { .. }
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::NotPrime(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
