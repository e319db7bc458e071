use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cap exceeded: {what} needs {requested}, limit is {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),

    #[error("matrix does not have rank 1 (rank {0})")]
    RankNotOne(usize),

    #[error("set is not multiplicatively closed: product of elements {left} and {right} escapes")]
    NotClosed { left: usize, right: usize },

    #[error("not a chain: {0}")]
    NotAChain(String),

    #[error("semigroup is not nilpotent of degree at least 2")]
    NotNilpotent,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("signature mismatch: {0:?} vs {1:?}")]
    SignatureMismatch(Vec<usize>, Vec<usize>),

    #[error("element is not in the context semigroup")]
    NotInContext,

    #[error("super rank is undefined for the zero element")]
    ZeroElement,

    #[error("bad signature {sig:?} for ambient dimension {n}")]
    BadSignature { sig: Vec<usize>, n: usize },

    #[error("k = {k} outside 1..n-1 for n = {n}")]
    BadK { k: usize, n: usize },

    #[error("family violates containment: line {line} lies in hyperplane {hyperplane}")]
    ContainmentViolation { line: String, hyperplane: String },

    #[error("subspace family is empty")]
    EmptyFamily,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, requested: u128, limit: u128) -> Result<()> {
    if requested > limit {
        Err(Error::CapExceeded {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}
