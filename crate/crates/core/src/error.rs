use thiserror::Error;

/// Failures raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("gamma ratio diverges: {0}")]
    Pole(String),

    #[error("value at eps = 0 diverges (pole of order {order})")]
    EpsPole { order: usize },

    #[error("degenerate family: Lambda({n}) = 0")]
    Degenerate { n: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("polynomial is not invariant under x -> -x-a-b-1")]
    NotThetaPolynomial,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("cannot parse `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
