use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient mismatch: A({0:?}) vs A({1:?})")]
    AmbientMismatch(Option<u32>, Option<u32>),
    #[error("out of ambient: {0}")]
    OutOfAmbient(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("algebra is not closed under the coproduct, so modules have no diagonal action")]
    NoDiagonalAction,
    #[error("algebra has no one-dimensional top degree")]
    NotFrobenius,
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("isomorphism search budget exceeded")]
    Indeterminate,
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(String),
}
