use alloc::string::String;

/// Errors raised by the algebraic and learning routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("algebra mismatch: `{left}` vs `{right}`")]
    AlgebraMismatch { left: String, right: String },
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("parameter list must not be empty")]
    EmptyParameterList,
    #[error("singular value decomposition did not converge after {0} sweeps")]
    ConvergenceFailure(usize),
    #[error("model has not been trained")]
    NotTrained,
    #[error("series of length {len} is too short for a window of {window}")]
    SeriesTooShort { len: usize, window: usize },
    #[error("algebra `{name}` has dimension {dim}, expected {expected}")]
    WrongAlgebraDim {
        name: String,
        dim: usize,
        expected: usize,
    },
    #[error("signal variance is zero")]
    DegenerateSignal,
    #[error("malformed data: {0}")]
    Format(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! shape_err {
    ($($arg:tt)*) => {
        $crate::error::Error::ShapeMismatch(alloc::format!($($arg)*))
    };
}
pub(crate) use shape_err;
