use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field strength must be finite and positive, got {0}")]
    InvalidField(f64),

    #[error("states live in different magnetic fields (b = {left} vs b = {right})")]
    IncompatibleFields { left: f64, right: f64 },

    #[error("operator index must be 1 or 2, got {0}")]
    InvalidIndex(usize),

    #[error("operation requires a nonzero state")]
    ZeroState,

    #[error("ladder degree {requested} exceeds the supported cap {cap}")]
    DegreeCap { requested: usize, cap: usize },

    #[error("state is not in the lowest Landau level span (residual norm {residual:e})")]
    OutsideLowestLevel { residual: f64 },

    #[error("Gram matrix is numerically singular (smallest eigenvalue {lambda_min:e})")]
    SingularGram { lambda_min: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix must be square and nonempty, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
