use thiserror::Error;

pub type Result<T> = std::result::Result<T, ConeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("{location} is not finite")]
    NonFinite { location: String },

    #[error("{location} is negative ({value})")]
    Negative { location: String, value: f64 },

    #[error("instance has no generators")]
    NoGenerators,

    #[error("every generator is the zero vector")]
    AllGeneratorsZero,

    #[error("target is the zero vector")]
    ZeroTarget,

    #[error("vector has no positive inner product with the target ({inner_product})")]
    NotLiftable { inner_product: f64 },

    #[error("cannot scale back the zero vector")]
    ZeroPoint,

    #[error("point is off the slice: relative residual {residual:e} exceeds {tolerance:e}")]
    OffSlice { residual: f64, tolerance: f64 },

    #[error("target is unreachable: every generator is orthogonal to it")]
    Unreachable,

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapacityExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub(crate) fn check_dim(context: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(ConeError::DimensionMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}
