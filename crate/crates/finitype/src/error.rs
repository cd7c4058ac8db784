use crate::ifs::IfsError;
use crate::numberfield::FieldError;
use crate::transitions::VectorGraph;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    /// The closure of characteristic vectors exceeded the configured cap.
    #[error("more than {limit} characteristic vectors; the IFS is probably not of finite type")]
    NotFiniteType {
        limit: usize,
        partial: Box<VectorGraph>,
    },
    /// A structural property guaranteed for finite type systems failed.
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("matrix dimensions do not chain: {left_cols} columns against {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
    #[error("loop class is not of positive type (no positive product of length ≤ {max_len})")]
    NotPositiveType { max_len: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid spec file: {0}")]
    Spec(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotFiniteType { .. } => 3,
            Error::ModelViolation(_) => 4,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(_) => "field",
            Error::Ifs(_) => "ifs",
            Error::NotFiniteType { .. } => "not_finite_type",
            Error::ModelViolation(_) => "model_violation",
            Error::InvalidPath(_) => "invalid_path",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotPositiveType { .. } => "not_positive_type",
            Error::Unsupported(_) => "unsupported",
            Error::Spec(_) => "invalid_spec",
        }
    }
}
