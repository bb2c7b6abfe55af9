use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid register shape: {0}")]
    Shape(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("state dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid gate target: {0}")]
    Target(String),
    #[error("matrix is not unitary (max |MM^dag - I| = {0:e})")]
    NonUnitary(f64),
    #[error("invalid amplitudes: {0}")]
    Amplitudes(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("gate set is not adjoint-closed: {0}")]
    NotAdjointClosed(String),
    #[error("adversary magnitude out of range: {0}")]
    Magnitude(String),
    #[error("protocol parameter constraint violated: {0}")]
    Constraint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("desk-scale limit exceeded: {0}")]
    DeskScale(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
