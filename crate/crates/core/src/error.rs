use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion is not unit length (|q| = {0})")]
    NotUnit(f64),
    #[error("frame is not orthonormal (Gram deviation {0:e})")]
    NonOrthonormalFrame(f64),
    #[error("frame is left-handed")]
    LeftHandedFrame,
    #[error("vector is not tangent to S3xS3 (deviation {0:e})")]
    NotTangent(f64),
    #[error("tangent vectors live at different base points")]
    BaseMismatch,
    #[error("curve has zero speed")]
    ZeroSpeedCurve,
    #[error("integration step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("conserved sum alpha + beta vanishes")]
    ZeroC1,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
