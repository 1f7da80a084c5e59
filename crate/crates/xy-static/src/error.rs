use thiserror::Error;
use xy_core::CoreError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StaticError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("the defect construction needs a non-negative shift, got delta = {delta}")]
    NegativeDelta { delta: f64 },

    #[error("map resolution must be at least 2 per axis, got {nh} x {ngamma}")]
    InvalidResolution { nh: usize, ngamma: usize },
}
