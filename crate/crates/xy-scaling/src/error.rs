use thiserror::Error;
use xy_core::{CoreError, QuenchKind};
use xy_quench::QuenchError;

use crate::derive::LambdaSel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Quench(#[from] QuenchError),

    #[error("need at least {need} points for the fit, got {got}")]
    InsufficientData { got: usize, need: usize },

    #[error(
        "chain sizes must be strictly increasing odd values >= 101; \
         offending entry {n} at index {index}"
    )]
    InvalidSizes { index: usize, n: usize },

    #[error("distances to the transition must be finite and positive; entry {value} at index {index}")]
    InvalidDistance { index: usize, value: f64 },

    #[error("the derivative selector sweeps {selector:?} but the quench shifts {quench:?}")]
    SelectorMismatch {
        selector: LambdaSel,
        quench: QuenchKind,
    },
}
