use thiserror::Error;
use xy_core::CoreError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuenchError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("time must be finite and non-negative, got t = {t}")]
    InvalidTime { t: f64 },

    #[error("sampling step must be finite and positive, got {step}")]
    InvalidStep { step: f64 },

    #[error("times must be strictly increasing; violation at index {index}")]
    NonMonotonicTimes { index: usize },

    #[error(
        "window [{start}, {end}] is too short: need more than {min_length} \
         to resolve the oscillations"
    )]
    InvalidWindow {
        start: f64,
        end: f64,
        min_length: f64,
    },

    #[error(
        "the infinite-time limit is ill-defined for a quenched field of \
         {quenched_field}: dephasing fails at 0 and on the Ising lines"
    )]
    InvalidLimit { quenched_field: f64 },

    #[error("no closed form available: {what}")]
    Unsupported { what: &'static str },
}
