use thiserror::Error;
use xy_core::CoreError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(
        "d/d{param} stencil unhealthy at k = {k}: the refined estimate \
         disagrees by {disagreement:.3e} relative (tolerance {tolerance:.1e}); \
         the state varies below the step scale"
    )]
    DerivativeStencilFailure {
        param: &'static str,
        k: f64,
        disagreement: f64,
        tolerance: f64,
    },

    #[error("no closed form available: {what}")]
    Unsupported { what: &'static str },

    #[error("branch weights must satisfy |k_g|^2 + |k_e|^2 = 1, got {sum}")]
    InvalidWeights { sum: f64 },

    #[error("averaging window needs a positive period count, got {periods}")]
    InvalidWindow { periods: f64 },
}
