use thiserror::Error;
use xy_metric::MetricError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("unknown metric field '{name}'; known fields: {known}")]
    UnknownField { name: String, known: String },
    #[error("cannot build metric field: {reason}")]
    InvalidField { reason: &'static str },
    #[error("metric is numerically singular at (t = {t}, x = {x}): det = {det:.3e}")]
    SingularMetric { t: f64, x: f64, det: f64 },
    #[error(
        "the unit-speed condition has no real time velocity at (t = {t}, x = {x}): \
         discriminant = {discriminant:.3e}"
    )]
    NoRealVelocity {
        t: f64,
        x: f64,
        discriminant: f64,
    },
    #[error(
        "the coupling does not vary monotonically along the geodesic: \
         monotone prefix holds {prefix_len} of {total} samples"
    )]
    NonMonotone { prefix_len: usize, total: usize },
    #[error("velocity normalization collapsed at tau = {tau}: g(v, v) = {norm:.3e}")]
    LostNormalization { tau: f64, norm: f64 },
    #[error("too few samples for inversion: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
}
