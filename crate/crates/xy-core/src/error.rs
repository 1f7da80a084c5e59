use thiserror::Error;

/// Errors produced by the core spectrum and averaging primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// The single-mode gap closed at a momentum that had to be evaluated.
    #[error("gapless mode at k = {k}: dispersion vanishes for h = {h}, gamma = {gamma}")]
    GaplessMode { k: f64, h: f64, gamma: f64 },

    /// The adaptive integrator exhausted its subdivision budget before
    /// reaching the requested tolerance.
    #[error(
        "quadrature did not converge: error estimate {achieved:.3e} above tolerance \
         {requested:.3e} after {subdivisions} subdivisions"
    )]
    QuadratureFailure {
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// A chain length that cannot carry the paired-momentum construction.
    #[error("invalid chain length {n}: need an odd number of sites >= 3")]
    InvalidChainLength { n: usize },

    /// A non-finite model parameter.
    #[error("non-finite parameter: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },
}
