//! Finite-size scaling of complexity derivatives near the transition
//! lines of the XY chain: derivative measurement across chain lengths,
//! approach sweeps toward a transition, and law discrimination fits.

pub mod derive;
pub mod error;
pub mod fit;

pub use derive::{dcn_dparam, LambdaSel, TimeRegime, FD_STEP, LARGE_TIME_FACTOR, MIN_SIZE};
pub use error::ScalingError;
pub use fit::{fit_law, fit_size_scaling, CriticalApproach, Law, LawFit, ScalingRun, SizeFit};
