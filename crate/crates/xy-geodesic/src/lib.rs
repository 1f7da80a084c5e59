//! Geodesics on the two-dimensional information-metric manifold of the
//! quenched chain, and their inversion to the monotone map from coupling to
//! affine parameter.
//!
//! A [`MetricField`] supplies the metric over the (t, h) plane; variants
//! (closed small-time, closed dephased, mode-summed) are registered by name
//! in a [`FieldRegistry`] and selected at run time. [`geodesic_shoot`]
//! integrates the initial-value problem at unit speed, and [`HTauMap`]
//! inverts a monotone stretch of the trajectory with shape-preserving
//! cubics.

pub mod christoffel;
pub mod error;
pub mod field;
pub mod integrate;
pub mod invert;

pub use christoffel::{christoffel, METRIC_FD_STEP};
pub use error::GeodesicError;
pub use field::{
    Domain, FieldConfig, FieldRegistry, LargeTimeField, MetricField, NumericField,
    SmallTimeField, DET_FLOOR,
};
pub use integrate::{
    geodesic_shoot, shoot_many, DxInit, GeodesicSolution, Sample, ShootConfig, Terminal,
};
pub use invert::{tau_of_h, HTauMap};
