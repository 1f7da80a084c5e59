//! Core layer for the XY-chain complexity toolkit.
//!
//! The crate provides the single-mode spectrum of the anisotropic XY chain in
//! a transverse field, the momentum grids over which per-site quantities are
//! averaged (finite odd chains and the thermodynamic limit), and the numerical
//! primitives shared by every downstream crate: an adaptive Gauss-Kronrod
//! integrator and deterministic summation helpers.

pub mod error;
pub mod grid;
pub mod params;
pub mod quadrature;
pub mod spectrum;
pub mod sum;

pub use error::CoreError;
pub use grid::MomentumGrid;
pub use params::{ModelParams, QuenchKind, QuenchSpec};
pub use spectrum::{bogoliubov_angle, dispersion, GAP_FLOOR};
