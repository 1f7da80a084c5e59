//! Ground-state circuit complexity of the XY chain.
//!
//! The optimal-circuit cost between the ground states at two coupling points
//! reduces, mode by mode, to the squared half-difference of the Bogoliubov
//! angles; the per-site complexity is its Brillouin-zone average. This crate
//! provides that exact average, its closed-form expansions in a small
//! coupling shift, and the triangle-inequality defect obtained by routing
//! the shift through an intermediate coupling point.

pub mod error;
pub mod exact;
pub mod series;
pub mod triangle;

pub use error::StaticError;
pub use exact::nielsen_static;
pub use series::{nielsen_series, Direction, SeriesValue};
pub use triangle::{triangle_defect, triangle_map, LegOrder, TriangleMap};
