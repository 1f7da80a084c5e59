//! Time-dependent quantum information metric of the quenched XY chain.
//!
//! The evolved post-quench state traces a surface in the (time, coupling)
//! plane; this crate measures distances on that surface. [`qim_sum`] builds
//! the metric mode by mode from the quantum geometric tensor, [`qim_closed`]
//! evaluates the leading closed forms in the small- and large-time regimes,
//! [`qim_dephased`] averages the oscillatory terms out over a finite window,
//! and [`full_state_metric`] extends the construction to superpositions of
//! the ground and excited branches.

pub mod closed;
pub mod compose;
pub mod error;
pub mod qgt;
pub mod state;
pub mod tensor;

pub use closed::{qim_closed, Regime};
pub use compose::full_state_metric;
pub use error::MetricError;
pub use qgt::{
    ground_state_metric, qgt_mode, qim_dephased, qim_shift_piece, qim_sum, FD_STEP, STENCIL_TOL,
};
pub use state::{mode_state, ModeState};
pub use tensor::{Coords, Metric2D, MetricDecomposition};
