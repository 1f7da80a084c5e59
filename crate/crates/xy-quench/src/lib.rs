//! Dynamics of the transverse XY chain after a sudden quench: circuit
//! complexity of the evolved state, the Loschmidt echo, their closed-form
//! approximations at small and large times, and the momentum-space
//! modulation that controls the temporal oscillations.

pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod larget;
pub mod overlap;
pub mod series;

pub use dynamics::{loschmidt, nielsen_quench, time_series, Sampled, SeriesLabel, TimeSeries};
pub use envelope::{oscillation_envelope, Envelope};
pub use error::QuenchError;
pub use larget::{larget_limit, larget_series, time_average, LimitSeries};
pub use overlap::{modulation_profile, omega_angle, ModeProfile};
pub use series::{smalltime_series, SmallTimeValue};
