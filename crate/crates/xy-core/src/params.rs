use crate::error::CoreError;

/// Couplings of the anisotropic XY chain in a transverse field: the field `h`
/// and the anisotropy `gamma` of the nearest-neighbour XX/YY exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub h: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(h: f64, gamma: f64) -> Result<Self, CoreError> {
        if !h.is_finite() {
            return Err(CoreError::NonFinite {
                name: "h",
                value: h,
            });
        }
        if !gamma.is_finite() {
            return Err(CoreError::NonFinite {
                name: "gamma",
                value: gamma,
            });
        }
        Ok(Self { h, gamma })
    }

    /// True when the point lies on a zero-gap line of the phase diagram:
    /// the Ising lines |h| = 1 or the anisotropic segment gamma = 0, |h| <= 1.
    pub fn on_critical_line(&self, tol: f64) -> bool {
        (1.0 - self.h.abs()).abs() <= tol || (self.gamma.abs() <= tol && self.h.abs() <= 1.0 + tol)
    }
}

/// Which coupling a sudden quench shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuenchKind {
    /// Shift the transverse field: (h, gamma) -> (h + delta, gamma).
    Transverse,
    /// Shift the anisotropy: (h, gamma) -> (h, gamma + delta).
    Anisotropic,
}

/// A sudden quench: the shifted coupling and the shift size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    pub kind: QuenchKind,
    pub delta: f64,
}

impl QuenchSpec {
    pub fn new(kind: QuenchKind, delta: f64) -> Result<Self, CoreError> {
        if !delta.is_finite() {
            return Err(CoreError::NonFinite {
                name: "delta",
                value: delta,
            });
        }
        Ok(Self { kind, delta })
    }

    pub fn transverse(delta: f64) -> Result<Self, CoreError> {
        Self::new(QuenchKind::Transverse, delta)
    }

    pub fn anisotropic(delta: f64) -> Result<Self, CoreError> {
        Self::new(QuenchKind::Anisotropic, delta)
    }

    /// The post-quench couplings.
    pub fn shifted(&self, p: ModelParams) -> ModelParams {
        match self.kind {
            QuenchKind::Transverse => ModelParams {
                h: p.h + self.delta,
                gamma: p.gamma,
            },
            QuenchKind::Anisotropic => ModelParams {
                h: p.h,
                gamma: p.gamma + self.delta,
            },
        }
    }
}
