//! Value types for two-parameter information metrics.

use num_complex::Complex64;
use xy_core::QuenchKind;

/// Coordinate pair a two-parameter metric lives on. The first coordinate is
/// always the time elapsed since the quench; the second is the coupling the
/// metric differentiates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    /// (t, h): time and transverse field.
    TimeField,
    /// (t, gamma): time and anisotropy.
    TimeAnisotropy,
}

impl Coords {
    /// Display name of the non-time coordinate.
    pub fn param_label(&self) -> &'static str {
        match self {
            Self::TimeField => "h",
            Self::TimeAnisotropy => "gamma",
        }
    }

    /// The coordinate pair spanned by shifting the quenched coupling.
    pub fn for_quench(kind: QuenchKind) -> Self {
        match kind {
            QuenchKind::Transverse => Self::TimeField,
            QuenchKind::Anisotropic => Self::TimeAnisotropy,
        }
    }
}

/// Real symmetric metric at one point of the (t, x) plane, per site.
/// `x` stands for the coupling named by `coords`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric2D {
    pub coords: Coords,
    pub g_tt: f64,
    /// Off-diagonal component; the tensor is symmetric so a single value
    /// covers both positions.
    pub g_tx: f64,
    pub g_xx: f64,
}

impl Metric2D {
    pub fn zero(coords: Coords) -> Self {
        Self {
            coords,
            g_tt: 0.0,
            g_tx: 0.0,
            g_xx: 0.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.g_tt * self.g_xx - self.g_tx * self.g_tx
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mid = 0.5 * (self.g_tt + self.g_xx);
        let disc = (0.5 * (self.g_tt - self.g_xx)).hypot(self.g_tx);
        (mid - disc, mid + disc)
    }

    /// Sylvester test: both leading minors strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        self.g_tt > 0.0 && self.det() > 0.0
    }

    /// Squared line element `g_tt dt^2 + 2 g_tx dt dx + g_xx dx^2`.
    pub fn line_element_sq(&self, dt: f64, dx: f64) -> f64 {
        self.g_tt * dt * dt + 2.0 * self.g_tx * dt * dx + self.g_xx * dx * dx
    }
}

/// Metric of a two-branch superposition split into its ingredients: the
/// branch metrics, their statistical weights, and the averaged difference of
/// the branch Berry connections that couples them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricDecomposition {
    pub total: Metric2D,
    pub g_ground: Metric2D,
    pub g_excited: Metric2D,
    /// Brillouin-averaged `<d_i psi_g|psi_g> - <d_i psi_e|psi_e>`, ordered
    /// (t, x). Purely imaginary for normalized branches.
    pub berry_diff: [Complex64; 2],
    pub weight_ground: f64,
    pub weight_excited: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigenvalues_of_a_known_matrix() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let m = Metric2D {
            coords: Coords::TimeField,
            g_tt: 2.0,
            g_tx: 1.0,
            g_xx: 2.0,
        };
        let (lo, hi) = m.eigenvalues();
        assert_relative_eq!(lo, 1.0, epsilon = 1e-14);
        assert_relative_eq!(hi, 3.0, epsilon = 1e-14);
        assert!(m.is_positive_definite());
        assert_relative_eq!(m.det(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn indefinite_form_is_flagged() {
        let m = Metric2D {
            coords: Coords::TimeField,
            g_tt: 1.0,
            g_tx: 0.0,
            g_xx: -0.5,
        };
        assert!(!m.is_positive_definite());
        let (lo, _) = m.eigenvalues();
        assert!(lo < 0.0);
    }

    #[test]
    fn line_element_matches_quadratic_form() {
        let m = Metric2D {
            coords: Coords::TimeAnisotropy,
            g_tt: 0.3,
            g_tx: -0.1,
            g_xx: 0.7,
        };
        let v = m.line_element_sq(2.0, -1.0);
        assert_relative_eq!(v, 0.3 * 4.0 + 2.0 * (-0.1) * 2.0 * (-1.0) + 0.7, epsilon = 1e-14);
    }

    #[test]
    fn quench_kinds_pick_their_plane() {
        assert_eq!(Coords::for_quench(QuenchKind::Transverse), Coords::TimeField);
        assert_eq!(
            Coords::for_quench(QuenchKind::Anisotropic),
            Coords::TimeAnisotropy
        );
        assert_eq!(Coords::TimeField.param_label(), "h");
        assert_eq!(Coords::TimeAnisotropy.param_label(), "gamma");
    }
}
