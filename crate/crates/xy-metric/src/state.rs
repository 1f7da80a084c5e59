//! The evolved wavefunction of one momentum mode, with enough structure to
//! differentiate it.
//!
//! Each (k, -k) pair of the chain lives in a two-dimensional space spanned by
//! the pair vacuum |00> and the doubly occupied state |11>. The pre-quench
//! ground state, re-expanded in the post-quench eigenbasis, precesses between
//! the quenched ground state |G> and its two-quasiparticle partner |E>:
//!
//!   psi_k(t) = e^{-i e~_k t} [cos(Omega_k) |G> - i sin(Omega_k) e^{-2i e~_k t} |E>]
//!
//! with |G> = (cos(th~/2), -i sin(th~/2)) and |E> = (-i sin(th~/2), cos(th~/2))
//! in the fixed basis, th~ the post-quench Bogoliubov angle and Omega_k half
//! the angle mismatch across the quench. Time derivatives only touch the
//! phase factors, so they are carried analytically.

use num_complex::Complex64;

use crate::error::MetricError;
use crate::tensor::Coords;
use xy_core::{bogoliubov_angle, dispersion, CoreError, ModelParams, QuenchSpec};

/// Amplitudes of one mode in the fixed {|00>, |11>} basis.
pub(crate) type Amps = [Complex64; 2];

/// Inner product `<a|b>` over the two-dimensional mode space.
pub(crate) fn inner(a: &Amps, b: &Amps) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Wavefunction of one (k, -k) pair in the fixed {|00>, |11>} basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub a00: Complex64,
    pub a11: Complex64,
}

impl ModeState {
    pub fn norm_sq(&self) -> f64 {
        self.a00.norm_sqr() + self.a11.norm_sqr()
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &ModeState) -> Complex64 {
        self.a00.conj() * other.a00 + self.a11.conj() * other.a11
    }
}

/// Which chain history a central-spin branch drags along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branch {
    /// The couplings never shift; the initial ground state only accumulates
    /// a dynamical phase.
    Ground,
    /// The couplings shift suddenly at t = 0; the initial ground state
    /// precesses in the post-quench eigenbasis.
    Excited,
}

fn check_time(t: f64) -> Result<(), MetricError> {
    if !t.is_finite() {
        return Err(CoreError::NonFinite {
            name: "t",
            value: t,
        }
        .into());
    }
    Ok(())
}

/// Amplitudes and their analytic time derivative for one branch.
pub(crate) fn branch_amplitudes(
    k: f64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
    branch: Branch,
) -> Result<(Amps, Amps), MetricError> {
    check_time(t)?;
    let minus_i = Complex64::new(0.0, -1.0);
    match branch {
        Branch::Ground => {
            let th = bogoliubov_angle(k, p)?;
            let e = dispersion(k, p);
            let phase = Complex64::from_polar(1.0, -e * t);
            let psi = [
                phase * (0.5 * th).cos(),
                minus_i * phase * (0.5 * th).sin(),
            ];
            let rate = minus_i * e;
            Ok((psi, [rate * psi[0], rate * psi[1]]))
        }
        Branch::Excited => {
            let th = bogoliubov_angle(k, p)?;
            let shifted = q.shifted(p);
            let th_q = bogoliubov_angle(k, shifted)?;
            let e_q = dispersion(k, shifted);
            let omega = 0.5 * (th - th_q);
            let (half_sin, half_cos) = (0.5 * th_q).sin_cos();
            let ca = omega.cos() * half_cos;
            let cb = -omega.sin() * half_sin;
            let cc = omega.cos() * half_sin;
            let cd = omega.sin() * half_cos;
            let ph1 = Complex64::from_polar(1.0, -e_q * t);
            let ph3 = Complex64::from_polar(1.0, -3.0 * e_q * t);
            let dph1 = minus_i * e_q * ph1;
            let dph3 = minus_i * 3.0 * e_q * ph3;
            let psi = [ca * ph1 + cb * ph3, minus_i * (cc * ph1 + cd * ph3)];
            let dpsi = [ca * dph1 + cb * dph3, minus_i * (cc * dph1 + cd * dph3)];
            Ok((psi, dpsi))
        }
    }
}

/// Shifts the coupling selected by `coords` while keeping the quench size
/// fixed, so parameter derivatives move the pre- and post-quench points
/// together.
pub(crate) fn nudged(p: ModelParams, coords: Coords, shift: f64) -> ModelParams {
    match coords {
        Coords::TimeField => ModelParams {
            h: p.h + shift,
            ..p
        },
        Coords::TimeAnisotropy => ModelParams {
            gamma: p.gamma + shift,
            ..p
        },
    }
}

/// The evolved post-quench mode wavefunction at momentum `k`.
pub fn mode_state(
    k: f64,
    p: ModelParams,
    q: QuenchSpec,
    t: f64,
) -> Result<ModeState, MetricError> {
    let (psi, _) = branch_amplitudes(k, p, q, t, Branch::Excited)?;
    Ok(ModeState {
        a00: psi[0],
        a11: psi[1],
    })
}
