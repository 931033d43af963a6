//! Permittivity models, atomic polarizability and the skin-depth utility.
//!
//! Permittivities are primarily evaluated on the imaginary frequency axis
//! (`omega = i xi`), where they are real and >= 1 for the passive media
//! considered here. Real-axis evaluation exists only for the skin depth.

use crate::constants::{EPSILON_0, HBAR, MU_0};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    /// The Drude permittivity diverges at xi = 0; quadrature rules must
    /// use open rules that never sample the endpoint.
    #[error("Drude permittivity is singular at xi = 0")]
    DrudeZeroFrequency,
    #[error("conductivity must be positive, got {0} S/m")]
    NonPositiveConductivity(f64),
    #[error("invalid dielectric parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid atom parameter: {0}")]
    InvalidAtom(String),
}

/// Frequency-dependent relative permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DielectricModel {
    Vacuum,
    /// Dispersion-free dielectric with constant relative permittivity.
    Constant { eps: f64 },
    /// Drude metal, eps(omega) = 1 - omega_p^2 / (omega (omega + i gamma)).
    Drude { omega_p: f64, gamma: f64 },
}

impl DielectricModel {
    pub fn vacuum() -> Self {
        DielectricModel::Vacuum
    }

    pub fn constant(eps: f64) -> Result<Self, MaterialError> {
        if !(eps >= 1.0) {
            return Err(MaterialError::InvalidParameter(format!(
                "constant permittivity must be >= 1, got {eps}"
            )));
        }
        Ok(DielectricModel::Constant { eps })
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self, MaterialError> {
        if !(omega_p > 0.0) || !(gamma >= 0.0) {
            return Err(MaterialError::InvalidParameter(format!(
                "Drude parameters must satisfy omega_p > 0, gamma >= 0, got ({omega_p}, {gamma})"
            )));
        }
        Ok(DielectricModel::Drude { omega_p, gamma })
    }

    /// Relative permittivity at imaginary frequency `xi` [rad/s].
    ///
    /// Drude: eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma)), which is
    /// singular at xi = 0.
    pub fn permittivity_imag(&self, xi: f64) -> Result<f64, MaterialError> {
        match *self {
            DielectricModel::Vacuum => Ok(1.0),
            DielectricModel::Constant { eps } => Ok(eps),
            DielectricModel::Drude { omega_p, gamma } => {
                if xi <= 0.0 {
                    return Err(MaterialError::DrudeZeroFrequency);
                }
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
        }
    }

    /// Real part of the relative permittivity at real frequency `omega`.
    /// Used only by [`skin_depth`].
    pub fn permittivity_real(&self, omega: f64) -> f64 {
        match *self {
            DielectricModel::Vacuum => 1.0,
            DielectricModel::Constant { eps } => eps,
            DielectricModel::Drude { omega_p, gamma } => {
                1.0 - omega_p * omega_p / (omega * omega + gamma * gamma)
            }
        }
    }
}

/// Single-transition isotropic atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomModel {
    /// Transition dipole moment [C m].
    pub dipole_moment: f64,
    /// Transition angular frequency [rad/s].
    pub transition_frequency: f64,
    /// Atomic mass [kg].
    pub mass: f64,
}

impl AtomModel {
    pub fn new(dipole_moment: f64, transition_frequency: f64, mass: f64) -> Result<Self, MaterialError> {
        if !(dipole_moment > 0.0 && transition_frequency > 0.0 && mass > 0.0) {
            return Err(MaterialError::InvalidAtom(format!(
                "dipole moment, transition frequency and mass must all be positive, \
                 got ({dipole_moment}, {transition_frequency}, {mass})"
            )));
        }
        Ok(AtomModel {
            dipole_moment,
            transition_frequency,
            mass,
        })
    }

    /// Ground-state polarizability at imaginary frequency [C^2 m^2 / J]:
    /// alpha(i xi) = (2/3 hbar) omega_ij |mu_ij|^2 / (omega_ij^2 + xi^2).
    pub fn polarizability_imag(&self, xi: f64) -> f64 {
        let w = self.transition_frequency;
        let mu2 = self.dipole_moment * self.dipole_moment;
        2.0 / (3.0 * HBAR) * w * mu2 / (w * w + xi * xi)
    }

    /// Static polarizability alpha(0).
    pub fn static_polarizability(&self) -> f64 {
        self.polarizability_imag(0.0)
    }
}

/// Skin depth delta ~ 2 sqrt(eps_0 eps(omega) / mu_0) / sigma for a
/// non-magnetic conductor. Valid only for omega much larger than
/// eps(omega) eps_0 / sigma; that condition is the caller's to check.
pub fn skin_depth(model: &DielectricModel, sigma: f64, omega: f64) -> Result<f64, MaterialError> {
    if !(sigma > 0.0) {
        return Err(MaterialError::NonPositiveConductivity(sigma));
    }
    let eps = model.permittivity_real(omega);
    Ok(2.0 * (EPSILON_0 * eps / MU_0).sqrt() / sigma)
}
