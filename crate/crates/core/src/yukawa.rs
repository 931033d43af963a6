//! Yukawa and Newtonian forces: point-pair potential, exact
//! infinite-slab force, finite-cuboid force by adaptive cubature and the
//! simple Newtonian estimates.
//!
//! The pair potential is written without an overall minus sign, as
//! U_Y(r) = (G M m / r)(1 + alpha e^(-r/lambda)); all forces reported
//! here are attraction magnitudes (positive for alpha > 0, directed
//! toward the source body).
//!
//! The cuboid force integrates only the alpha-proportional Yukawa term
//! of the volume integrand. The lateral integral is taken in polar
//! coordinates around the foot of the atom's perpendicular; there the
//! radial part has the exact antiderivative
//! d/ds[-lambda e^(-s/lambda)/s] = (s+lambda) e^(-s/lambda)/s^2 with
//! s = sqrt(r^2 + dz^2), so only the angular and depth integrals are
//! done numerically (adaptively, with the depth coordinate outermost).

use crate::constants::G_NEWTON;
use crate::quad::{adaptive_gk, QuadResult};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum YukawaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cubature did not converge: best estimate {value:e} with error bound {error:e}")]
    NonConvergence { value: f64, error: f64 },
}

/// One point of the (alpha, lambda) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YukawaParams {
    /// Dimensionless strength.
    pub alpha: f64,
    /// Range [m].
    pub lambda: f64,
}

impl YukawaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self, YukawaError> {
        if !(lambda > 0.0) {
            return Err(YukawaError::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(YukawaParams { alpha, lambda })
    }
}

/// Rectangular slab source seen from a point on its lateral symmetry
/// axis.
#[derive(Debug, Clone, Copy)]
pub struct Cuboid {
    /// Lateral side along x [m].
    pub side_x: f64,
    /// Lateral side along y [m].
    pub side_y: f64,
    /// Thickness along the symmetry axis [m].
    pub thickness: f64,
    /// Mass density [kg/m^3].
    pub density: f64,
    /// Distance from the atom to the cuboid centre [m].
    pub center_distance: f64,
}

impl Cuboid {
    pub fn new(
        side_x: f64,
        side_y: f64,
        thickness: f64,
        density: f64,
        center_distance: f64,
    ) -> Result<Self, YukawaError> {
        if !(side_x > 0.0 && side_y > 0.0 && thickness > 0.0 && density >= 0.0) {
            return Err(YukawaError::InvalidParameter(format!(
                "cuboid dimensions must be positive, got ({side_x}, {side_y}, {thickness}, {density})"
            )));
        }
        if !(center_distance > thickness / 2.0) {
            return Err(YukawaError::InvalidParameter(format!(
                "atom must lie outside the body: need Z > W/2, got Z = {center_distance}, W = {thickness}"
            )));
        }
        Ok(Cuboid {
            side_x,
            side_y,
            thickness,
            density,
            center_distance,
        })
    }
}

/// Cubature tolerances for [`yukawa_force_cuboid`].
#[derive(Debug, Clone, Copy)]
pub struct CubatureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for CubatureSpec {
    fn default() -> Self {
        CubatureSpec {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 200,
        }
    }
}

/// Pair potential U_Y(r) = (G M m / r)(1 + alpha e^(-r/lambda)) [J].
pub fn yukawa_pair_potential(mass_a: f64, mass_b: f64, r: f64, p: &YukawaParams) -> f64 {
    debug_assert!(r > 0.0);
    G_NEWTON * mass_a * mass_b / r * (1.0 + p.alpha * (-r / p.lambda).exp())
}

/// Exact Yukawa force [N] of an infinite slab of thickness `w` whose
/// centre lies a distance `z_center` from the atom:
/// F = 4 pi alpha G lambda m rho e^(-Z/lambda) sinh(W / 2 lambda).
pub fn yukawa_force_infinite_slab(
    atom_mass: f64,
    density: f64,
    w: f64,
    z_center: f64,
    p: &YukawaParams,
) -> f64 {
    debug_assert!(z_center > w / 2.0);
    4.0 * std::f64::consts::PI
        * p.alpha
        * G_NEWTON
        * p.lambda
        * atom_mass
        * density
        * (-z_center / p.lambda).exp()
        * (w / (2.0 * p.lambda)).sinh()
}

/// Radial antiderivative of the lateral Yukawa integrand,
/// P(s) = -lambda e^(-s/lambda) / s.
fn radial_primitive(s: f64, lambda: f64) -> f64 {
    -lambda * (-s / lambda).exp() / s
}

/// Axial Yukawa force [N] of a finite cuboid, by adaptive integration
/// over depth (outer) and lateral polar angle (inner); the radial
/// integral is closed-form. Only the alpha-proportional term enters.
pub fn yukawa_force_cuboid(
    atom_mass: f64,
    cuboid: &Cuboid,
    p: &YukawaParams,
    spec: &CubatureSpec,
) -> Result<QuadResult, YukawaError> {
    if p.alpha == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        });
    }

    let hx = cuboid.side_x / 2.0;
    let hy = cuboid.side_y / 2.0;
    let half_w = cuboid.thickness / 2.0;
    let z0 = cuboid.center_distance;
    let lambda = p.lambda;
    let theta_split = (hy / hx).atan();
    let inner_rel = spec.rel_tol * 0.1;
    let mut evaluations = 0usize;
    let mut inner_ok = true;

    // lateral integral over the rectangle at fixed perpendicular
    // distance dz, in the quarter-plane times four
    let mut lateral = |dz: f64| {
        let p_near = radial_primitive(dz, lambda);
        let mut angular = |theta: f64| {
            let r_max = if theta <= theta_split {
                hx / theta.cos()
            } else {
                hy / theta.sin()
            };
            let s_max = (r_max * r_max + dz * dz).sqrt();
            radial_primitive(s_max, lambda) - p_near
        };
        let r = adaptive_gk(
            &mut angular,
            0.0,
            std::f64::consts::FRAC_PI_2,
            inner_rel,
            0.0,
            spec.max_subdivisions,
        );
        evaluations += r.evaluations;
        inner_ok &= r.converged;
        4.0 * r.value
    };

    let mut depth_integrand = |z_slab: f64| {
        let dz = z0 - z_slab;
        dz * lateral(dz)
    };
    let scale = G_NEWTON * atom_mass * cuboid.density * p.alpha / lambda;
    let outer = adaptive_gk(
        &mut depth_integrand,
        -half_w,
        half_w,
        spec.rel_tol,
        spec.abs_tol / scale.abs().max(f64::MIN_POSITIVE),
        spec.max_subdivisions,
    );

    let value = scale * outer.value;
    let error = scale.abs() * outer.error;
    if !outer.converged || !inner_ok {
        return Err(YukawaError::NonConvergence { value, error });
    }
    Ok(QuadResult {
        value,
        error,
        evaluations: evaluations + outer.evaluations,
        converged: true,
    })
}

/// Far-field Newtonian force [N] of the cuboid treated as a point mass:
/// G a b W rho m / Z^2.
pub fn newton_force_cuboid(atom_mass: f64, c: &Cuboid) -> f64 {
    G_NEWTON * c.side_x * c.side_y * c.thickness * c.density * atom_mass
        / (c.center_distance * c.center_distance)
}

/// Distance-independent Newtonian force [N] of an infinite sheet of
/// thickness `d`: 2 pi G rho d m.
pub fn newton_force_sheet(atom_mass: f64, density: f64, d: f64) -> f64 {
    debug_assert!(d >= 0.0);
    2.0 * std::f64::consts::PI * G_NEWTON * density * d * atom_mass
}

/// Source-body model for [`yukawa_delta_force`].
#[derive(Debug, Clone, Copy)]
pub enum YukawaBodyModel {
    InfiniteSlab,
    Cuboid(CubatureSpec),
}

/// Change in Yukawa force when the slab is retracted to infinity. The
/// retraction removes the slab force entirely, so the delta equals the
/// force itself; the shield's own term cancels in the difference.
pub fn yukawa_delta_force(
    atom_mass: f64,
    cuboid: &Cuboid,
    p: &YukawaParams,
    mode: YukawaBodyModel,
) -> Result<f64, YukawaError> {
    match mode {
        YukawaBodyModel::InfiniteSlab => Ok(yukawa_force_infinite_slab(
            atom_mass,
            cuboid.density,
            cuboid.thickness,
            cuboid.center_distance,
            p,
        )),
        YukawaBodyModel::Cuboid(spec) => {
            yukawa_force_cuboid(atom_mass, cuboid, p, &spec).map(|r| r.value)
        }
    }
}
