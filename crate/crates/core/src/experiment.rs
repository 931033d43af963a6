//! Full force budget for the shielded-slab geometry, conversion of
//! forces to Bloch-oscillation observables and construction of the
//! exclusion boundary in the (lambda, alpha) plane.

use crate::casimir_polder::{cp_delta_force, cp_force, CpError, CpQuadratureSpec};
use crate::constants::HBAR;
use crate::materials::{AtomModel, DielectricModel};
use crate::multilayer::{Layer, LayerStack};
use crate::yukawa::{
    newton_force_cuboid, newton_force_sheet, yukawa_delta_force, yukawa_force_infinite_slab,
    Cuboid, YukawaBodyModel, YukawaError, YukawaParams,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error(transparent)]
    CasimirPolder(#[from] CpError),
    #[error(transparent)]
    Yukawa(#[from] YukawaError),
}

/// All lengths and densities of the layered setup. The atom sits a
/// distance `z` above the shield; the slab centre is then at
/// Z = d_vac + d_au + z + W/2.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentGeometry {
    /// Atom-shield gap [m].
    pub z: f64,
    /// Gold shield thickness [m].
    pub d_au: f64,
    /// Shield-slab vacuum gap [m].
    pub d_vac: f64,
    /// Slab thickness [m].
    pub slab_thickness: f64,
    /// Slab lateral side along x [m].
    pub slab_side_x: f64,
    /// Slab lateral side along y [m].
    pub slab_side_y: f64,
    /// Slab density [kg/m^3].
    pub rho_slab: f64,
    /// Shield density [kg/m^3].
    pub rho_shield: f64,
    /// Local gravitational acceleration [m/s^2].
    pub g: f64,
}

impl ExperimentGeometry {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fields = [
            ("z", self.z),
            ("d_au", self.d_au),
            ("d_vac", self.d_vac),
            ("slab_thickness", self.slab_thickness),
            ("slab_side_x", self.slab_side_x),
            ("slab_side_y", self.slab_side_y),
            ("rho_slab", self.rho_slab),
            ("rho_shield", self.rho_shield),
            ("g", self.g),
        ];
        for (name, v) in fields {
            if !(v > 0.0) {
                return Err(ExperimentError::InvalidGeometry(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Distance from the atom to the slab centre [m].
    pub fn slab_center_distance(&self) -> f64 {
        self.d_vac + self.d_au + self.z + self.slab_thickness / 2.0
    }

    /// Distance from the atom to the shield centre [m].
    pub fn shield_center_distance(&self) -> f64 {
        self.z + self.d_au / 2.0
    }

    pub fn slab_cuboid(&self) -> Cuboid {
        Cuboid::new(
            self.slab_side_x,
            self.slab_side_y,
            self.slab_thickness,
            self.rho_slab,
            self.slab_center_distance(),
        )
        .expect("validated geometry yields a valid cuboid")
    }
}

/// Gold and silicon response models used to build the layer stacks.
#[derive(Debug, Clone, Copy)]
pub struct MaterialSet {
    pub shield: DielectricModel,
    pub slab: DielectricModel,
}

impl MaterialSet {
    /// vacuum | shield(d_au) | vacuum(d_vac) | slab stack of the full
    /// setup.
    pub fn shielded_stack(&self, geom: &ExperimentGeometry) -> LayerStack {
        LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::Vacuum),
            Layer::finite(self.shield, geom.d_au).expect("d_au > 0"),
            Layer::finite(DielectricModel::Vacuum, geom.d_vac).expect("d_vac > 0"),
            Layer::semi_infinite(self.slab),
        ])
        .expect("valid four-layer stack")
    }

    /// Isolated shield, the d_vac -> infinity limit of the full stack.
    pub fn shield_only_stack(&self, geom: &ExperimentGeometry) -> LayerStack {
        LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::Vacuum),
            Layer::finite(self.shield, geom.d_au).expect("d_au > 0"),
            Layer::semi_infinite(DielectricModel::Vacuum),
        ])
        .expect("valid three-layer stack")
    }

    /// Bare slab half-space, used with the effective distance
    /// z + d_au + d_vac for the unshielded (eps_shield = 1) force.
    pub fn slab_half_space(&self) -> LayerStack {
        LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::Vacuum),
            Layer::semi_infinite(self.slab),
        ])
        .expect("valid two-layer stack")
    }

    /// Shield material as a half-space.
    pub fn shield_half_space(&self) -> LayerStack {
        LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::Vacuum),
            Layer::semi_infinite(self.shield),
        ])
        .expect("valid two-layer stack")
    }
}

/// One Table-style row: the force and its change when the slab is
/// retracted to infinity. Both in newtons, both attraction magnitudes.
#[derive(Debug, Clone, Copy, Default)]
pub struct ForceRow {
    pub force: f64,
    pub delta_force: f64,
}

/// Complete force budget of the setup for one geometry.
#[derive(Debug, Clone)]
pub struct ForceBudget {
    /// Yukawa force of the slab, one row per reference point.
    pub yukawa_slab: Vec<(YukawaParams, ForceRow)>,
    /// Yukawa force of the shield (delta is exactly zero).
    pub yukawa_shield: Vec<(YukawaParams, ForceRow)>,
    /// Casimir-Polder force with the shield in place.
    pub cp_shielded: ForceRow,
    /// Casimir-Polder force with the shield removed (eps_shield = 1).
    pub cp_unshielded: ForceRow,
    /// Newtonian force of the slab.
    pub newton_slab: ForceRow,
    /// Newtonian force of the shield (delta is exactly zero).
    pub newton_shield: ForceRow,
    /// Earth's gravity on the atom (delta is exactly zero).
    pub earth: ForceRow,
}

/// Slab model used for the Yukawa rows of the budget.
#[derive(Debug, Clone, Copy)]
pub enum SlabModel {
    InfiniteSlab,
    FiniteCuboid(crate::yukawa::CubatureSpec),
}

/// Populate every row of the force table for one geometry.
pub fn force_budget(
    geom: &ExperimentGeometry,
    atom: &AtomModel,
    materials: &MaterialSet,
    yukawa_points: &[YukawaParams],
    cp_spec: &CpQuadratureSpec,
    slab_model: SlabModel,
) -> Result<ForceBudget, ExperimentError> {
    geom.validate()?;
    let m = atom.mass;
    let cuboid = geom.slab_cuboid();

    let mut yukawa_slab = Vec::with_capacity(yukawa_points.len());
    let mut yukawa_shield = Vec::with_capacity(yukawa_points.len());
    for p in yukawa_points {
        let slab_force = match slab_model {
            SlabModel::InfiniteSlab => yukawa_delta_force(m, &cuboid, p, YukawaBodyModel::InfiniteSlab)?,
            SlabModel::FiniteCuboid(spec) => {
                yukawa_delta_force(m, &cuboid, p, YukawaBodyModel::Cuboid(spec))?
            }
        };
        yukawa_slab.push((
            *p,
            ForceRow {
                force: slab_force,
                delta_force: slab_force,
            },
        ));
        let shield_force = yukawa_force_infinite_slab(
            m,
            geom.rho_shield,
            geom.d_au,
            geom.shield_center_distance(),
            p,
        );
        yukawa_shield.push((
            *p,
            ForceRow {
                force: shield_force,
                delta_force: 0.0,
            },
        ));
    }

    let shielded = materials.shielded_stack(geom);
    let shield_only = materials.shield_only_stack(geom);
    let cp = cp_force(atom, &shielded, geom.z, cp_spec)?;
    let cp_delta = cp_delta_force(atom, &shielded, &shield_only, geom.z, cp_spec)?;

    let bare = materials.slab_half_space();
    let z_eff = geom.z + geom.d_au + geom.d_vac;
    let cp_bare = cp_force(atom, &bare, z_eff, cp_spec)?;

    Ok(ForceBudget {
        yukawa_slab,
        yukawa_shield,
        cp_shielded: ForceRow {
            force: cp.value,
            delta_force: cp_delta.value,
        },
        cp_unshielded: ForceRow {
            force: cp_bare.value,
            // with no shield, retracting the slab removes everything
            delta_force: cp_bare.value,
        },
        newton_slab: ForceRow {
            force: newton_force_cuboid(m, &cuboid),
            delta_force: newton_force_cuboid(m, &cuboid),
        },
        newton_shield: ForceRow {
            force: newton_force_sheet(m, geom.rho_shield, geom.d_au),
            delta_force: 0.0,
        },
        earth: ForceRow {
            force: m * geom.g,
            delta_force: 0.0,
        },
    })
}

/// Optical lattice parameters for the Bloch-oscillation observables.
#[derive(Debug, Clone, Copy)]
pub struct LatticeSpec {
    /// Lattice period [m].
    pub spacing: f64,
    /// Laser wavenumber [rad/m].
    pub laser_wavenumber: f64,
    /// Lattice depth in recoil energies.
    pub depth_in_recoils: f64,
    /// First-band width as a fraction of the recoil energy.
    pub bandwidth_fraction: f64,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        // 500 nm period; the wavenumber matches the quoted recoil
        // energy rather than the retro-reflection relation, which the
        // two fields leave independently configurable
        LatticeSpec {
            spacing: 500e-9,
            laser_wavenumber: 2.0 * std::f64::consts::PI / 500e-9,
            depth_in_recoils: 5.0,
            bandwidth_fraction: 0.26,
        }
    }
}

/// Bloch frequency nu_B = F a / (2 pi hbar) [Hz].
pub fn bloch_frequency(force: f64, lattice: &LatticeSpec) -> f64 {
    force * lattice.spacing / (2.0 * std::f64::consts::PI * HBAR)
}

/// Frequency shift between two slab positions [Hz], signed.
pub fn bloch_frequency_shift(force_initial: f64, force_final: f64, lattice: &LatticeSpec) -> f64 {
    bloch_frequency(force_final - force_initial, lattice)
}

/// Force [N] producing a given Bloch frequency; inverse of
/// [`bloch_frequency`].
pub fn force_for_bloch_frequency(nu: f64, lattice: &LatticeSpec) -> f64 {
    2.0 * std::f64::consts::PI * HBAR * nu / lattice.spacing
}

/// Recoil energy E_R = hbar^2 k_L^2 / (2 m) [J].
pub fn recoil_energy(lattice: &LatticeSpec, mass: f64) -> f64 {
    let hk = HBAR * lattice.laser_wavenumber;
    hk * hk / (2.0 * mass)
}

/// Wannier-Stark localisation width w = W_band / (2 F) [m].
pub fn wannier_stark_width(lattice: &LatticeSpec, mass: f64, force: f64) -> f64 {
    debug_assert!(force > 0.0);
    lattice.bandwidth_fraction * recoil_energy(lattice, mass) / (2.0 * force)
}

/// Detection criterion separating distinguishable Yukawa parameters.
#[derive(Debug, Clone, Copy)]
pub enum ExclusionCriterion {
    /// Yukawa delta must exceed the Casimir-Polder delta, with or
    /// without the shield in place.
    CpDelta { shielded: bool },
    /// Yukawa delta must exceed a fixed instrument sensitivity [N].
    FixedForce(f64),
}

/// One point of the exclusion boundary.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub lambda: f64,
    pub alpha: f64,
}

/// Criterion force [N] used on the right-hand side of the boundary
/// equation for a given geometry.
pub fn criterion_force(
    geom: &ExperimentGeometry,
    atom: &AtomModel,
    materials: &MaterialSet,
    criterion: ExclusionCriterion,
    cp_spec: &CpQuadratureSpec,
) -> Result<f64, ExperimentError> {
    match criterion {
        ExclusionCriterion::FixedForce(f0) => Ok(f0),
        ExclusionCriterion::CpDelta { shielded: true } => {
            let with = materials.shielded_stack(geom);
            let without = materials.shield_only_stack(geom);
            let d = cp_delta_force(atom, &with, &without, geom.z, cp_spec)?;
            Ok(d.value.abs())
        }
        ExclusionCriterion::CpDelta { shielded: false } => {
            let bare = materials.slab_half_space();
            let z_eff = geom.z + geom.d_au + geom.d_vac;
            let f = cp_force(atom, &bare, z_eff, cp_spec)?;
            Ok(f.value.abs())
        }
    }
}

/// Boundary alpha(lambda) above which the Yukawa force change exceeds
/// the criterion force. The slab delta is linear in alpha, so each
/// point is the exact ratio criterion / delta(alpha = 1). Grid points
/// where the unit-alpha delta underflows are omitted.
pub fn exclusion_boundary(
    geom: &ExperimentGeometry,
    atom: &AtomModel,
    materials: &MaterialSet,
    lambda_grid: &[f64],
    criterion: ExclusionCriterion,
    cp_spec: &CpQuadratureSpec,
) -> Result<Vec<BoundaryPoint>, ExperimentError> {
    geom.validate()?;
    let threshold = criterion_force(geom, atom, materials, criterion, cp_spec)?;
    let z_center = geom.slab_center_distance();
    let mut boundary = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let unit = YukawaParams::new(1.0, lambda)?;
        let f_unit = yukawa_force_infinite_slab(
            atom.mass,
            geom.rho_slab,
            geom.slab_thickness,
            z_center,
            &unit,
        );
        if !(f_unit > f64::MIN_POSITIVE) {
            // lambda far below the geometry scales; exponent underflows
            continue;
        }
        boundary.push(BoundaryPoint {
            lambda,
            alpha: threshold / f_unit,
        });
    }
    Ok(boundary)
}

/// Default 60-point log-spaced lambda grid over [0.05, 50] um.
pub fn default_lambda_grid() -> Vec<f64> {
    log_spaced_grid(0.05e-6, 50e-6, 60)
}

pub fn log_spaced_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(min > 0.0 && max > min && n >= 2);
    let (la, lb) = (min.ln(), max.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
