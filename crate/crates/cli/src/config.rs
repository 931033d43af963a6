//! Run configuration: a single TOML file with nested sections, every
//! field optional with the documented defaults (rubidium atom, gold
//! shield, silicon slab). CLI flags override file values.

use cpshield::casimir_polder::CpQuadratureSpec;
use cpshield::experiment::{ExperimentGeometry, LatticeSpec, MaterialSet};
use cpshield::materials::{AtomModel, DielectricModel};
use cpshield::yukawa::{CubatureSpec, YukawaParams};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub atom: AtomConfig,
    #[serde(default)]
    pub materials: MaterialsConfig,
    #[serde(default)]
    pub lattice: LatticeConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub yukawa_points: Option<Vec<YukawaPointConfig>>,
    #[serde(default)]
    pub exclusion: ExclusionConfig,
    #[serde(default)]
    pub bloch: BlochConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Atom-shield gap [m].
    #[serde(default = "d::z")]
    pub z: f64,
    /// Shield thickness [m].
    #[serde(default = "d::d_au")]
    pub d_au: f64,
    /// Shield-slab vacuum gap [m].
    #[serde(default = "d::d_vac")]
    pub d_vac: f64,
    /// Slab thickness [m].
    #[serde(default = "d::slab_thickness")]
    pub slab_thickness: f64,
    /// Slab lateral sides [m].
    #[serde(default = "d::slab_side")]
    pub slab_side_x: f64,
    #[serde(default = "d::slab_side")]
    pub slab_side_y: f64,
    /// Densities [kg/m^3].
    #[serde(default = "d::rho_slab")]
    pub rho_slab: f64,
    #[serde(default = "d::rho_shield")]
    pub rho_shield: f64,
    /// Local gravitational acceleration [m/s^2].
    #[serde(default = "d::g")]
    pub g: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty geometry section deserializes")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    /// Transition dipole moment [C m].
    #[serde(default = "d::dipole_moment")]
    pub dipole_moment: f64,
    /// Transition frequency [rad/s].
    #[serde(default = "d::transition_frequency")]
    pub transition_frequency: f64,
    /// Mass [kg].
    #[serde(default = "d::mass")]
    pub mass: f64,
}

impl Default for AtomConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty atom section deserializes")
    }
}

/// One material section: keys kind, eps, omega_p, gamma (SI units),
/// plus an optional conductivity for the skin-depth utility.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub kind: String,
    pub eps: Option<f64>,
    pub omega_p: Option<f64>,
    pub gamma: Option<f64>,
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialsConfig {
    #[serde(default = "d::shield_material")]
    pub shield: MaterialConfig,
    #[serde(default = "d::slab_material")]
    pub slab: MaterialConfig,
}

impl Default for MaterialsConfig {
    fn default() -> Self {
        MaterialsConfig {
            shield: d::shield_material(),
            slab: d::slab_material(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(default = "d::spacing")]
    pub spacing: f64,
    #[serde(default = "d::laser_wavenumber")]
    pub laser_wavenumber: f64,
    #[serde(default = "d::depth_in_recoils")]
    pub depth_in_recoils: f64,
    #[serde(default = "d::bandwidth_fraction")]
    pub bandwidth_fraction: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty lattice section deserializes")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "d::cp_rel_tol")]
    pub cp_rel_tol: f64,
    #[serde(default)]
    pub cp_abs_tol: f64,
    #[serde(default = "d::cp_max_subdivisions")]
    pub cp_max_subdivisions: usize,
    #[serde(default = "d::cubature_rel_tol")]
    pub cubature_rel_tol: f64,
    #[serde(default = "d::cubature_max_subdivisions")]
    pub cubature_max_subdivisions: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty tolerances section deserializes")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YukawaPointConfig {
    pub alpha: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionConfig {
    #[serde(default = "d::lambda_min")]
    pub lambda_min: f64,
    #[serde(default = "d::lambda_max")]
    pub lambda_max: f64,
    #[serde(default = "d::n_lambda")]
    pub n_lambda: usize,
    /// Force equivalent of the 0.1 mHz frequency sensitivity [N].
    #[serde(default = "d::sensitivity_force")]
    pub sensitivity_force: f64,
    /// Slab position used for the criterion forces [m]; the figure's
    /// reference classification is reproduced at 5 um.
    #[serde(default = "d::d_vac")]
    pub d_vac: f64,
}

impl Default for ExclusionConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty exclusion section deserializes")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochConfig {
    /// Near and far slab positions for the frequency-shift rows [m].
    #[serde(default = "d::d_vac_near")]
    pub d_vac_near: f64,
    #[serde(default = "d::d_vac_far")]
    pub d_vac_far: f64,
}

impl Default for BlochConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty bloch section deserializes")
    }
}

/// Default values from the reference parameter set.
mod d {
    use super::MaterialConfig;

    pub fn z() -> f64 {
        3e-6
    }
    pub fn d_au() -> f64 {
        50e-9
    }
    pub fn d_vac() -> f64 {
        5e-6
    }
    pub fn slab_thickness() -> f64 {
        10e-6
    }
    pub fn slab_side() -> f64 {
        100e-6
    }
    pub fn rho_slab() -> f64 {
        2330.0
    }
    pub fn rho_shield() -> f64 {
        19300.0
    }
    pub fn g() -> f64 {
        cpshield::constants::G_EARTH
    }
    pub fn dipole_moment() -> f64 {
        5.05e-29
    }
    pub fn transition_frequency() -> f64 {
        2.4e15
    }
    pub fn mass() -> f64 {
        1.4e-25
    }
    pub fn shield_material() -> MaterialConfig {
        MaterialConfig {
            kind: "drude".into(),
            eps: None,
            omega_p: Some(1.38e16),
            gamma: Some(4.08e13),
            sigma: None,
        }
    }
    pub fn slab_material() -> MaterialConfig {
        MaterialConfig {
            kind: "constant".into(),
            eps: Some(5.0),
            omega_p: None,
            gamma: None,
            sigma: Some(700.0),
        }
    }
    pub fn spacing() -> f64 {
        500e-9
    }
    pub fn laser_wavenumber() -> f64 {
        2.0 * std::f64::consts::PI / 500e-9
    }
    pub fn depth_in_recoils() -> f64 {
        5.0
    }
    pub fn bandwidth_fraction() -> f64 {
        0.26
    }
    pub fn cp_rel_tol() -> f64 {
        1e-6
    }
    pub fn cp_max_subdivisions() -> usize {
        400
    }
    pub fn cubature_rel_tol() -> f64 {
        1e-8
    }
    pub fn cubature_max_subdivisions() -> usize {
        200
    }
    pub fn lambda_min() -> f64 {
        0.05e-6
    }
    pub fn lambda_max() -> f64 {
        50e-6
    }
    pub fn n_lambda() -> usize {
        60
    }
    pub fn sensitivity_force() -> f64 {
        1.325e-31
    }
    pub fn d_vac_near() -> f64 {
        2.5e-6
    }
    pub fn d_vac_far() -> f64 {
        20e-6
    }
}

/// Parsed config plus the hash of its source bytes for the output
/// metadata.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_path(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(LoadedConfig {
                config: RunConfig::default(),
                sha256: "builtin-defaults".into(),
            }),
            Some(p) => {
                let bytes = std::fs::read(p).map_err(|e| {
                    CliError::Config(format!("cannot read config file {}: {e}", p.display()))
                })?;
                let text = String::from_utf8(bytes.clone())
                    .map_err(|_| CliError::Config(format!("{} is not UTF-8", p.display())))?;
                let config: RunConfig = toml::from_str(&text).map_err(|e| {
                    CliError::Config(format!("cannot parse {}: {e}", p.display()))
                })?;
                Ok(LoadedConfig {
                    config,
                    sha256: hex::encode(Sha256::digest(&bytes)),
                })
            }
        }
    }
}

impl RunConfig {
    pub fn geometry(&self) -> Result<ExperimentGeometry, CliError> {
        let g = &self.geometry;
        let geom = ExperimentGeometry {
            z: g.z,
            d_au: g.d_au,
            d_vac: g.d_vac,
            slab_thickness: g.slab_thickness,
            slab_side_x: g.slab_side_x,
            slab_side_y: g.slab_side_y,
            rho_slab: g.rho_slab,
            rho_shield: g.rho_shield,
            g: g.g,
        };
        geom.validate()
            .map_err(|e| CliError::Config(format!("invalid [geometry]: {e}")))?;
        Ok(geom)
    }

    pub fn atom(&self) -> Result<AtomModel, CliError> {
        AtomModel::new(
            self.atom.dipole_moment,
            self.atom.transition_frequency,
            self.atom.mass,
        )
        .map_err(|e| CliError::Config(format!("invalid [atom]: {e}")))
    }

    pub fn materials(&self) -> Result<MaterialSet, CliError> {
        Ok(MaterialSet {
            shield: dielectric(&self.materials.shield, "materials.shield")?,
            slab: dielectric(&self.materials.slab, "materials.slab")?,
        })
    }

    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec {
            spacing: self.lattice.spacing,
            laser_wavenumber: self.lattice.laser_wavenumber,
            depth_in_recoils: self.lattice.depth_in_recoils,
            bandwidth_fraction: self.lattice.bandwidth_fraction,
        }
    }

    pub fn cp_spec(&self) -> CpQuadratureSpec {
        CpQuadratureSpec {
            rel_tol: self.tolerances.cp_rel_tol,
            abs_tol: self.tolerances.cp_abs_tol,
            max_subdivisions: self.tolerances.cp_max_subdivisions,
            xi_scale: None,
            k_scale: None,
        }
    }

    pub fn cubature_spec(&self) -> CubatureSpec {
        CubatureSpec {
            rel_tol: self.tolerances.cubature_rel_tol,
            abs_tol: 0.0,
            max_subdivisions: self.tolerances.cubature_max_subdivisions,
        }
    }

    /// Reference Yukawa points; defaults to the four labelled points of
    /// the exclusion plot.
    pub fn yukawa_points(&self) -> Result<Vec<YukawaParams>, CliError> {
        let configured = self.yukawa_points.clone().unwrap_or_else(|| {
            vec![
                YukawaPointConfig { alpha: 1e9, lambda: 2e-6 },
                YukawaPointConfig { alpha: 1e6, lambda: 2e-6 },
                YukawaPointConfig { alpha: 1e9, lambda: 0.5e-6 },
                YukawaPointConfig { alpha: 1e6, lambda: 0.5e-6 },
            ]
        });
        configured
            .iter()
            .map(|p| {
                YukawaParams::new(p.alpha, p.lambda)
                    .map_err(|e| CliError::Config(format!("invalid [[yukawa_points]]: {e}")))
            })
            .collect()
    }
}

fn dielectric(cfg: &MaterialConfig, section: &str) -> Result<DielectricModel, CliError> {
    match cfg.kind.as_str() {
        "vacuum" => Ok(DielectricModel::Vacuum),
        "constant" => {
            let eps = cfg.eps.ok_or_else(|| {
                CliError::Config(format!("[{section}]: constant kind requires eps"))
            })?;
            DielectricModel::constant(eps)
                .map_err(|e| CliError::Config(format!("[{section}]: {e}")))
        }
        "drude" => {
            let omega_p = cfg.omega_p.ok_or_else(|| {
                CliError::Config(format!("[{section}]: drude kind requires omega_p"))
            })?;
            let gamma = cfg.gamma.ok_or_else(|| {
                CliError::Config(format!("[{section}]: drude kind requires gamma"))
            })?;
            DielectricModel::drude(omega_p, gamma)
                .map_err(|e| CliError::Config(format!("[{section}]: {e}")))
        }
        other => Err(CliError::Config(format!(
            "[{section}]: unknown material kind {other:?}; expected vacuum, constant or drude"
        ))),
    }
}
