//! One function per subcommand. Each builds a [`Dataset`]; output
//! serialization and process exit codes live in the binary.

use cpshield::casimir_polder::cp_force;
use cpshield::experiment::{
    bloch_frequency, criterion_force, force_budget, force_for_bloch_frequency, recoil_energy,
    wannier_stark_width, ExclusionCriterion, ExperimentGeometry, SlabModel,
};
use cpshield::multilayer::LayerStack;
use cpshield::yukawa::yukawa_force_infinite_slab;
use rayon::prelude::*;

use crate::config::LoadedConfig;
use crate::dataset::{fmt_float, Column, Dataset};
use crate::error::CliError;

/// Which geometry length a scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    AtomShieldGap,
    ShieldSlabGap,
}

impl ScanAxis {
    fn column_name(self) -> &'static str {
        match self {
            ScanAxis::AtomShieldGap => "z",
            ScanAxis::ShieldSlabGap => "d_vac",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

/// Log-spaced grid; empty and single-point ranges are allowed.
fn scan_grid(range: &ScanRange) -> Result<Vec<f64>, CliError> {
    if range.points == 0 {
        return Ok(Vec::new());
    }
    if !(range.min > 0.0 && range.max >= range.min) {
        return Err(CliError::Config(format!(
            "scan range must satisfy 0 < min <= max, got [{}, {}]",
            range.min, range.max
        )));
    }
    if range.points == 1 {
        return Ok(vec![range.min]);
    }
    Ok(cpshield::experiment::log_spaced_grid(
        range.min, range.max, range.points,
    ))
}

fn base_metadata(ds: &mut Dataset, loaded: &LoadedConfig) {
    ds.meta("tool_version", env!("CARGO_PKG_VERSION"));
    ds.meta("config_sha256", loaded.sha256.clone());
    ds.meta(
        "cp_rel_tol",
        format!("{:e}", loaded.config.tolerances.cp_rel_tol),
    );
    ds.meta(
        "cubature_rel_tol",
        format!("{:e}", loaded.config.tolerances.cubature_rel_tol),
    );
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::NAN
    } else {
        num / den
    }
}

/// Casimir-Polder force scan over the chosen length. Emits the force
/// through the full stack, the bare-slab (shield removed) force, the
/// isolated-shield force and its half-space and perfect-mirror
/// references, plus the two thin-film ratio columns.
pub fn cmd_cp_scan(
    loaded: &LoadedConfig,
    axis: ScanAxis,
    range: &ScanRange,
) -> Result<Dataset, CliError> {
    let cfg = &loaded.config;
    let base_geom = cfg.geometry()?;
    let atom = cfg.atom()?;
    let materials = cfg.materials()?;
    let spec = cfg.cp_spec();
    let grid = scan_grid(range)?;

    let rows: Vec<Result<Vec<String>, CliError>> = grid
        .par_iter()
        .map(|&x| {
            let mut geom = base_geom;
            match axis {
                ScanAxis::AtomShieldGap => geom.z = x,
                ScanAxis::ShieldSlabGap => geom.d_vac = x,
            }
            let z = geom.z;
            let f_full = cp_force(&atom, &materials.shielded_stack(&geom), z, &spec)?.value;
            let f_sheet = cp_force(&atom, &materials.shield_only_stack(&geom), z, &spec)?.value;
            let f_half = cp_force(&atom, &materials.shield_half_space(), z, &spec)?.value;
            let f_mirror = cp_force(&atom, &LayerStack::PerfectMirror, z, &spec)?.value;
            let z_eff = geom.z + geom.d_au + geom.d_vac;
            let f_bare = cp_force(&atom, &materials.slab_half_space(), z_eff, &spec)?.value;
            Ok(vec![
                fmt_float(x),
                fmt_float(f_full),
                fmt_float(f_bare),
                fmt_float(f_sheet),
                fmt_float(f_half),
                fmt_float(f_mirror),
                fmt_float(ratio(f_sheet, f_half)),
                fmt_float(ratio(f_sheet, f_mirror)),
            ])
        })
        .collect();

    let mut ds = Dataset::new("cp_scan");
    base_metadata(&mut ds, loaded);
    ds.meta("fixed_z", format!("{:e}", base_geom.z));
    ds.meta("fixed_d_vac", format!("{:e}", base_geom.d_vac));
    ds.columns = vec![
        Column::new(axis.column_name(), "m"),
        Column::new("f_cp", "N"),
        Column::new("f_cp_no_shield", "N"),
        Column::new("f_cp_sheet", "N"),
        Column::new("f_cp_halfspace", "N"),
        Column::new("f_cp_mirror", "N"),
        Column::new("ratio_sheet_halfspace", ""),
        Column::new("ratio_sheet_mirror", ""),
    ];
    for row in rows {
        ds.push_row(row?);
    }
    Ok(ds)
}

/// Full force budget on a (z, d_vac) grid: one row per grid point with
/// every force term and its slab-retraction delta.
pub fn cmd_budget(
    loaded: &LoadedConfig,
    z_values: &[f64],
    d_vac_values: &[f64],
    finite_slab: bool,
) -> Result<Dataset, CliError> {
    let cfg = &loaded.config;
    let base_geom = cfg.geometry()?;
    let atom = cfg.atom()?;
    let materials = cfg.materials()?;
    let spec = cfg.cp_spec();
    let points = cfg.yukawa_points()?;
    let slab_model = if finite_slab {
        SlabModel::FiniteCuboid(cfg.cubature_spec())
    } else {
        SlabModel::InfiniteSlab
    };

    let mut grid = Vec::with_capacity(z_values.len() * d_vac_values.len());
    for &z in z_values {
        for &d_vac in d_vac_values {
            grid.push((z, d_vac));
        }
    }

    let rows: Vec<Result<Vec<String>, CliError>> = grid
        .par_iter()
        .map(|&(z, d_vac)| {
            let geom = ExperimentGeometry {
                z,
                d_vac,
                ..base_geom
            };
            let budget = force_budget(&geom, &atom, &materials, &points, &spec, slab_model)?;
            let mut row = vec![
                fmt_float(z),
                fmt_float(d_vac),
                fmt_float(budget.earth.force),
                fmt_float(budget.earth.delta_force),
                fmt_float(budget.newton_slab.force),
                fmt_float(budget.newton_slab.delta_force),
                fmt_float(budget.newton_shield.force),
                fmt_float(budget.newton_shield.delta_force),
                fmt_float(budget.cp_shielded.force),
                fmt_float(budget.cp_shielded.delta_force),
                fmt_float(budget.cp_unshielded.force),
                fmt_float(budget.cp_unshielded.delta_force),
            ];
            for (_, r) in &budget.yukawa_slab {
                row.push(fmt_float(r.force));
                row.push(fmt_float(r.delta_force));
            }
            for (_, r) in &budget.yukawa_shield {
                row.push(fmt_float(r.force));
                row.push(fmt_float(r.delta_force));
            }
            Ok(row)
        })
        .collect();

    let mut ds = Dataset::new("force_budget");
    base_metadata(&mut ds, loaded);
    for (i, p) in points.iter().enumerate() {
        ds.meta(
            &format!("yukawa_point_{}", i + 1),
            format!("alpha={:e} lambda={:e} m", p.alpha, p.lambda),
        );
    }
    ds.meta(
        "slab_model",
        if finite_slab { "finite_cuboid" } else { "infinite_slab" },
    );
    ds.columns = vec![
        Column::new("z", "m"),
        Column::new("d_vac", "m"),
        Column::new("f_earth", "N"),
        Column::new("df_earth", "N"),
        Column::new("f_newton_slab", "N"),
        Column::new("df_newton_slab", "N"),
        Column::new("f_newton_shield", "N"),
        Column::new("df_newton_shield", "N"),
        Column::new("f_cp", "N"),
        Column::new("df_cp", "N"),
        Column::new("f_cp_no_shield", "N"),
        Column::new("df_cp_no_shield", "N"),
    ];
    for i in 1..=points.len() {
        ds.columns.push(Column::new(&format!("f_yukawa_slab_{i}"), "N"));
        ds.columns.push(Column::new(&format!("df_yukawa_slab_{i}"), "N"));
    }
    for i in 1..=points.len() {
        ds.columns.push(Column::new(&format!("f_yukawa_shield_{i}"), "N"));
        ds.columns.push(Column::new(&format!("df_yukawa_shield_{i}"), "N"));
    }
    for row in rows {
        ds.push_row(row?);
    }
    Ok(ds)
}

/// Exclusion boundaries in the (lambda, alpha) plane, in long format:
/// one polyline per criterion, identified by the `curve` column.
/// Classification of the configured Yukawa reference points against
/// each criterion goes into the metadata block. An optional overlay
/// dataset with `lambda` and `alpha` columns is passed through as a
/// fourth polyline.
pub fn cmd_exclusion(
    loaded: &LoadedConfig,
    overlay: Option<&Dataset>,
) -> Result<Dataset, CliError> {
    let cfg = &loaded.config;
    let mut geom = cfg.geometry()?;
    geom.d_vac = cfg.exclusion.d_vac;
    geom.validate()
        .map_err(|e| CliError::Config(format!("invalid [exclusion] d_vac: {e}")))?;
    let atom = cfg.atom()?;
    let materials = cfg.materials()?;
    let spec = cfg.cp_spec();
    let ex = &cfg.exclusion;
    if ex.n_lambda < 2 || !(ex.lambda_min > 0.0 && ex.lambda_max > ex.lambda_min) {
        return Err(CliError::Config(format!(
            "invalid [exclusion] grid: lambda in [{}, {}] with {} points",
            ex.lambda_min, ex.lambda_max, ex.n_lambda
        )));
    }
    let grid = cpshield::experiment::log_spaced_grid(ex.lambda_min, ex.lambda_max, ex.n_lambda);

    let criteria: [(&str, ExclusionCriterion); 3] = [
        ("shielded", ExclusionCriterion::CpDelta { shielded: true }),
        ("unshielded", ExclusionCriterion::CpDelta { shielded: false }),
        ("sensitivity", ExclusionCriterion::FixedForce(ex.sensitivity_force)),
    ];
    let mut thresholds = Vec::with_capacity(criteria.len());
    for (label, c) in &criteria {
        let t = criterion_force(&geom, &atom, &materials, *c, &spec)?;
        thresholds.push((*label, t));
    }

    let z_center = geom.slab_center_distance();
    let mut ds = Dataset::new("exclusion_boundary");
    base_metadata(&mut ds, loaded);
    ds.meta("d_vac", format!("{:e}", geom.d_vac));
    for (label, t) in &thresholds {
        ds.meta(&format!("criterion_force_{label}"), format!("{:e}", t));
    }
    // reference-point classification: detectable (inside the probed
    // region) when the point's slab force change exceeds the criterion
    for (i, p) in cfg.yukawa_points()?.iter().enumerate() {
        let delta = yukawa_force_infinite_slab(
            atom.mass,
            geom.rho_slab,
            geom.slab_thickness,
            z_center,
            p,
        );
        let verdicts: Vec<String> = thresholds
            .iter()
            .map(|(label, t)| {
                format!("{label}={}", if delta > *t { "inside" } else { "outside" })
            })
            .collect();
        ds.meta(
            &format!("point_{}", i + 1),
            format!(
                "alpha={:e} lambda={:e} m delta_force={:e} N {}",
                p.alpha,
                p.lambda,
                delta,
                verdicts.join(" ")
            ),
        );
    }

    ds.columns = vec![
        Column::new("curve", ""),
        Column::new("lambda", "m"),
        Column::new("alpha", ""),
    ];
    for (label, t) in &thresholds {
        for &lambda in &grid {
            let unit = cpshield::yukawa::YukawaParams::new(1.0, lambda)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let f_unit = yukawa_force_infinite_slab(
                atom.mass,
                geom.rho_slab,
                geom.slab_thickness,
                z_center,
                &unit,
            );
            if !(f_unit > f64::MIN_POSITIVE) {
                continue;
            }
            ds.push_row(vec![
                (*label).to_string(),
                fmt_float(lambda),
                fmt_float(t / f_unit),
            ]);
        }
    }

    if let Some(overlay) = overlay {
        let lambdas = overlay
            .column_f64("lambda")
            .map_err(|e| CliError::Config(format!("overlay: {e}")))?;
        let alphas = overlay
            .column_f64("alpha")
            .map_err(|e| CliError::Config(format!("overlay: {e}")))?;
        ds.meta("overlay_source", overlay.name.clone());
        for (l, a) in lambdas.iter().zip(&alphas) {
            ds.push_row(vec!["overlay".into(), fmt_float(*l), fmt_float(*a)]);
        }
    }
    Ok(ds)
}

/// Bloch-oscillation observables: frequency, and localisation width
/// where defined, for Earth's gravity, the instrument sensitivity and
/// the slab-modulation signal of each Yukawa reference point.
pub fn cmd_bloch(loaded: &LoadedConfig) -> Result<Dataset, CliError> {
    let cfg = &loaded.config;
    let base_geom = cfg.geometry()?;
    let atom = cfg.atom()?;
    let lattice = cfg.lattice();
    let points = cfg.yukawa_points()?;
    let (near, far) = (cfg.bloch.d_vac_near, cfg.bloch.d_vac_far);
    if !(near > 0.0 && far > near) {
        return Err(CliError::Config(format!(
            "[bloch] requires 0 < d_vac_near < d_vac_far, got ({near}, {far})"
        )));
    }

    let mut ds = Dataset::new("bloch_observables");
    base_metadata(&mut ds, loaded);
    ds.meta("lattice_spacing", format!("{:e} m", lattice.spacing));
    ds.meta(
        "recoil_energy",
        format!("{:e} J", recoil_energy(&lattice, atom.mass)),
    );
    ds.meta("d_vac_near", format!("{:e} m", near));
    ds.meta("d_vac_far", format!("{:e} m", far));
    ds.columns = vec![
        Column::new("label", ""),
        Column::new("force", "N"),
        Column::new("nu_b", "Hz"),
        Column::new("wannier_stark_width", "m"),
    ];

    let push = |ds: &mut Dataset, label: &str, force: f64| {
        let width = if force > 0.0 {
            fmt_float(wannier_stark_width(&lattice, atom.mass, force))
        } else {
            "undefined".to_string()
        };
        ds.push_row(vec![
            label.to_string(),
            fmt_float(force),
            fmt_float(bloch_frequency(force, &lattice)),
            width,
        ]);
    };

    push(&mut ds, "earth", atom.mass * base_geom.g);
    push(
        &mut ds,
        "sensitivity_0.1mHz",
        force_for_bloch_frequency(1e-4, &lattice),
    );

    // slab-modulation signal: change in the slab's force between the
    // near and far positions
    let slab_force = |d_vac: f64, p: &cpshield::yukawa::YukawaParams| {
        let geom = ExperimentGeometry { d_vac, ..base_geom };
        yukawa_force_infinite_slab(
            atom.mass,
            geom.rho_slab,
            geom.slab_thickness,
            geom.slab_center_distance(),
            p,
        )
    };
    for (i, p) in points.iter().enumerate() {
        let signal = slab_force(near, p) - slab_force(far, p);
        push(&mut ds, &format!("yukawa_modulation_{}", i + 1), signal);
    }
    Ok(ds)
}
