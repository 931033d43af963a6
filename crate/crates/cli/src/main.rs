use clap::{Parser, Subcommand, ValueEnum};
use cpshield_cli::commands::{self, ScanAxis, ScanRange};
use cpshield_cli::dataset::Dataset;
use cpshield_cli::{CliError, LoadedConfig};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cpshield",
    version,
    about = "Force datasets for a shielded atom-slab experiment: Casimir-Polder, Newtonian and Yukawa contributions"
)]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for grid evaluation; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the dispersion-force relative tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    /// Vary the atom-shield gap z.
    Z,
    /// Vary the shield-slab gap d_vac.
    DVac,
}

#[derive(Subcommand)]
enum Cmd {
    /// Casimir-Polder force scan with thin-film ratio columns.
    CpScan {
        #[arg(long, value_enum, default_value_t = Axis::Z)]
        abscissa: Axis,
        /// Scan start [m].
        #[arg(long, default_value_t = 0.1e-6)]
        min: f64,
        /// Scan end [m].
        #[arg(long, default_value_t = 30e-6)]
        max: f64,
        /// Number of log-spaced points; 0 emits a header-only dataset.
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Force budget table over a (z, d_vac) grid.
    Budget {
        /// Comma-separated z values [m]; defaults to the configured z.
        #[arg(long, value_delimiter = ',')]
        z_values: Option<Vec<f64>>,
        /// d_vac range start [m]; single configured d_vac when no range
        /// flags are given.
        #[arg(long)]
        d_vac_min: Option<f64>,
        /// d_vac range end [m].
        #[arg(long)]
        d_vac_max: Option<f64>,
        #[arg(long, default_value_t = 15)]
        d_vac_points: usize,
        /// Integrate the slab as a finite cuboid instead of an
        /// infinite slab.
        #[arg(long)]
        finite_slab: bool,
    },
    /// Exclusion boundaries in the (lambda, alpha) plane.
    Exclusion {
        /// CSV dataset with lambda and alpha columns to pass through
        /// as an extra curve.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
    /// Bloch-oscillation observables for the configured forces.
    Bloch,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut loaded = LoadedConfig::from_path(cli.config.as_deref())?;
    if let Some(tol) = cli.rel_tol {
        if !(tol > 0.0 && tol <= 1e-2) {
            return Err(CliError::Config(format!(
                "--rel-tol must lie in (0, 1e-2], got {tol}"
            )));
        }
        loaded.config.tolerances.cp_rel_tol = tol;
    }

    let dataset = match &cli.cmd {
        Cmd::CpScan {
            abscissa,
            min,
            max,
            points,
        } => {
            let axis = match abscissa {
                Axis::Z => ScanAxis::AtomShieldGap,
                Axis::DVac => ScanAxis::ShieldSlabGap,
            };
            let range = ScanRange {
                min: *min,
                max: *max,
                points: *points,
            };
            commands::cmd_cp_scan(&loaded, axis, &range)?
        }
        Cmd::Budget {
            z_values,
            d_vac_min,
            d_vac_max,
            d_vac_points,
            finite_slab,
        } => {
            let zs = z_values
                .clone()
                .unwrap_or_else(|| vec![loaded.config.geometry.z]);
            let d_vacs = match (d_vac_min, d_vac_max) {
                (None, None) => vec![loaded.config.geometry.d_vac],
                (Some(lo), Some(hi)) => {
                    if !(*lo > 0.0 && hi >= lo && *d_vac_points >= 1) {
                        return Err(CliError::Config(format!(
                            "invalid d_vac range [{lo}, {hi}] with {d_vac_points} points"
                        )));
                    }
                    if *d_vac_points == 1 {
                        vec![*lo]
                    } else {
                        cpshield::experiment::log_spaced_grid(*lo, *hi, *d_vac_points)
                    }
                }
                _ => {
                    return Err(CliError::Config(
                        "--d-vac-min and --d-vac-max must be given together".into(),
                    ))
                }
            };
            commands::cmd_budget(&loaded, &zs, &d_vacs, *finite_slab)?
        }
        Cmd::Exclusion { overlay } => {
            let overlay_ds = overlay
                .as_deref()
                .map(|p| -> Result<Dataset, CliError> {
                    let text = std::fs::read_to_string(p)?;
                    Dataset::parse_csv(&text).map_err(|e| {
                        CliError::Config(format!("overlay file {}: {e}", p.display()))
                    })
                })
                .transpose()?;
            commands::cmd_exclusion(&loaded, overlay_ds.as_ref())?
        }
        Cmd::Bloch => commands::cmd_bloch(&loaded)?,
    };

    let mut buf: Vec<u8> = Vec::new();
    match cli.format {
        Format::Csv => dataset.write_csv(&mut buf)?,
        Format::Structured => dataset.write_json(&mut buf)?,
    }
    match &cli.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let pool = cli.workers.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
    });
    let result = match &pool {
        Some(pool) => pool.install(|| run(&cli)),
        None => run(&cli),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
