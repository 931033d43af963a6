//! Black-box tests of the binary: exit codes, output schema, edge
//! cases. Numerical content is covered by the core suite and the
//! acceptance tests.

use cpshield_cli::dataset::Dataset;
use std::path::Path;
use std::process::{Command, Output};

fn cpshield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpshield"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_dataset(out: &Output) -> Dataset {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    Dataset::parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn missing_config_file_exits_with_code_1() {
    let out = cpshield(&["--config", "/nonexistent/run.toml", "bloch"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
}

#[test]
fn malformed_config_exits_with_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "[geometry]\nz = \"not a number\"\n");
    let out = cpshield(&["--config", path.to_str().unwrap(), "bloch"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "[geometry]\nz_typo = 3e-6\n");
    let out = cpshield(&["--config", path.to_str().unwrap(), "bloch"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_geometry_value_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "[geometry]\nz = -1e-6\n");
    let out = cpshield(&["--config", path.to_str().unwrap(), "budget"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_of_range_rel_tol_is_rejected() {
    let out = cpshield(&["--rel-tol", "0.5", "bloch"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn all_subcommand_outputs_self_parse() {
    for args in [
        vec!["cp-scan", "--points", "2", "--min", "1e-6", "--max", "3e-6", "--rel-tol", "1e-4"],
        vec!["budget", "--rel-tol", "1e-4"],
        vec!["exclusion", "--rel-tol", "1e-4"],
        vec!["bloch"],
    ] {
        let out = cpshield(&args);
        let ds = stdout_dataset(&out);
        assert!(!ds.columns.is_empty(), "{args:?}");
        // every numeric column parses end to end
        for col in &ds.columns {
            if !col.unit.is_empty() {
                ds.column_f64(&col.name)
                    .unwrap_or_else(|e| panic!("{args:?} column {}: {e}", col.name));
            }
        }
        // metadata carries the provenance keys
        let keys: Vec<&str> = ds.metadata.iter().map(|(k, _)| k.as_str()).collect();
        assert!(keys.contains(&"tool_version"), "{args:?}");
        assert!(keys.contains(&"config_sha256"), "{args:?}");
    }
}

#[test]
fn empty_scan_range_yields_header_only_dataset() {
    let out = cpshield(&["cp-scan", "--points", "0"]);
    let ds = stdout_dataset(&out);
    assert_eq!(ds.columns.len(), 8);
    assert!(ds.rows.is_empty());
}

#[test]
fn vacuum_materials_give_zero_material_forces() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "[materials.shield]\nkind = \"vacuum\"\n[materials.slab]\nkind = \"vacuum\"\n",
    );
    let out = cpshield(&[
        "--config",
        path.to_str().unwrap(),
        "cp-scan",
        "--points",
        "2",
        "--min",
        "1e-6",
        "--max",
        "3e-6",
    ]);
    let ds = stdout_dataset(&out);
    for col in ["f_cp", "f_cp_no_shield", "f_cp_sheet", "f_cp_halfspace"] {
        for v in ds.column_f64(col).unwrap() {
            assert_eq!(v, 0.0, "{col}");
        }
    }
    // the perfect-mirror reference column is material-independent
    for v in ds.column_f64("f_cp_mirror").unwrap() {
        assert!(v > 0.0);
    }
}

#[test]
fn config_hash_appears_in_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[geometry]\nz = 4e-6\n";
    let path = write_config(dir.path(), body);
    let out = cpshield(&["--config", path.to_str().unwrap(), "bloch"]);
    let ds = stdout_dataset(&out);
    let hash = ds
        .metadata
        .iter()
        .find(|(k, _)| k == "config_sha256")
        .map(|(_, v)| v.clone())
        .unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn structured_format_emits_valid_json() {
    let out = cpshield(&["--format", "structured", "bloch"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["name"], "bloch_observables");
    assert!(v["columns"].as_array().unwrap().len() == 4);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_writes_identical_bytes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bloch.csv");
    let to_file = cpshield(&["--out", path.to_str().unwrap(), "bloch"]);
    assert!(to_file.status.success());
    let to_stdout = cpshield(&["bloch"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn exclusion_overlay_passthrough() {
    let dir = tempfile::tempdir().unwrap();
    let overlay = dir.path().join("external.csv");
    std::fs::write(
        &overlay,
        "# dataset: external_limits\nlambda [m],alpha\n1.0e-6,1.0e12\n2.0e-6,1.0e10\n",
    )
    .unwrap();
    let out = cpshield(&[
        "exclusion",
        "--overlay",
        overlay.to_str().unwrap(),
        "--rel-tol",
        "1e-4",
    ]);
    let ds = stdout_dataset(&out);
    let overlay_rows: Vec<_> = ds.rows.iter().filter(|r| r[0] == "overlay").collect();
    assert_eq!(overlay_rows.len(), 2);
    assert_eq!(overlay_rows[0][1], "1.00000000e-6");
    // curves for all three built-in criteria are present
    for curve in ["shielded", "unshielded", "sensitivity"] {
        assert!(ds.rows.iter().any(|r| r[0] == curve), "{curve}");
    }
}

#[test]
fn budget_grid_flags_shape_the_table() {
    let out = cpshield(&[
        "budget",
        "--z-values",
        "3e-6,1e-5",
        "--d-vac-min",
        "2e-6",
        "--d-vac-max",
        "8e-6",
        "--d-vac-points",
        "3",
        "--rel-tol",
        "1e-4",
    ]);
    let ds = stdout_dataset(&out);
    assert_eq!(ds.rows.len(), 6);
    let z = ds.column_f64("z").unwrap();
    assert_eq!(z.iter().filter(|&&v| v == 3e-6).count(), 3);
    // row order is z-major and deterministic
    assert!(z[..3].iter().all(|&v| v == 3e-6) && z[3..].iter().all(|&v| v == 1e-5));
}

#[test]
fn workers_flag_does_not_change_output() {
    let one = cpshield(&["--workers", "1", "cp-scan", "--points", "3", "--min", "1e-6", "--max", "5e-6", "--rel-tol", "1e-4"]);
    let four = cpshield(&["--workers", "4", "cp-scan", "--points", "3", "--min", "1e-6", "--max", "5e-6", "--rel-tol", "1e-4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
