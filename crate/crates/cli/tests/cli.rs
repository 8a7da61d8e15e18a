//! End-to-end tests of the binary: exit codes, file emission, and the
//! config echo round-trip.

use std::path::Path;
use std::process::{Command, Output};

use gaslayer_cli::config::{OutputFormat, RunConfig};

fn gaslayer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaslayer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty() && !l.chars().next().unwrap().is_alphabetic())
        .collect()
}

#[test]
fn solve_default_grid_has_no_slip_first_row() {
    let out = gaslayer(&["solve", "--quiet", "--c", "0.01"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 201);
    assert!(rows[0].starts_with("0,0,0,"));
}

#[test]
fn solve_matches_inversion_oracle_at_s_tenth() {
    // c = 1, 2*i0 = 1, delta = 0.8, grid 9: z = 0.125 sits at s = 0.1,
    // where the quadrature-inversion oracle gives u = 0.100080376966...
    let out = gaslayer(&[
        "solve", "--quiet", "--c", "1", "--i0", "0.5", "--delta", "0.8", "--grid", "9",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = data_rows(&text)
        .into_iter()
        .find(|r| r.starts_with("0.1,"))
        .expect("row at s = 0.1");
    let u: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((u - 0.100_080_376_966_841_3).abs() < 1e-9, "u = {u}");
}

#[test]
fn invalid_speed_exits_2() {
    let out = gaslayer(&["solve", "--quiet", "--U", "1.1", "--i0", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("speed exceeds energy bound"), "stderr: {err}");
}

#[test]
fn saturated_profile_exits_3_and_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    // c * delta = 1 exceeds the supremum 0.878... for 2*i0 = 1.
    let out = gaslayer(&[
        "solve", "--quiet", "--c", "1", "--i0", "0.5", "--delta", "1",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!path.exists(), "failed run must not leave a partial file");
}

#[test]
fn compare_csv_header_reparses_to_config() {
    let out = gaslayer(&[
        "compare", "--quiet", "--c", "0.01", "--U", "0.1", "--grid", "51",
        "--series-order", "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let reparsed = RunConfig::from_report_header(&text).unwrap();
    let expected = RunConfig {
        wall_gradient: 0.01,
        free_stream_speed: 0.1,
        grid: 51,
        series_order: 3,
        ..RunConfig::default()
    };
    assert_eq!(reparsed, expected);
}

#[test]
fn compare_json_embeds_equal_config() {
    let out = gaslayer(&[
        "compare", "--quiet", "--format", "json", "--c", "0.01", "--grid", "21",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON report");
    let embedded: RunConfig =
        serde_json::from_value(value["config"].clone()).expect("config reparses");
    let expected = RunConfig {
        wall_gradient: 0.01,
        grid: 21,
        format: OutputFormat::Json,
        ..RunConfig::default()
    };
    assert_eq!(embedded, expected);
    assert_eq!(value["metrics"].as_array().unwrap().len(), 5);
    assert_eq!(value["ranking"][0], "exact");
    let quartic = &value["quartic_coefficients"];
    assert_eq!(quartic["a"], 0.2);
    assert_eq!(quartic["shape_parameter"], 0.0);
}

#[test]
fn compare_profile_columns_match_contract() {
    let out = gaslayer(&["compare", "--quiet", "--c", "0.01", "--grid", "21"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(
        "z,s,u_exact,u_quartic,u_thm1_literal,u_thm1_recomputed,u_series,abs_err_quartic,abs_err_thm1_literal,abs_err_thm1_recomputed,abs_err_series"
    ));
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    std::fs::write(
        &config_path,
        "[flow]\nU = 0.2\nc = 0.05\n\n[run]\ngrid = 31\n",
    )
    .unwrap();
    let out = gaslayer(&[
        "compare", "--quiet",
        "--config", config_path.to_str().unwrap(),
        "--U", "0.3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let config = RunConfig::from_report_header(&text).unwrap();
    assert_eq!(config.free_stream_speed, 0.3, "flag wins over file");
    assert_eq!(config.wall_gradient, 0.05, "file wins over default");
    assert_eq!(config.grid, 31);
}

#[test]
fn malformed_config_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    std::fs::write(&config_path, "[run]\ngrid - 31\n").unwrap();
    let out = gaslayer(&[
        "solve", "--quiet", "--config", config_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}

#[test]
fn transform_unit_csv_identity_and_delta_table() {
    let dir = tempfile::tempdir().unwrap();
    let density_path = dir.path().join("density.csv");
    let mut csv = String::from("x,y,rho\n");
    for ix in 0..6 {
        for iy in 0..5 {
            csv.push_str(&format!("{},{},1\n", 2 * ix, 0.25 * iy as f64));
        }
    }
    std::fs::write(&density_path, csv).unwrap();

    let mesh_path = dir.path().join("mesh.csv");
    let out = gaslayer(&[
        "transform", "--quiet",
        "--density", density_path.to_str().unwrap(),
        "--out", mesh_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let mesh = std::fs::read_to_string(&mesh_path).unwrap();
    assert!(mesh.contains("# diffeomorphism = pass"));
    for row in data_rows(&mesh) {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        // Unit density: s equals yhat.
        assert!((cells[3] - cells[1]).abs() < 1e-10);
    }

    let delta_path = gaslayer_cli::delta_table_path(Path::new(&mesh_path));
    let delta = std::fs::read_to_string(delta_path).unwrap();
    for row in data_rows(&delta) {
        let d: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((d - 1.0).abs() < 1e-10);
    }
}

#[test]
fn transform_negative_density_exits_5_naming_row() {
    let dir = tempfile::tempdir().unwrap();
    let density_path = dir.path().join("density.csv");
    std::fs::write(
        &density_path,
        "x,y,rho\n0,0,1\n0,1,1\n10,0,-0.5\n10,1,1\n",
    )
    .unwrap();
    let out = gaslayer(&[
        "transform", "--quiet", "--density", density_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 4"));
}

#[test]
fn transform_malformed_csv_exits_4_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let density_path = dir.path().join("density.csv");
    std::fs::write(&density_path, "x,y,rho\n0,0,1\n0,1\n").unwrap();
    let out = gaslayer(&[
        "transform", "--quiet", "--density", density_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
}

#[test]
fn transform_one_plus_y_preset_delta() {
    let out = gaslayer(&["transform", "--quiet", "--density", "one-plus-y"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // Per-column delta for rho = 1 + y over h = 1 is 1.5; the main CSV ends
    // at s(x, 1) = 1.5 on every column.
    let last_per_column: Vec<f64> = data_rows(&text)
        .iter()
        .filter(|r| r.split(',').nth(1).unwrap() == "1")
        .map(|r| r.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(!last_per_column.is_empty());
    for s in last_per_column {
        assert!((s - 1.5).abs() < 1e-10);
    }
}

#[test]
fn series_json_tables() {
    let out = gaslayer(&[
        "series", "--quiet", "--format", "json", "--series-order", "4",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let tables = value["tables"].as_array().unwrap();
    assert_eq!(tables.len(), 3);
    assert_eq!(tables[0]["source"], "binomial-oracle");
    assert_eq!(tables[0]["coefficients"][2], 0.1488);
    assert_eq!(tables[2]["source"], "paper-literal");
    assert_eq!(tables[2]["coefficients"][2], 0.24);
}

#[test]
fn sweep_rows_cover_cross_product() {
    let out = gaslayer(&[
        "sweep", "--quiet", "--c", "0.01", "--grid", "21",
        "--sweep", "U=0,0.1,0.2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // 3 tuples x 5 profile kinds.
    assert_eq!(data_rows(&text).len(), 15);
    let config = RunConfig::from_report_header(&text).unwrap();
    assert_eq!(config.sweep, vec![("U".to_string(), vec![0.0, 0.1, 0.2])]);
}

#[test]
fn sweep_with_no_valid_tuple_exits_2() {
    let out = gaslayer(&[
        "sweep", "--quiet", "--grid", "21", "--sweep", "U=9,10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
