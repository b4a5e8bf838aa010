use std::fs;
use std::path::Path;
use std::process::Command;

use magnus_tls::cli::emit::{SUMMARY_HEADER, TRAJECTORY_HEADER};
use magnus_tls::cli::{self, Args, CliError, ExperimentConfig};
use magnus_tls::Order;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magnus-tls"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    fs::write(&path, body).unwrap();
    path
}

fn field_of(err: CliError) -> String {
    match err {
        CliError::Config { field, .. } => field,
        other => panic!("expected config error, got {other}"),
    }
}

#[test]
fn empty_detuning_list_is_rejected() {
    let err = ExperimentConfig::parse("detunings = \n").unwrap_err();
    assert_eq!(field_of(err), "detunings");
}

#[test]
fn invalid_values_name_their_field() {
    for (body, field) in [
        ("grid.nodes = 1", "grid.nodes"),
        ("pulse.area = -1", "pulse.area"),
        ("pulse.width = 0", "pulse.width"),
        ("orders = 4", "orders"),
        ("pulse.shape = triangle", "pulse.shape"),
        ("emit.plots = maybe", "emit.plots"),
        ("colour = red", "colour"),
        ("detunings = 0\ndetunings = 1", "detunings"),
    ] {
        assert_eq!(field_of(ExperimentConfig::parse(body).unwrap_err()), field, "{body}");
    }
}

#[test]
fn config_file_round_trip() {
    let cfg = ExperimentConfig::parse(
        "# sweep\npulse.shape = sin2\npulse.width = 10\npulse.area = pi/2\ndetunings = 0, 0.1\n\
         detunings.scale = peak\norders = 3, 1\ngrid.nodes = 101\nemit.plots = off\n",
    )
    .unwrap();
    assert_eq!(cfg.detunings, vec![0.0, 0.1]);
    assert_eq!(cfg.sorted_orders(), vec![Order::First, Order::Third]);
    assert_eq!(cfg.grid_nodes, 101);
    assert!(!cfg.emit_plots);
    assert!((cfg.pulse().unwrap().area() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn three_node_run_emits_three_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        grid_nodes: 3,
        detunings: vec![0.0, 0.2],
        orders: vec![Order::First, Order::Third],
        out_dir: tmp.path().to_path_buf(),
        ..Default::default()
    };
    let comparison = cli::run_comparison(&cfg).unwrap();
    cli::emit_outputs(&comparison, &cfg).unwrap();

    let summary = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 2);

    let traj_dir = tmp.path().join("trajectories");
    let files: Vec<_> = fs::read_dir(&traj_dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 2 * 3);
    for file in files {
        let text = fs::read_to_string(&file).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines.len(), 4, "{}", file.display());
    }
}

#[test]
fn no_emit_flags_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = ExperimentConfig {
        grid_nodes: 51,
        out_dir: out.clone(),
        emit_trajectories: false,
        emit_summary: false,
        emit_plots: false,
        ..Default::default()
    };
    let comparison = cli::run_comparison(&cfg).unwrap();
    assert!(cli::emit_outputs(&comparison, &cfg).unwrap().is_empty());
    assert!(!out.exists());
}

#[test]
fn numeric_reference_agrees_with_itself() {
    let cfg = ExperimentConfig { detunings: vec![0.0, 0.3], ..Default::default() };
    let comparison = cli::run_comparison(&cfg).unwrap();
    for point in &comparison.sweep {
        assert!(point.numeric.max_deviation(&point.numeric).unwrap() < 1e-9);
    }
    for row in comparison.report.rows.iter().filter(|r| r.delta == 0.0) {
        assert!(row.max_err < 1e-9, "order {} err {}", row.order, row.max_err);
    }
}

#[test]
fn plot_files_cover_both_figures() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        grid_nodes: 101,
        detunings: vec![0.0, 0.1],
        detuning_scale: cli::DetuningScale::Peak,
        out_dir: tmp.path().to_path_buf(),
        emit_trajectories: false,
        emit_summary: false,
        ..Default::default()
    };
    let comparison = cli::run_comparison(&cfg).unwrap();
    let written = cli::emit_outputs(&comparison, &cfg).unwrap();
    let names: Vec<String> = written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert!(names.iter().any(|n| n.starts_with("fig2_") && n.ends_with(".py")));
    assert!(names.iter().any(|n| n.starts_with("fig3_") && n.ends_with(".py")));
    assert!(written.iter().all(|p| p.starts_with(tmp.path().join("plots"))));
}

#[test]
fn library_run_honours_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "grid.nodes = 21\ndetunings = 0, 1\nemit.plots = false\n");
    let args = Args {
        config: Some(config),
        delta: Some("-0.5".into()),
        order: Some("2".into()),
        out: Some(tmp.path().join("o")),
        quiet: true,
    };
    let comparison = cli::run(&args).unwrap();
    assert_eq!(comparison.report.rows.len(), 1);
    assert_eq!(comparison.report.rows[0].delta, -0.5);
    assert_eq!(comparison.report.rows[0].order, Order::Second);
}

#[test]
fn binary_succeeds_and_prints_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "grid.nodes = 41\nemit.trajectories = false\nemit.plots = false\n");
    let out = binary()
        .args(["--config", config.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("max_err"));
    assert!(tmp.path().join("o/summary.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();

    let bad = write_config(tmp.path(), "detunings =\n");
    let status = binary().args(["--config", bad.to_str().unwrap(), "--quiet"]).status().unwrap();
    assert_eq!(status.code(), Some(1));

    let status = binary().args(["--order", "7", "--quiet"]).status().unwrap();
    assert_eq!(status.code(), Some(1));

    let missing = tmp.path().join("missing.cfg");
    let status = binary().args(["--config", missing.to_str().unwrap(), "--quiet"]).status().unwrap();
    assert_eq!(status.code(), Some(3));

    // output path blocked by a regular file
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    let ok = write_config(tmp.path(), "grid.nodes = 11\n");
    let status = binary()
        .args(["--config", ok.to_str().unwrap(), "--out", blocker.to_str().unwrap(), "--quiet"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}
