//! CSV and plot-script emission. Output is a pure function of the
//! comparison, so identical configs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::report::{Comparison, ComparisonReport, SweepPoint};
use super::CliError;
use crate::bloch::density_from_bloch_unchecked;
use crate::reference::{Method, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,S1,S2,S3,rho00,rho11,re01,im01";
pub const SUMMARY_HEADER: &str = "delta,order,max_err,final_rho00,final_rho11";

const TRAJECTORY_DIR: &str = "trajectories";
const PLOT_DIR: &str = "plots";

fn num(v: f64) -> String {
    format!("{v:.15e}")
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    let mut file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    file.write_all(contents.as_bytes()).map_err(|e| io_error(path, e))
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(160 * traj.states().len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, s) in traj.grid().nodes().zip(traj.states()) {
        let rho = density_from_bloch_unchecked(s);
        let fields = [t, s.s1, s.s2, s.s3, rho.rho00(), rho.rho11(), rho.rho01().re, rho.rho01().im];
        let line: Vec<String> = fields.into_iter().map(num).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_csv(report: &ComparisonReport) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(row.delta),
            row.order,
            num(row.max_err),
            num(row.magnus_final.rho00),
            num(row.magnus_final.rho11)
        );
    }
    out
}

pub fn trajectory_file_name(delta: f64, method: Method) -> String {
    format!("delta_{delta:e}_{method}.csv")
}

/// Writes `summary.csv` and/or one trajectory file per (Δ, method).
pub fn emit_csv(comparison: &Comparison, dir: &Path, trajectories: bool, summary: bool) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    if summary {
        let path = dir.join("summary.csv");
        write_file(&path, &summary_csv(&comparison.report))?;
        written.push(path);
    }
    if trajectories {
        for point in &comparison.sweep {
            for traj in point.trajectories() {
                let path = dir.join(TRAJECTORY_DIR).join(trajectory_file_name(point.delta, traj.method()));
                write_file(&path, &trajectory_csv(traj))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

struct Figure {
    name: String,
    caption: String,
    panels: Vec<Method>,
}

fn figure_for(point: &SweepPoint) -> Option<Figure> {
    let available = |m: Method| point.get(m).is_some();
    if point.delta == 0.0 {
        let method = [Method::Magnus1, Method::Magnus2, Method::Magnus3].into_iter().find(|&m| available(m))?;
        Some(Figure {
            name: format!("fig2_delta_{:e}", point.delta),
            caption: format!("resonance: {method} (dashed) vs numerical (solid)"),
            panels: vec![method],
        })
    } else {
        let panels: Vec<Method> = [Method::Magnus1, Method::Magnus3].into_iter().filter(|&m| available(m)).collect();
        if panels.is_empty() {
            return None;
        }
        Some(Figure {
            name: format!("fig3_delta_{:e}", point.delta),
            caption: format!("delta = {:e}: first vs third order (dashed) against numerical (solid)", point.delta),
            panels,
        })
    }
}

fn plot_script(fig: &Figure, point: &SweepPoint) -> String {
    let numeric = trajectory_file_name(point.delta, Method::BlochNumeric);
    let mut s = String::new();
    let _ = writeln!(s, "# {}", fig.caption);
    let _ = writeln!(s, "# delta = {:.15e}", point.delta);
    let _ = writeln!(s, "# style: solid = numerical reference, dashed = analytic Magnus");
    let _ = writeln!(s, "# colors: blue = rho00, red = rho11, green = Re rho01, magenta = Im rho01");
    let _ = writeln!(s, "import csv");
    let _ = writeln!(s, "import os");
    let _ = writeln!(s, "import matplotlib.pyplot as plt");
    let _ = writeln!(s);
    let _ = writeln!(s, "HERE = os.path.dirname(os.path.abspath(__file__))");
    let _ = writeln!(s, "COLUMNS = [(\"rho00\", \"blue\"), (\"rho11\", \"red\"), (\"re01\", \"green\"), (\"im01\", \"magenta\")]");
    let _ = writeln!(s);
    let _ = writeln!(s, "def load(name):");
    let _ = writeln!(s, "    with open(os.path.join(HERE, name)) as f:");
    let _ = writeln!(s, "        rows = list(csv.DictReader(f))");
    let _ = writeln!(s, "    return {{k: [float(r[k]) for r in rows] for k in rows[0]}}");
    let _ = writeln!(s);
    let _ = writeln!(s, "numeric = load(\"{numeric}\")");
    let _ = writeln!(s, "panels = [");
    for m in &fig.panels {
        let _ = writeln!(s, "    (\"{m}\", load(\"{}\")),", trajectory_file_name(point.delta, *m));
    }
    let _ = writeln!(s, "]");
    let _ = writeln!(s, "fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4), squeeze=False)");
    let _ = writeln!(s, "for ax, (label, analytic) in zip(axes[0], panels):");
    let _ = writeln!(s, "    for key, color in COLUMNS:");
    let _ = writeln!(s, "        ax.plot(numeric[\"t\"], numeric[key], color=color, linestyle=\"-\")");
    let _ = writeln!(s, "        ax.plot(analytic[\"t\"], analytic[key], color=color, linestyle=\"--\")");
    let _ = writeln!(s, "    ax.set_title(label)");
    let _ = writeln!(s, "    ax.set_xlabel(\"t\")");
    let _ = writeln!(s, "fig.tight_layout()");
    let _ = writeln!(s, "fig.savefig(os.path.join(HERE, \"{}.png\"))", fig.name);
    s
}

/// Writes plot-ready CSV columns plus a matplotlib script per figure into
/// `dir/plots`. Δ = 0 yields a resonance overlay; each Δ ≠ 0 yields a
/// first-/third-order panel pair.
pub fn emit_plot_data(comparison: &Comparison, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let plot_dir = dir.join(PLOT_DIR);
    let mut written = Vec::new();
    for point in &comparison.sweep {
        let Some(fig) = figure_for(point) else { continue };
        for method in fig.panels.iter().copied().chain(std::iter::once(Method::BlochNumeric)) {
            let traj = point.get(method).expect("figure panels are filtered to available methods");
            let path = plot_dir.join(trajectory_file_name(point.delta, method));
            write_file(&path, &trajectory_csv(traj))?;
            written.push(path);
        }
        let path = plot_dir.join(format!("{}.py", fig.name));
        write_file(&path, &plot_script(&fig, point))?;
        written.push(path);
    }
    Ok(written)
}
