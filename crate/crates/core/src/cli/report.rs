use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::CliError;
use crate::bloch::{density_from_bloch_unchecked, BlochVector};
use crate::magnus::{build_coefficients, Order};
use crate::propagator::closed_form_trajectory;
use crate::pulse::{DriveConfig, Pulse};
use crate::reference::{integrate_bloch, Method, Trajectory};

/// Final-time density-matrix entries of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalState {
    pub rho00: f64,
    pub rho11: f64,
    pub re01: f64,
    pub im01: f64,
}

impl FinalState {
    pub fn of(s: &BlochVector) -> Self {
        let rho = density_from_bloch_unchecked(s);
        Self { rho00: rho.rho00(), rho11: rho.rho11(), re01: rho.rho01().re, im01: rho.rho01().im }
    }
}

/// One (Δ, order) comparison against the numerical reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub delta: f64,
    pub order: Order,
    /// max_t |S_magnus(t) − S_numeric(t)|₂
    pub max_err: f64,
    pub magnus_final: FinalState,
    pub numeric_final: FinalState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub pulse: Pulse,
    /// Rows ordered by Δ, then order.
    pub rows: Vec<ReportRow>,
}

impl ComparisonReport {
    pub fn row(&self, delta: f64, order: Order) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.delta == delta && r.order == order)
    }
}

/// All trajectories computed at one detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub delta: f64,
    pub numeric: Trajectory,
    pub magnus: Vec<Trajectory>,
}

impl SweepPoint {
    pub fn trajectories(&self) -> impl Iterator<Item = &Trajectory> {
        self.magnus.iter().chain(std::iter::once(&self.numeric))
    }

    pub fn get(&self, method: Method) -> Option<&Trajectory> {
        self.trajectories().find(|t| t.method() == method)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub sweep: Vec<SweepPoint>,
}

fn sweep_point(drive: DriveConfig, orders: &[Order], nodes: usize) -> crate::Result<SweepPoint> {
    let grid = drive.pulse.window_grid(nodes)?;
    let s0 = BlochVector::ground();
    let numeric = integrate_bloch(&drive, &grid, &s0)?;
    let magnus = orders
        .iter()
        .map(|&order| closed_form_trajectory(&build_coefficients(&drive, &grid, order)?, &grid, &s0))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(SweepPoint { delta: drive.detuning, numeric, magnus })
}

/// Runs every requested (Δ, order) pair plus the RK4 reference, starting from
/// the ground state. Detunings are evaluated in parallel.
pub fn run_comparison(config: &ExperimentConfig) -> Result<Comparison, CliError> {
    config.validate()?;
    let pulse = config.pulse()?;
    let orders = config.sorted_orders();
    let deltas = config.absolute_detunings(pulse.peak());
    let sweep = deltas
        .par_iter()
        .map(|&delta| sweep_point(DriveConfig::new(pulse, delta), &orders, config.grid_nodes))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(sweep.len() * orders.len());
    for point in &sweep {
        let numeric_final = FinalState::of(point.numeric.last());
        for traj in &point.magnus {
            rows.push(ReportRow {
                delta: point.delta,
                order: traj.method().magnus_order().expect("magnus trajectory"),
                max_err: traj.max_deviation(&point.numeric)?,
                magnus_final: FinalState::of(traj.last()),
                numeric_final,
            });
        }
    }
    Ok(Comparison { report: ComparisonReport { pulse, rows }, sweep })
}
