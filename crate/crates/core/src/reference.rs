//! Numerical reference solutions: RK4 on the Bloch equation dS/dt = g(t)S and
//! RK4 on the von Neumann equation i dρ/dt = [H, ρ] with
//! H(t) = ½ [[0, Ω(t)], [Ω(t), 2Δ]].

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

use crate::bloch::{bloch_from_density, density_from_bloch_unchecked, BlochVector, DensityMatrix, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::magnus::{generator_at, Order};
use crate::pulse::DriveConfig;
use crate::quadrature::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Magnus1,
    Magnus2,
    Magnus3,
    BlochNumeric,
    VonNeumann,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Magnus1 => "magnus1",
            Method::Magnus2 => "magnus2",
            Method::Magnus3 => "magnus3",
            Method::BlochNumeric => "bloch_numeric",
            Method::VonNeumann => "von_neumann",
        }
    }

    pub fn magnus_order(&self) -> Option<Order> {
        match self {
            Method::Magnus1 => Some(Order::First),
            Method::Magnus2 => Some(Order::Second),
            Method::Magnus3 => Some(Order::Third),
            _ => None,
        }
    }
}

impl From<Order> for Method {
    fn from(order: Order) -> Self {
        match order {
            Order::First => Method::Magnus1,
            Order::Second => Method::Magnus2,
            Order::Third => Method::Magnus3,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Method::Magnus1, Method::Magnus2, Method::Magnus3, Method::BlochNumeric, Method::VonNeumann]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// Coherence-vector trajectory on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<BlochVector>,
    method: Method,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, states: Vec<BlochVector>, method: Method) -> Result<Self> {
        if states.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), actual: states.len() });
        }
        Ok(Self { grid, states, method })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[BlochVector] {
        &self.states
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn last(&self) -> &BlochVector {
        self.states.last().expect("trajectories are never empty")
    }

    /// Density matrices reconstructed from each state.
    pub fn densities(&self) -> Vec<DensityMatrix> {
        self.states.iter().map(density_from_bloch_unchecked).collect()
    }

    /// max_t | |S(t)| − 1 |
    pub fn max_norm_drift(&self) -> f64 {
        self.states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// max_t |S_self(t) − S_other(t)|₂
    pub fn max_deviation(&self, other: &Trajectory) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self.states.iter().zip(&other.states).map(|(a, b)| a.distance(b)).fold(0.0, f64::max))
    }
}

fn check_grid(grid: &TimeGrid) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid(format!("integration needs at least 2 nodes, got {}", grid.len())));
    }
    Ok(())
}

/// Classical RK4 on dS/dt = g(t) S. No renormalization.
pub fn integrate_bloch(config: &DriveConfig, grid: &TimeGrid, s0: &BlochVector) -> Result<Trajectory> {
    check_grid(grid)?;
    s0.check_physical(DEFAULT_TOLERANCE)?;
    let h = grid.step();
    let mut s = s0.as_vector();
    let mut states = Vec::with_capacity(grid.len());
    states.push(*s0);
    for i in 0..grid.len() - 1 {
        let t = grid.node(i);
        let g0 = *generator_at(config, t).matrix();
        let gm = *generator_at(config, t + 0.5 * h).matrix();
        let g1 = *generator_at(config, grid.node(i + 1)).matrix();
        let k1: Vector3<f64> = g0 * s;
        let k2 = gm * (s + k1 * (0.5 * h));
        let k3 = gm * (s + k2 * (0.5 * h));
        let k4 = g1 * (s + k3 * h);
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        states.push(BlochVector::from_vector(&s));
    }
    Trajectory::new(*grid, states, Method::BlochNumeric)
}

/// H(t) = ½ [[0, Ω], [Ω, 2Δ]] (ℏ = 1).
pub fn hamiltonian(config: &DriveConfig, t: f64) -> Matrix2<Complex64> {
    let half_omega = Complex64::new(0.5 * config.coupling(t), 0.0);
    Matrix2::new(Complex64::new(0.0, 0.0), half_omega, half_omega, Complex64::new(config.detuning, 0.0))
}

fn von_neumann_rhs(h: &Matrix2<Complex64>, rho: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    (h * rho - rho * h) * Complex64::new(0.0, -1.0)
}

/// RK4 on i dρ/dt = [H, ρ], returning the full density matrix at every node.
pub fn propagate_density(config: &DriveConfig, grid: &TimeGrid, rho0: &DensityMatrix) -> Result<Vec<Matrix2<Complex64>>> {
    check_grid(grid)?;
    rho0.validate(DEFAULT_TOLERANCE)?;
    let dt = grid.step();
    let mut rho = rho0.to_matrix();
    let mut out = Vec::with_capacity(grid.len());
    out.push(rho);
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for i in 0..grid.len() - 1 {
        let t = grid.node(i);
        let h0 = hamiltonian(config, t);
        let hm = hamiltonian(config, t + 0.5 * dt);
        let h1 = hamiltonian(config, grid.node(i + 1));
        let k1 = von_neumann_rhs(&h0, &rho);
        let k2 = von_neumann_rhs(&hm, &(rho + k1 * half));
        let k3 = von_neumann_rhs(&hm, &(rho + k2 * half));
        let k4 = von_neumann_rhs(&h1, &(rho + k3 * full));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;
        out.push(rho);
    }
    Ok(out)
}

/// Von Neumann reference mapped to coherence vectors.
pub fn integrate_von_neumann(config: &DriveConfig, grid: &TimeGrid, rho0: &DensityMatrix) -> Result<Trajectory> {
    let states = propagate_density(config, grid, rho0)?
        .iter()
        .map(|m| bloch_from_density(&DensityMatrix::from_matrix_unchecked(m)))
        .collect();
    Trajectory::new(*grid, states, Method::VonNeumann)
}
