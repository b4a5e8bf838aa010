//! Truncated Magnus exponents for dS/dt = g(t) S.
//!
//! With g(t) = Δ·A + Ω(t)·B, the first three Magnus terms collapse onto the
//! skew-symmetric form
//!
//! ```text
//!        ⎛  0   η   λ ⎞
//! G(t) = ⎜ −η   0  −ζ ⎟ ,   η = Δ′ + λ₁,   ζ = Ω′ + λ₂
//!        ⎝ −λ   ζ   0 ⎠
//! ```
//!
//! where Δ′ and Ω′ are running integrals of the drive and λ, λ₁, λ₂ are the
//! second- and third-order nested-commutator corrections. Every correction
//! carries a factor of Δ, so all orders coincide on resonance.
//!
//! The nested simplex integrals are reduced to single cumulative passes by
//! integrating the innermost variables analytically (`u` is time since the
//! grid start, W = Ω′):
//!
//! ```text
//! λ  =  (Δ/2)  ∫ [u Ω − W]
//! λ₁ = −(Δ/6)  ∫ [Ω (P − 2Q) + W²/2]        P = ∫ u Ω,  Q = ∫ W
//! λ₂ = −(Δ²/6) ∫ [Ω u²/2 − 2P + Q]
//! ```

use std::fmt;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::pulse::DriveConfig;
use crate::quadrature::{cumulative_integral_with, nested_integral_oracle, CumulativeSeries, QuadratureRule, TimeGrid};

/// Rule used for every cumulative pass in the coefficient reductions.
pub const COEFFICIENT_RULE: QuadratureRule = QuadratureRule::Cubic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    First = 1,
    Second = 2,
    Third = 3,
}

impl Order {
    pub const ALL: [Order; 3] = [Order::First, Order::Second, Order::Third];

    pub fn as_u32(self) -> u32 {
        self as u32
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        match value {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            3 => Ok(Order::Third),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

/// The Bloch-equation generator g(t), rows ((0, Δ, 0), (−Δ, 0, −Ω), (0, Ω, 0)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMatrix(Matrix3<f64>);

impl GeneratorMatrix {
    pub fn new(coupling: f64, detuning: f64) -> Self {
        #[rustfmt::skip]
        let m = Matrix3::new(
            0.0,        detuning,  0.0,
            -detuning,  0.0,       -coupling,
            0.0,        coupling,  0.0,
        );
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Detuning generator A: g = Δ·A + Ω·B.
    pub fn detuning_direction() -> Matrix3<f64> {
        *Self::new(0.0, 1.0).matrix()
    }

    /// Coupling generator B.
    pub fn coupling_direction() -> Matrix3<f64> {
        *Self::new(1.0, 0.0).matrix()
    }
}

pub fn generator_at(config: &DriveConfig, t: f64) -> GeneratorMatrix {
    GeneratorMatrix::new(config.coupling(t), config.detuning)
}

/// Coefficients of the truncated exponent at one time node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusCoefficients {
    pub eta: f64,
    pub zeta: f64,
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub delta_prime: f64,
    pub omega_prime: f64,
    pub order: Order,
    pub t: f64,
}

impl MagnusCoefficients {
    /// Assembles η, ζ, λ for the given truncation from the raw integrals.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        order: Order,
        t: f64,
        delta_prime: f64,
        omega_prime: f64,
        lambda: f64,
        lambda1: f64,
        lambda2: f64,
    ) -> Self {
        let (lambda, lambda1, lambda2) = match order {
            Order::First => (0.0, 0.0, 0.0),
            Order::Second => (lambda, 0.0, 0.0),
            Order::Third => (lambda, lambda1, lambda2),
        };
        Self {
            eta: delta_prime + lambda1,
            zeta: omega_prime + lambda2,
            lambda,
            lambda1,
            lambda2,
            delta_prime,
            omega_prime,
            order,
            t,
        }
    }

    /// ξ = √(λ² + ζ² + η²).
    pub fn xi(&self) -> f64 {
        (self.lambda * self.lambda + self.zeta * self.zeta + self.eta * self.eta).sqrt()
    }

    pub fn exponent(&self) -> MagnusExponent {
        MagnusExponent::from_coefficients(self.eta, self.zeta, self.lambda, self.order, self.t)
    }
}

/// Skew-symmetric exponent G⁽ᵏ⁾(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusExponent {
    matrix: Matrix3<f64>,
    pub order: Order,
    pub t: f64,
}

impl MagnusExponent {
    pub fn from_coefficients(eta: f64, zeta: f64, lambda: f64, order: Order, t: f64) -> Self {
        #[rustfmt::skip]
        let matrix = Matrix3::new(
            0.0,      eta,   lambda,
            -eta,     0.0,   -zeta,
            -lambda,  zeta,  0.0,
        );
        Self { matrix, order, t }
    }

    /// Wraps an arbitrary matrix, rejecting anything that is not skew-symmetric.
    pub fn from_matrix(matrix: Matrix3<f64>, order: Order, t: f64) -> Result<Self> {
        let asym = (matrix + matrix.transpose()).amax();
        let scale = matrix.amax().max(1.0);
        if !(asym <= 1e-12 * scale) {
            return Err(Error::NotSkewSymmetric(asym));
        }
        Ok(Self { matrix, order, t })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn eta(&self) -> f64 {
        self.matrix[(0, 1)]
    }

    pub fn zeta(&self) -> f64 {
        self.matrix[(2, 1)]
    }

    pub fn lambda(&self) -> f64 {
        self.matrix[(0, 2)]
    }
}

/// Ω′(t) = ∫_{t₀}^{t} Ω.
pub fn omega_prime(config: &DriveConfig, grid: &TimeGrid) -> Result<CumulativeSeries> {
    let samples = config.pulse.sample(grid);
    cumulative_integral_with(&samples, grid, COEFFICIENT_RULE)
}

/// Δ′(t) = Δ·(t − t₀), evaluated exactly.
pub fn delta_prime(config: &DriveConfig, grid: &TimeGrid) -> Result<CumulativeSeries> {
    require_two_nodes(grid)?;
    let values = (0..grid.len()).map(|i| config.detuning * (i as f64 * grid.step())).collect();
    CumulativeSeries::from_values(*grid, values)
}

/// Shared intermediate series for the reductions.
struct Reduction {
    grid: TimeGrid,
    omega: Vec<f64>,
    elapsed: Vec<f64>,
    /// W = ∫ Ω
    w: CumulativeSeries,
    /// P = ∫ u Ω
    p: CumulativeSeries,
    /// Q = ∫ W
    q: CumulativeSeries,
}

impl Reduction {
    fn new(config: &DriveConfig, grid: &TimeGrid) -> Result<Self> {
        require_two_nodes(grid)?;
        let omega = config.pulse.sample(grid);
        let elapsed: Vec<f64> = (0..grid.len()).map(|i| i as f64 * grid.step()).collect();
        let w = cumulative_integral_with(&omega, grid, COEFFICIENT_RULE)?;
        let u_omega: Vec<f64> = elapsed.iter().zip(&omega).map(|(u, o)| u * o).collect();
        let p = cumulative_integral_with(&u_omega, grid, COEFFICIENT_RULE)?;
        let q = w.integrate(COEFFICIENT_RULE)?;
        Ok(Self { grid: *grid, omega, elapsed, w, p, q })
    }

    fn integrate(&self, integrand: Vec<f64>, scale: f64) -> Result<CumulativeSeries> {
        let cum = cumulative_integral_with(&integrand, &self.grid, COEFFICIENT_RULE)?;
        CumulativeSeries::from_values(self.grid, cum.into_values().into_iter().map(|v| scale * v).collect())
    }

    fn lambda(&self, detuning: f64) -> Result<CumulativeSeries> {
        let integrand = (0..self.grid.len())
            .map(|i| self.elapsed[i] * self.omega[i] - self.w.values()[i])
            .collect();
        self.integrate(integrand, 0.5 * detuning)
    }

    fn lambda1(&self, detuning: f64) -> Result<CumulativeSeries> {
        let (w, p, q) = (self.w.values(), self.p.values(), self.q.values());
        let integrand = (0..self.grid.len())
            .map(|i| self.omega[i] * (p[i] - 2.0 * q[i]) + 0.5 * w[i] * w[i])
            .collect();
        self.integrate(integrand, -detuning / 6.0)
    }

    fn lambda2(&self, detuning: f64) -> Result<CumulativeSeries> {
        let (p, q) = (self.p.values(), self.q.values());
        let integrand = (0..self.grid.len())
            .map(|i| {
                let u = self.elapsed[i];
                0.5 * self.omega[i] * u * u - 2.0 * p[i] + q[i]
            })
            .collect();
        self.integrate(integrand, -detuning * detuning / 6.0)
    }
}

/// λ(t) = (Δ/2) ∫₀ᵗ dt₁ ∫₀^{t₁} dt₂ (Ω₁ − Ω₂).
pub fn lambda_second(config: &DriveConfig, grid: &TimeGrid) -> Result<CumulativeSeries> {
    Reduction::new(config, grid)?.lambda(config.detuning)
}

/// λ₁(t) = −(Δ/6) ∫∫∫ (Ω₁(Ω₂ − 2Ω₃) + Ω₂Ω₃).
pub fn lambda_one(config: &DriveConfig, grid: &TimeGrid) -> Result<CumulativeSeries> {
    Reduction::new(config, grid)?.lambda1(config.detuning)
}

/// λ₂(t) = −(Δ²/6) ∫∫∫ (Ω₁ − 2Ω₂ + Ω₃).
pub fn lambda_two(config: &DriveConfig, grid: &TimeGrid) -> Result<CumulativeSeries> {
    Reduction::new(config, grid)?.lambda2(config.detuning)
}

/// Coefficient series of the order-`order` exponent at every grid node.
pub fn build_coefficients(config: &DriveConfig, grid: &TimeGrid, order: Order) -> Result<Vec<MagnusCoefficients>> {
    let reduction = Reduction::new(config, grid)?;
    let n = grid.len();
    let delta = delta_prime(config, grid)?;
    let zeros = || CumulativeSeries::from_values(*grid, vec![0.0; n]);
    let lambda = if order >= Order::Second { reduction.lambda(config.detuning)? } else { zeros()? };
    let (lambda1, lambda2) = if order >= Order::Third {
        (reduction.lambda1(config.detuning)?, reduction.lambda2(config.detuning)?)
    } else {
        (zeros()?, zeros()?)
    };
    Ok((0..n)
        .map(|i| {
            MagnusCoefficients::assemble(
                order,
                grid.node(i),
                delta.values()[i],
                reduction.w.values()[i],
                lambda.values()[i],
                lambda1.values()[i],
                lambda2.values()[i],
            )
        })
        .collect())
}

pub fn build_exponent(config: &DriveConfig, grid: &TimeGrid, order: Order) -> Result<Vec<MagnusExponent>> {
    Ok(build_coefficients(config, grid, order)?.iter().map(MagnusCoefficients::exponent).collect())
}

fn require_two_nodes(grid: &TimeGrid) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {}", grid.len())));
    }
    Ok(())
}

/// Direct simplex evaluation of λ, λ₁, λ₂ at `t_start + elapsed` from the
/// literal triple-integral integrands, for cross-checking the reductions.
pub mod oracle {
    use super::*;

    pub fn lambda_second(config: &DriveConfig, t_start: f64, elapsed: f64, resolution: usize) -> Result<f64> {
        let om = |u: f64| config.coupling(t_start + u);
        let v = nested_integral_oracle(|t| om(t[0]) - om(t[1]), 2, elapsed, resolution)?;
        Ok(0.5 * config.detuning * v)
    }

    pub fn lambda_one(config: &DriveConfig, t_start: f64, elapsed: f64, resolution: usize) -> Result<f64> {
        let om = |u: f64| config.coupling(t_start + u);
        let v = nested_integral_oracle(
            |t| {
                let (o1, o2, o3) = (om(t[0]), om(t[1]), om(t[2]));
                o1 * (o2 - 2.0 * o3) + o2 * o3
            },
            3,
            elapsed,
            resolution,
        )?;
        Ok(-config.detuning / 6.0 * v)
    }

    pub fn lambda_two(config: &DriveConfig, t_start: f64, elapsed: f64, resolution: usize) -> Result<f64> {
        let om = |u: f64| config.coupling(t_start + u);
        let v = nested_integral_oracle(|t| om(t[0]) - 2.0 * om(t[1]) + om(t[2]), 3, elapsed, resolution)?;
        Ok(-config.detuning * config.detuning / 6.0 * v)
    }
}
