//! Two-level state representations and the map between them.
//!
//! A density matrix ρ is expanded over the Pauli generators as
//! ρ = I/2 + ½ Σⱼ Sⱼ σⱼ with Sⱼ = Tr(ρ σⱼ). Units are ℏ = 1 throughout.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for invariant checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coherence (Bloch) vector: expectation values of σ₁, σ₂, σ₃.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl BlochVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    /// The ground state |0⟩, S = (0, 0, 1).
    pub const fn ground() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub const fn excited() -> Self {
        Self::new(0.0, 0.0, -1.0)
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.s1, self.s2, self.s3)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (self.as_vector() - other.as_vector()).norm()
    }

    /// Rejects vectors outside the Bloch ball.
    pub fn check_physical(&self, tolerance: f64) -> Result<()> {
        let norm = self.norm();
        if !norm.is_finite() || norm > 1.0 + tolerance {
            return Err(Error::UnphysicalBlochVector { norm, tolerance });
        }
        Ok(())
    }
}

/// 2×2 Hermitian, unit-trace density matrix. Only the upper triangle is stored;
/// ρ₁₀ = conj(ρ₀₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho00: f64,
    rho11: f64,
    rho01: Complex64,
}

impl DensityMatrix {
    pub fn new(rho00: f64, rho11: f64, rho01: Complex64) -> Result<Self> {
        Self::with_tolerance(rho00, rho11, rho01, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(rho00: f64, rho11: f64, rho01: Complex64, tolerance: f64) -> Result<Self> {
        let rho = Self { rho00, rho11, rho01 };
        rho.validate(tolerance)?;
        Ok(rho)
    }

    /// Builds from a full 2×2 matrix without validation; the anti-Hermitian
    /// part and imaginary diagonal noise are discarded.
    pub(crate) fn from_matrix_unchecked(m: &Matrix2<Complex64>) -> Self {
        Self {
            rho00: m[(0, 0)].re,
            rho11: m[(1, 1)].re,
            rho01: (m[(0, 1)] + m[(1, 0)].conj()) * 0.5,
        }
    }

    pub fn ground() -> Self {
        Self { rho00: 1.0, rho11: 0.0, rho01: ZERO }
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho01.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(self.rho00, 0.0),
            self.rho01,
            self.rho01.conj(),
            Complex64::new(self.rho11, 0.0),
        )
    }

    pub fn validate(&self, tolerance: f64) -> Result<()> {
        let finite = self.rho00.is_finite() && self.rho11.is_finite() && self.rho01.is_finite();
        if !finite {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        for (name, p) in [("rho00", self.rho00), ("rho11", self.rho11)] {
            if p < -tolerance || p > 1.0 + tolerance {
                return Err(Error::InvalidDensityMatrix(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if (self.trace() - 1.0).abs() > tolerance {
            return Err(Error::InvalidDensityMatrix(format!("trace = {}", self.trace())));
        }
        let det = self.rho00 * self.rho11 - self.rho01.norm_sqr();
        if det < -tolerance {
            return Err(Error::InvalidDensityMatrix(format!("negative determinant {det:e}")));
        }
        Ok(())
    }
}

/// The Pauli generators σ₁, σ₂, σ₃ and their structure constants.
pub struct PauliGenerators;

impl PauliGenerators {
    const SIGMA: [[Complex64; 4]; 3] = [
        [ZERO, ONE, ONE, ZERO],
        [ZERO, Complex64::new(0.0, -1.0), I, ZERO],
        [ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0)],
    ];

    /// σⱼ for j ∈ {1, 2, 3}.
    ///
    /// # Panics
    /// If `j` is not 1, 2 or 3.
    pub fn sigma(j: usize) -> Matrix2<Complex64> {
        assert!((1..=3).contains(&j), "Pauli index must be 1, 2 or 3");
        let [a, b, c, d] = Self::SIGMA[j - 1];
        Matrix2::new(a, b, c, d)
    }

    pub fn all() -> [Matrix2<Complex64>; 3] {
        [Self::sigma(1), Self::sigma(2), Self::sigma(3)]
    }

    /// Levi-Civita symbol εᵢⱼₖ over indices 1..=3.
    pub fn epsilon(i: usize, j: usize, k: usize) -> i32 {
        match (i, j, k) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
            (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
            _ => 0,
        }
    }
}

/// Torque vector γⱼ = Tr(H σⱼ) (ℏ = 1). For the driven two-level Hamiltonian
/// γ = (Ω(t), 0, −Δ).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TorqueVector {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl TorqueVector {
    pub fn from_drive(coupling: f64, detuning: f64) -> Self {
        Self { gamma1: coupling, gamma2: 0.0, gamma3: -detuning }
    }

    /// γⱼ = Tr(H σⱼ) for a Hermitian 2×2 Hamiltonian.
    pub fn from_hamiltonian(h: &Matrix2<Complex64>) -> Self {
        let [g1, g2, g3] = PauliGenerators::all().map(|s| (h * s).trace().re);
        Self { gamma1: g1, gamma2: g2, gamma3: g3 }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.gamma1, self.gamma2, self.gamma3)
    }
}

/// Sⱼ = Tr(ρ σⱼ): S₁ = 2 Re ρ₀₁, S₂ = −2 Im ρ₀₁, S₃ = ρ₀₀ − ρ₁₁.
pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    BlochVector::new(2.0 * rho.rho01.re, -2.0 * rho.rho01.im, rho.rho00 - rho.rho11)
}

/// ρ = I/2 + ½ Σ Sⱼ σⱼ.
pub fn density_from_bloch(s: &BlochVector) -> Result<DensityMatrix> {
    density_from_bloch_with_tolerance(s, DEFAULT_TOLERANCE)
}

pub fn density_from_bloch_with_tolerance(s: &BlochVector, tolerance: f64) -> Result<DensityMatrix> {
    s.check_physical(tolerance)?;
    Ok(density_from_bloch_unchecked(s))
}

pub(crate) fn density_from_bloch_unchecked(s: &BlochVector) -> DensityMatrix {
    DensityMatrix {
        rho00: 0.5 * (1.0 + s.s3),
        rho11: 0.5 * (1.0 - s.s3),
        rho01: Complex64::new(0.5 * s.s1, -0.5 * s.s2),
    }
}
