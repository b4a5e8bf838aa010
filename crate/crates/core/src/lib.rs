//! Closed-form Magnus propagators for a laser-driven two-level system.
//!
//! The coherence vector S obeys dS/dt = g(t)S. Truncating the Magnus series
//! at orders 1–3 yields a skew-symmetric exponent whose exponential is a
//! rotation of S; the crate evaluates those rotations and compares them with
//! fixed-step numerical references.

// `!(x > 0.0)` guards below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod cli;
pub mod error;
pub mod magnus;
pub mod propagator;
pub mod pulse;
pub mod quadrature;
pub mod reference;

pub use bloch::{bloch_from_density, density_from_bloch, BlochVector, DensityMatrix, PauliGenerators, TorqueVector};
pub use error::{Error, Result};
pub use magnus::{build_coefficients, build_exponent, GeneratorMatrix, MagnusCoefficients, MagnusExponent, Order};
pub use propagator::{closed_form_trajectory, expm_skew, xi_of, RotationPropagator};
pub use pulse::{DriveConfig, Pulse, PulseShape};
pub use quadrature::{CumulativeSeries, TimeGrid};
pub use reference::{integrate_bloch, integrate_von_neumann, Method, Trajectory};
