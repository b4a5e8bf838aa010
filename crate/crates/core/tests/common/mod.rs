#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use magnus_tls::{DriveConfig, Pulse, PulseShape};
use nalgebra::Matrix3;

/// Gaussian preset: τ = 1, t₀ = 6, support [0, 12], area π/2.
pub fn gaussian_preset() -> Pulse {
    Pulse::gaussian(1.0, 6.0, 1.0).unwrap().normalize_area(FRAC_PI_2).unwrap()
}

pub fn preset(shape: PulseShape, area: f64) -> Pulse {
    let (center, width) = match shape {
        PulseShape::Gaussian => (6.0, 1.0),
        _ => (6.0, 12.0),
    };
    Pulse::with_shape(shape, 1.0, center, width).unwrap().normalize_area(area).unwrap()
}

pub fn drive(pulse: Pulse, detuning_in_peaks: f64) -> DriveConfig {
    DriveConfig::new(pulse, detuning_in_peaks * pulse.peak())
}

/// exp(G) by truncated Taylor series with scaling and squaring.
pub fn expm_series(g: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = g.abs().row_sum().amax();
    let squarings = if norm > 0.125 { (norm / 0.125).log2().ceil() as i32 } else { 0 };
    let a = g / 2f64.powi(squarings);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..25 {
        term = term * a / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
