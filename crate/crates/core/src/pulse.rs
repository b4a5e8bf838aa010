//! Coupling envelopes Ω(t) and the drive configuration (Ω(t), Δ).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::TimeGrid;

/// Half-width of the Gaussian support window in units of τ.
pub const GAUSSIAN_SUPPORT_WIDTHS: f64 = 6.0;

/// Simpson panels used by [`Pulse::area`].
const AREA_PANELS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseShape {
    Gaussian,
    SineSquared,
    Rectangular,
}

impl PulseShape {
    pub fn name(&self) -> &'static str {
        match self {
            PulseShape::Gaussian => "gaussian",
            PulseShape::SineSquared => "sine_squared",
            PulseShape::Rectangular => "rectangular",
        }
    }
}

impl fmt::Display for PulseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PulseShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" => Ok(PulseShape::Gaussian),
            "sine_squared" | "sin2" | "sine2" => Ok(PulseShape::SineSquared),
            "rectangular" | "rect" | "square" => Ok(PulseShape::Rectangular),
            other => Err(Error::InvalidPulse(format!("unknown shape '{other}'"))),
        }
    }
}

/// A real, non-negative coupling envelope, hard-truncated to a closed support
/// window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    shape: PulseShape,
    peak: f64,
    center: f64,
    width: f64,
    support: (f64, f64),
}

impl Pulse {
    pub fn new(shape: PulseShape, peak: f64, center: f64, width: f64, support: (f64, f64)) -> Result<Self> {
        if !(peak.is_finite() && peak >= 0.0) {
            return Err(Error::InvalidPulse(format!("peak must be finite and non-negative, got {peak}")));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidPulse(format!("width must be positive, got {width}")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidPulse(format!("non-finite center {center}")));
        }
        let (lo, hi) = support;
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidPulse(format!("empty support [{lo}, {hi}]")));
        }
        Ok(Self { shape, peak, center, width, support })
    }

    /// Gaussian with standard deviation `width`, truncated at ±6 widths.
    pub fn gaussian(peak: f64, center: f64, width: f64) -> Result<Self> {
        let half = GAUSSIAN_SUPPORT_WIDTHS * width;
        Self::new(PulseShape::Gaussian, peak, center, width, (center - half, center + half))
    }

    /// sin² envelope lasting `duration`, centred on `center`.
    pub fn sine_squared(peak: f64, center: f64, duration: f64) -> Result<Self> {
        let half = 0.5 * duration;
        Self::new(PulseShape::SineSquared, peak, center, duration, (center - half, center + half))
    }

    /// Flat-top pulse lasting `duration`, centred on `center`.
    pub fn rectangular(peak: f64, center: f64, duration: f64) -> Result<Self> {
        let half = 0.5 * duration;
        Self::new(PulseShape::Rectangular, peak, center, duration, (center - half, center + half))
    }

    /// Builds a pulse of the given shape with the conventional support for
    /// that shape (see the shape-specific constructors).
    pub fn with_shape(shape: PulseShape, peak: f64, center: f64, width: f64) -> Result<Self> {
        match shape {
            PulseShape::Gaussian => Self::gaussian(peak, center, width),
            PulseShape::SineSquared => Self::sine_squared(peak, center, width),
            PulseShape::Rectangular => Self::rectangular(peak, center, width),
        }
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn duration(&self) -> f64 {
        self.support.1 - self.support.0
    }

    /// Closed-interval membership, with slack of a few ulps of the duration
    /// so grid nodes computed as `start + i·h` do not fall off the ends.
    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * self.duration();
        t >= self.support.0 - slack && t <= self.support.1 + slack
    }

    /// Ω(t). Zero outside the support.
    pub fn evaluate(&self, t: f64) -> f64 {
        if !self.contains(t) {
            return 0.0;
        }
        match self.shape {
            PulseShape::Gaussian => {
                let x = (t - self.center) / self.width;
                self.peak * (-0.5 * x * x).exp()
            }
            PulseShape::SineSquared => {
                // sin²(π(t − t_start)/T) written about the window midpoint
                let (lo, hi) = self.support;
                let mid = 0.5 * (lo + hi);
                let c = (PI * (t - mid) / (hi - lo)).cos();
                self.peak * c * c
            }
            PulseShape::Rectangular => self.peak,
        }
    }

    /// ∫ Ω(t) dt over the support, by composite Simpson.
    pub fn area(&self) -> f64 {
        let (lo, hi) = self.support;
        let n = AREA_PANELS;
        let h = (hi - lo) / n as f64;
        let mut sum = self.evaluate(lo) + self.evaluate(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * self.evaluate(lo + i as f64 * h);
        }
        sum * h / 3.0
    }

    /// Rescales the peak so that the area equals `target`.
    pub fn normalize_area(&self, target: f64) -> Result<Pulse> {
        if !(target.is_finite() && target >= 0.0) {
            return Err(Error::InvalidPulse(format!("target area must be non-negative, got {target}")));
        }
        let area = self.area();
        if !(area > 0.0) {
            return Err(Error::ZeroArea);
        }
        Pulse::new(self.shape, self.peak * (target / area), self.center, self.width, self.support)
    }

    pub fn sample(&self, grid: &TimeGrid) -> Vec<f64> {
        grid.nodes().map(|t| self.evaluate(t)).collect()
    }

    /// Uniform grid of `nodes` points covering the support window.
    pub fn window_grid(&self, nodes: usize) -> Result<TimeGrid> {
        TimeGrid::spanning(self.support.0, self.support.1, nodes)
    }
}

/// Drive parameters: envelope Ω(t) and constant detuning Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    pub pulse: Pulse,
    pub detuning: f64,
}

impl DriveConfig {
    pub fn new(pulse: Pulse, detuning: f64) -> Self {
        Self { pulse, detuning }
    }

    pub fn coupling(&self, t: f64) -> f64 {
        self.pulse.evaluate(t)
    }

    pub fn with_detuning(&self, detuning: f64) -> Self {
        Self { detuning, ..*self }
    }
}
