//! Experiment configuration: a flat `key = value` text file.
//!
//! ```text
//! # gaussian π/2 pulse, small detunings in units of the peak Rabi frequency
//! pulse.shape  = gaussian
//! pulse.width  = 1.0
//! pulse.center = 6.0
//! pulse.area   = pi/2
//! detunings    = 0, 0.05, 0.1
//! detunings.scale = peak
//! orders       = 1, 2, 3
//! grid.nodes   = 2001
//! out.dir      = out
//! ```

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use super::CliError;
use crate::magnus::Order;
use crate::pulse::{Pulse, PulseShape};

/// How entries of `detunings` are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningScale {
    /// Angular frequency, same units as 1/time.
    Absolute,
    /// Multiples of the normalized pulse's peak Rabi frequency.
    Peak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub pulse_shape: PulseShape,
    pub pulse_width: f64,
    pub pulse_center: f64,
    pub pulse_area: f64,
    pub detunings: Vec<f64>,
    pub detuning_scale: DetuningScale,
    pub orders: Vec<Order>,
    pub grid_nodes: usize,
    pub out_dir: PathBuf,
    pub emit_trajectories: bool,
    pub emit_summary: bool,
    pub emit_plots: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pulse_shape: PulseShape::Gaussian,
            pulse_width: 1.0,
            pulse_center: 6.0,
            pulse_area: FRAC_PI_2,
            detunings: vec![0.0],
            detuning_scale: DetuningScale::Absolute,
            orders: Order::ALL.to_vec(),
            grid_nodes: 2001,
            out_dir: PathBuf::from("out"),
            emit_trajectories: true,
            emit_summary: true,
            emit_plots: true,
        }
    }
}

pub const KEYS: [&str; 12] = [
    "pulse.shape",
    "pulse.width",
    "pulse.center",
    "pulse.area",
    "detunings",
    "detunings.scale",
    "orders",
    "grid.nodes",
    "out.dir",
    "emit.trajectories",
    "emit.summary",
    "emit.plots",
];

fn config_error(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config { field: field.to_string(), message: message.into() }
}

/// Parses a real number, also accepting products and quotients involving
/// `pi` (`pi/2`, `0.5*pi`, `3*pi/4`).
pub fn parse_number(text: &str) -> Option<f64> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = text;
    loop {
        let split = rest.find(['*', '/']);
        let (token, next) = match split {
            Some(i) => (&rest[..i], Some((rest.as_bytes()[i] as char, &rest[i + 1..]))),
            None => (rest, None),
        };
        let token = token.trim();
        let factor = match token.to_ascii_lowercase().as_str() {
            "pi" | "π" => PI,
            "-pi" => -PI,
            t => t.parse::<f64>().ok()?,
        };
        value = if op == '*' { value * factor } else { value / factor };
        match next {
            Some((o, tail)) => {
                op = o;
                rest = tail;
            }
            None => break,
        }
    }
    value.is_finite().then_some(value)
}

fn parse_bool(field: &str, value: &str) -> Result<bool, CliError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(config_error(field, format!("expected a boolean, got '{other}'"))),
    }
}

fn parse_list<T>(field: &str, value: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).ok_or_else(|| config_error(field, format!("cannot parse '{s}'"))))
        .collect()
}

pub fn parse_order(text: &str) -> Option<Order> {
    text.trim().parse::<u32>().ok().and_then(|k| Order::try_from(k).ok())
}

impl ExperimentConfig {
    /// Parses the config file body. Keys not present keep their defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(&format!("line {}", lineno + 1), "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(config_error(key, "unknown key"));
            }
            if seen.contains(&key) {
                return Err(config_error(key, "duplicate key"));
            }
            seen.push(key);
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let number = |v: &str| parse_number(v).ok_or_else(|| config_error(key, format!("cannot parse number '{v}'")));
        match key {
            "pulse.shape" => self.pulse_shape = value.parse().map_err(|e: crate::Error| config_error(key, e.to_string()))?,
            "pulse.width" => self.pulse_width = number(value)?,
            "pulse.center" => self.pulse_center = number(value)?,
            "pulse.area" => self.pulse_area = number(value)?,
            "detunings" => self.detunings = parse_list(key, value, parse_number)?,
            "detunings.scale" => {
                self.detuning_scale = match value.to_ascii_lowercase().as_str() {
                    "absolute" => DetuningScale::Absolute,
                    "peak" => DetuningScale::Peak,
                    other => return Err(config_error(key, format!("expected 'absolute' or 'peak', got '{other}'"))),
                }
            }
            "orders" => self.orders = parse_list(key, value, parse_order)?,
            "grid.nodes" => {
                self.grid_nodes = value.parse().map_err(|_| config_error(key, format!("expected an integer, got '{value}'")))?
            }
            "out.dir" => self.out_dir = PathBuf::from(value),
            "emit.trajectories" => self.emit_trajectories = parse_bool(key, value)?,
            "emit.summary" => self.emit_summary = parse_bool(key, value)?,
            "emit.plots" => self.emit_plots = parse_bool(key, value)?,
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_nodes < 2 {
            return Err(config_error("grid.nodes", format!("need at least 2 nodes, got {}", self.grid_nodes)));
        }
        if !(self.pulse_area > 0.0) {
            return Err(config_error("pulse.area", format!("must be positive, got {}", self.pulse_area)));
        }
        if !(self.pulse_width > 0.0) {
            return Err(config_error("pulse.width", format!("must be positive, got {}", self.pulse_width)));
        }
        if self.detunings.is_empty() {
            return Err(config_error("detunings", "list is empty"));
        }
        if self.orders.is_empty() {
            return Err(config_error("orders", "list is empty"));
        }
        Ok(())
    }

    /// Unit-peak pulse of the configured shape, rescaled to the target area.
    pub fn pulse(&self) -> Result<Pulse, CliError> {
        Pulse::with_shape(self.pulse_shape, 1.0, self.pulse_center, self.pulse_width)
            .and_then(|p| p.normalize_area(self.pulse_area))
            .map_err(|e| config_error("pulse", e.to_string()))
    }

    /// Detunings in absolute units, sorted ascending with duplicates removed.
    pub fn absolute_detunings(&self, peak: f64) -> Vec<f64> {
        let scale = match self.detuning_scale {
            DetuningScale::Absolute => 1.0,
            DetuningScale::Peak => peak,
        };
        let mut out: Vec<f64> = self.detunings.iter().map(|d| d * scale).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn sorted_orders(&self) -> Vec<Order> {
        let mut out = self.orders.clone();
        out.sort();
        out.dedup();
        out
    }

    pub fn emits_anything(&self) -> bool {
        self.emit_trajectories || self.emit_summary || self.emit_plots
    }
}
