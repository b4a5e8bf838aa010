//! Uniform time grids, cumulative quadrature, and a brute-force simplex
//! integrator used to validate the reduced nested integrals.

use crate::error::{Error, Result};

/// Uniform grid tᵢ = start + i·step, i ∈ [0, count).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl TimeGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::InvalidGrid(format!("non-finite start {start}")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if count == 0 {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        Ok(Self { start, step, count })
    }

    /// `count` nodes spanning `[start, end]` inclusive.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {count}")));
        }
        if !(end > start) {
            return Err(Error::InvalidGrid(format!("end {end} must exceed start {start}")));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    /// Reconstructs a grid from explicit node positions, rejecting empty,
    /// non-increasing or non-uniform input.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        match nodes {
            [] => Err(Error::InvalidGrid("empty grid".into())),
            [t] => Self::new(*t, 1.0, 1),
            [first, .., last] => {
                let grid = Self::spanning(*first, *last, nodes.len())?;
                let tol = 1e-9 * grid.step;
                for (i, t) in nodes.iter().enumerate() {
                    if (t - grid.node(i)).abs() > tol {
                        return Err(Error::InvalidGrid(format!("non-uniform spacing at node {i}")));
                    }
                }
                Ok(grid)
            }
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    /// Same span with `2·(count − 1) + 1` nodes.
    pub fn refined(&self) -> Self {
        Self { start: self.start, step: self.step / 2.0, count: 2 * (self.count - 1) + 1 }
    }

    pub(crate) fn same_as(&self, other: &TimeGrid) -> bool {
        self.count == other.count && self.start == other.start && self.step == other.step
    }

    fn require_at_least(&self, n: usize) -> Result<()> {
        if self.count < n {
            return Err(Error::InvalidGrid(format!("need at least {n} nodes, got {}", self.count)));
        }
        Ok(())
    }
}

/// Running integral from the grid start: `values[i] ≈ ∫_{t₀}^{tᵢ} f`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeSeries {
    grid: TimeGrid,
    values: Vec<f64>,
}

/// Panel rule used by cumulative integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Composite trapezoid, O(h²).
    #[default]
    Trapezoid,
    /// Per-panel integral of the local cubic interpolant, O(h⁴). Exact for cubics.
    Cubic,
}

impl CumulativeSeries {
    /// Wraps precomputed values (e.g. an analytic antiderivative).
    pub fn from_values(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), actual: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("grid is never empty")
    }

    /// Integrates this series once more with the given rule.
    pub fn integrate(&self, rule: QuadratureRule) -> Result<CumulativeSeries> {
        cumulative_integral_with(&self.values, &self.grid, rule)
    }

    /// Pointwise combination of two series defined on the same grid.
    pub fn zip_with(&self, other: &CumulativeSeries, f: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }
}

/// Composite-trapezoid cumulative integral.
pub fn cumulative_integral(samples: &[f64], grid: &TimeGrid) -> Result<CumulativeSeries> {
    cumulative_integral_with(samples, grid, QuadratureRule::Trapezoid)
}

pub fn cumulative_integral_with(samples: &[f64], grid: &TimeGrid, rule: QuadratureRule) -> Result<CumulativeSeries> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), actual: samples.len() });
    }
    grid.require_at_least(2)?;
    let h = grid.step();
    let n = samples.len();
    let f = samples;
    let panel = |i: usize| -> f64 {
        match rule {
            QuadratureRule::Trapezoid => 0.5 * h * (f[i] + f[i + 1]),
            QuadratureRule::Cubic => match n {
                2 => 0.5 * h * (f[0] + f[1]),
                3 if i == 0 => h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]),
                3 => h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]),
                _ if i == 0 => h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]),
                _ if i == n - 2 => h / 24.0 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]),
                _ => h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]),
            },
        }
    };
    let mut values = Vec::with_capacity(n);
    let mut acc = 0.0;
    values.push(acc);
    for i in 0..n - 1 {
        acc += panel(i);
        values.push(acc);
    }
    Ok(CumulativeSeries { grid: *grid, values })
}

/// Applies trapezoid cumulative integration `passes` times.
pub fn iterated_cumulative(samples: &[f64], grid: &TimeGrid, passes: usize) -> Result<CumulativeSeries> {
    let mut series = CumulativeSeries::from_values(*grid, samples.to_vec())?;
    for _ in 0..passes {
        series = series.integrate(QuadratureRule::Trapezoid)?;
    }
    Ok(series)
}

/// Direct evaluation of the simplex-ordered integral
/// ∫₀ᵀ dt₁ ∫₀^{t₁} dt₂ [∫₀^{t₂} dt₃] f(t₁, t₂[, t₃])
/// by nested trapezoid rules on a shared uniform lattice of `resolution`
/// nodes per dimension. Cost O(resolutionᵈ), error O(h²).
///
/// `f` receives the integration variables ordered `[t₁, t₂, (t₃)]`.
pub fn nested_integral_oracle<F>(f: F, depth: usize, upper: f64, resolution: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if !(2..=3).contains(&depth) {
        return Err(Error::UnsupportedDepth(depth));
    }
    if resolution < 8 {
        return Err(Error::ResolutionTooLow(resolution));
    }
    let h = upper / (resolution - 1) as f64;
    // Trapezoid weight of node k on [0, t_m].
    let weight = |k: usize, m: usize| -> f64 {
        if m == 0 {
            0.0
        } else if k == 0 || k == m {
            0.5 * h
        } else {
            h
        }
    };
    let mut total = 0.0;
    let mut point = [0.0; 3];
    for i in 0..resolution {
        let wi = weight(i, resolution - 1);
        point[0] = i as f64 * h;
        let mut inner = 0.0;
        for j in 0..=i {
            let wj = weight(j, i);
            if wj == 0.0 {
                continue;
            }
            point[1] = j as f64 * h;
            if depth == 2 {
                inner += wj * f(&point[..2]);
            } else {
                let mut innermost = 0.0;
                for k in 0..=j {
                    let wk = weight(k, j);
                    if wk == 0.0 {
                        continue;
                    }
                    point[2] = k as f64 * h;
                    innermost += wk * f(&point);
                }
                inner += wj * innermost;
            }
        }
        total += wi * inner;
    }
    Ok(total)
}

/// Observed convergence order from errors at successive halvings of h.
pub fn observed_order(coarse_error: f64, fine_error: f64) -> f64 {
    (coarse_error.abs() / fine_error.abs()).log2()
}
