//! Exponentiation of the Magnus exponent and closed-form trajectories.
//!
//! G has eigenvalues {0, −iξ, iξ}. Summing the Sylvester expansion over that
//! spectrum gives the real rotation
//! exp(G) = I + (sin ξ / ξ) G + ((1 − cos ξ) / ξ²) G².

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::magnus::{MagnusCoefficients, MagnusExponent, Order};
use crate::quadrature::TimeGrid;
use crate::reference::{Method, Trajectory};

/// Below this ξ the rotation coefficients switch to their Taylor series.
pub const XI_TAYLOR_THRESHOLD: f64 = 1e-4;

/// exp(G) for a skew-symmetric Magnus exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPropagator {
    matrix: Matrix3<f64>,
    xi: f64,
}

impl RotationPropagator {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn apply(&self, s: &BlochVector) -> BlochVector {
        BlochVector::from_vector(&(self.matrix * s.as_vector()))
    }

    /// ‖RᵀR − I‖_max
    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix3::identity()).amax()
    }
}

pub fn xi_of(exponent: &MagnusExponent) -> f64 {
    let (eta, zeta, lambda) = (exponent.eta(), exponent.zeta(), exponent.lambda());
    (lambda * lambda + zeta * zeta + eta * eta).sqrt()
}

/// (sin ξ / ξ, (1 − cos ξ) / ξ²)
fn rotation_coefficients(xi: f64) -> (f64, f64) {
    if xi < XI_TAYLOR_THRESHOLD {
        let x2 = xi * xi;
        (1.0 - x2 / 6.0 + x2 * x2 / 120.0, 0.5 - x2 / 24.0 + x2 * x2 / 720.0)
    } else {
        let half = (0.5 * xi).sin() / xi;
        (xi.sin() / xi, 2.0 * half * half)
    }
}

fn rotation(g: &Matrix3<f64>, xi: f64) -> RotationPropagator {
    let (a, b) = rotation_coefficients(xi);
    let matrix = Matrix3::identity() + g * a + (g * g) * b;
    RotationPropagator { matrix, xi }
}

pub fn expm_skew(exponent: &MagnusExponent) -> RotationPropagator {
    rotation(exponent.matrix(), xi_of(exponent))
}

/// Like [`expm_skew`] for a raw matrix; rejects non-skew input.
pub fn expm_skew_matrix(g: &Matrix3<f64>) -> Result<RotationPropagator> {
    let exponent = MagnusExponent::from_matrix(*g, Order::First, 0.0)?;
    Ok(expm_skew(&exponent))
}

/// Literal complex Sylvester sum Σⱼ e^{γⱼ} Πₖ≠ⱼ (G − γₖI)/(γⱼ − γₖ) over
/// {0, −iξ, iξ}. Requires distinct eigenvalues.
pub fn expm_sylvester(g: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let exponent = MagnusExponent::from_matrix(*g, Order::First, 0.0)?;
    let xi = xi_of(&exponent);
    if !(xi > 0.0) {
        return Err(Error::DegenerateSpectrum(xi));
    }
    let gc: Matrix3<Complex64> = g.map(|v| Complex64::new(v, 0.0));
    let eye = Matrix3::<Complex64>::identity();
    let spectrum = [Complex64::new(0.0, 0.0), Complex64::new(0.0, -xi), Complex64::new(0.0, xi)];
    let mut sum = Matrix3::<Complex64>::zeros();
    for (j, &gj) in spectrum.iter().enumerate() {
        let mut term = eye * gj.exp();
        for (k, &gk) in spectrum.iter().enumerate() {
            if k != j {
                term *= (gc - eye * gk) / (gj - gk);
            }
        }
        sum += term;
    }
    Ok(sum.map(|z| z.re))
}

/// exp(G)·(0, 0, 1) written out component-wise for the third-order exponent:
///
/// ```text
/// S₁ = −(ζη − ζη cos ξ − λ ξ sin ξ) / ξ²
/// S₂ =  (−λη + λη cos ξ − ζ ξ sin ξ) / ξ²
/// S₃ =  (η² + (λ² + ζ²) cos ξ) / ξ²
/// ```
pub fn ground_state_solution(eta: f64, zeta: f64, lambda: f64) -> BlochVector {
    let xi = (lambda * lambda + zeta * zeta + eta * eta).sqrt();
    if xi < XI_TAYLOR_THRESHOLD {
        let g = MagnusExponent::from_coefficients(eta, zeta, lambda, Order::Third, 0.0);
        return expm_skew(&g).apply(&BlochVector::ground());
    }
    let (s, c) = xi.sin_cos();
    let xi2 = xi * xi;
    BlochVector::new(
        -(zeta * eta - zeta * eta * c - lambda * xi * s) / xi2,
        (-lambda * eta + lambda * eta * c - zeta * xi * s) / xi2,
        (eta * eta + (lambda * lambda + zeta * zeta) * c) / xi2,
    )
}

/// First-order truncation (λ = λ₁ = λ₂ = 0), ξ = √(Δ′² + Ω′²).
pub fn first_order_solution(delta_prime: f64, omega_prime: f64) -> BlochVector {
    let xi = (delta_prime * delta_prime + omega_prime * omega_prime).sqrt();
    if xi < XI_TAYLOR_THRESHOLD {
        return ground_state_solution(delta_prime, omega_prime, 0.0);
    }
    let (s, c) = xi.sin_cos();
    let xi2 = xi * xi;
    BlochVector::new(
        delta_prime * omega_prime / xi2 * (-1.0 + c),
        -omega_prime / xi * s,
        delta_prime * delta_prime / xi2 + omega_prime * omega_prime / xi2 * c,
    )
}

/// Evaluates S(t) = exp(G(t))·s0 at every node. For the ground state the
/// explicit component formulas are used; any other initial state goes
/// through [`expm_skew`].
pub fn closed_form_trajectory(coeffs: &[MagnusCoefficients], grid: &TimeGrid, s0: &BlochVector) -> Result<Trajectory> {
    if coeffs.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), actual: coeffs.len() });
    }
    let order = coeffs.first().map(|c| c.order).unwrap_or(Order::First);
    let ground = *s0 == BlochVector::ground();
    let states = coeffs
        .iter()
        .map(|c| match (ground, c.order) {
            (true, Order::First) => first_order_solution(c.delta_prime, c.omega_prime),
            (true, _) => ground_state_solution(c.eta, c.zeta, c.lambda),
            (false, _) => expm_skew(&c.exponent()).apply(s0),
        })
        .collect();
    Trajectory::new(*grid, states, Method::from(order))
}

/// Rotation applied to an arbitrary vector.
pub fn propagate(exponent: &MagnusExponent, s: &Vector3<f64>) -> Vector3<f64> {
    expm_skew(exponent).matrix() * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn exponent(eta: f64, zeta: f64, lambda: f64) -> MagnusExponent {
        MagnusExponent::from_coefficients(eta, zeta, lambda, Order::Third, 0.0)
    }

    /// Taylor series with scaling and squaring; independent of the rotation form.
    fn expm_series(g: &Matrix3<f64>) -> Matrix3<f64> {
        let norm = g.amax() * 3.0;
        let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
        let a = g / 2f64.powi(squarings);
        let mut term = Matrix3::identity();
        let mut sum = Matrix3::identity();
        for k in 1..30 {
            term = term * a / k as f64;
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    /// Roots of det(G − γI) from the generic characteristic polynomial
    /// γ³ − tr(G)γ² + c₁γ − det(G), via Newton on the real root and the
    /// quadratic formula for the rest.
    fn char_poly_roots(g: &Matrix3<f64>) -> [Complex64; 3] {
        let tr = g.trace();
        let c1 = (g.trace().powi(2) - (g * g).trace()) / 2.0;
        let det = g.determinant();
        let p = |x: f64| x * x * x - tr * x * x + c1 * x - det;
        let dp = |x: f64| 3.0 * x * x - 2.0 * tr * x + c1;
        let mut x = 0.0;
        for _ in 0..100 {
            let d = dp(x);
            if d == 0.0 {
                break;
            }
            x -= p(x) / d;
        }
        // deflate: γ² + bγ + c
        let b = x - tr;
        let c = c1 + x * b;
        let disc = Complex64::new(b * b - 4.0 * c, 0.0).sqrt();
        [Complex64::new(x, 0.0), (-b + disc) / 2.0, (-b - disc) / 2.0]
    }

    fn random_exponent(rng: &mut StdRng, xi_lo: f64, xi_hi: f64) -> MagnusExponent {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            .normalize();
        let xi = (rng.random_range(xi_lo.ln()..xi_hi.ln())).exp();
        exponent(v[0] * xi, v[1] * xi, v[2] * xi)
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi_of(&exponent(0.0, 0.0, 0.0)), 0.0);
        assert_eq!(xi_of(&exponent(0.0, FRAC_PI_2, 0.0)), FRAC_PI_2);
    }

    #[test]
    fn xi_matches_characteristic_polynomial() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let e = random_exponent(&mut rng, 1e-3, 10.0);
            let xi = xi_of(&e);
            let roots = char_poly_roots(e.matrix());
            let mut imag: Vec<f64> = roots.iter().map(|r| r.im).collect();
            imag.sort_by(f64::total_cmp);
            assert!(roots.iter().all(|r| r.re.abs() < 1e-10));
            assert!((imag[0] + xi).abs() < 1e-10);
            assert!(imag[1].abs() < 1e-10);
            assert!((imag[2] - xi).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_exponent_is_identity() {
        let r = expm_skew(&exponent(0.0, 0.0, 0.0));
        assert_eq!(*r.matrix(), Matrix3::identity());
    }

    #[test]
    fn quarter_turn_about_coupling_axis() {
        let r = expm_skew(&exponent(0.0, FRAC_PI_2, 0.0));
        let s = r.apply(&BlochVector::ground());
        assert!(s.distance(&BlochVector::new(0.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn matches_series_oracle() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let e = random_exponent(&mut rng, 1e-8, 10.0);
            let r = expm_skew(&e);
            assert!((r.matrix() - expm_series(e.matrix())).amax() < 1e-10);
            assert!(r.orthogonality_defect() < 1e-12);
            assert!((r.matrix().determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_complex_sylvester_sum() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let e = random_exponent(&mut rng, 1e-2, 10.0);
            let sylvester = expm_sylvester(e.matrix()).unwrap();
            assert!((expm_skew(&e).matrix() - sylvester).amax() < 1e-10);
        }
        assert_eq!(expm_sylvester(&Matrix3::zeros()), Err(Error::DegenerateSpectrum(0.0)));
    }

    #[test]
    fn rejects_non_skew() {
        let m = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(expm_skew_matrix(&m), Err(Error::NotSkewSymmetric(_))));
        assert!(expm_sylvester(&m).is_err());
    }

    #[test]
    fn continuous_across_taylor_threshold() {
        let axis = Vector3::new(0.3, -0.5, 0.8).normalize();
        for eps in [1e-13, 1e-12, 1e-10] {
            let below = XI_TAYLOR_THRESHOLD * (1.0 - eps);
            let above = XI_TAYLOR_THRESHOLD * (1.0 + eps);
            let rb = expm_skew(&exponent(axis[0] * below, axis[1] * below, axis[2] * below));
            let ra = expm_skew(&exponent(axis[0] * above, axis[1] * above, axis[2] * above));
            assert!((rb.matrix() - ra.matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn constant_generator_composes() {
        let g = *crate::magnus::GeneratorMatrix::new(0.9, 0.4).matrix();
        let (t1, t2) = (0.37, 1.9);
        let a = expm_skew_matrix(&(g * t1)).unwrap();
        let b = expm_skew_matrix(&(g * t2)).unwrap();
        let ab = expm_skew_matrix(&(g * (t1 + t2))).unwrap();
        assert!((a.matrix() * b.matrix() - ab.matrix()).amax() < 1e-10);
    }

    #[test]
    fn norm_is_preserved() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let r = expm_skew(&random_exponent(&mut rng, 1e-6, 20.0));
            let s = BlochVector::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            assert!((r.apply(&s).norm() - s.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_equals_rotation() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..500 {
            let e = random_exponent(&mut rng, 1e-7, 12.0);
            let closed = ground_state_solution(e.eta(), e.zeta(), e.lambda());
            let rotated = expm_skew(&e).apply(&BlochVector::ground());
            assert!(closed.distance(&rotated) < 1e-12);
        }
    }

    #[test]
    fn third_component_uses_zeta_not_xi() {
        // (η² + (λ² + ξ²) cos ξ)/ξ² would exceed 1 here; the rotation gives the ζ form.
        let (eta, zeta, lambda): (f64, f64, f64) = (0.3, 1.1, 0.2);
        let xi = (eta * eta + zeta * zeta + lambda * lambda).sqrt();
        let rotated = expm_skew(&exponent(eta, zeta, lambda)).apply(&BlochVector::ground());
        let with_zeta = (eta * eta + (lambda * lambda + zeta * zeta) * xi.cos()) / (xi * xi);
        let with_xi = (eta * eta + (lambda * lambda + xi * xi) * xi.cos()) / (xi * xi);
        assert!((rotated.s3 - with_zeta).abs() < 1e-15);
        assert!((rotated.s3 - with_xi).abs() > 1e-3);
    }

    #[test]
    fn first_order_is_the_lambda_free_limit() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..1000 {
            let dp = rng.random_range(-5.0..5.0);
            let op = rng.random_range(-5.0..5.0);
            let a = ground_state_solution(dp, op, 0.0);
            let b = first_order_solution(dp, op);
            assert!(a.distance(&b) < 1e-13);
        }
    }

    #[test]
    fn resonant_pulse_areas() {
        let half = first_order_solution(0.0, FRAC_PI_2);
        assert!(half.distance(&BlochVector::new(0.0, -1.0, 0.0)) < 1e-15);
        let full = first_order_solution(0.0, PI);
        assert!(full.distance(&BlochVector::excited()) < 1e-15);
    }

    #[test]
    fn closed_form_trajectory_checks_lengths_and_general_states() {
        let grid = TimeGrid::spanning(0.0, 1.0, 3).unwrap();
        let coeffs: Vec<_> = grid
            .nodes()
            .map(|t| MagnusCoefficients::assemble(Order::Third, t, 0.2 * t, 1.5 * t, 0.01 * t, 0.001, -0.002))
            .collect();
        assert!(matches!(
            closed_form_trajectory(&coeffs[..2], &grid, &BlochVector::ground()),
            Err(Error::LengthMismatch { .. })
        ));
        let s0 = BlochVector::new(0.6, 0.0, 0.8);
        let traj = closed_form_trajectory(&coeffs, &grid, &s0).unwrap();
        assert_eq!(traj.method(), Method::Magnus3);
        for (c, s) in coeffs.iter().zip(traj.states()) {
            let expected = propagate(&c.exponent(), &s0.as_vector());
            assert!((s.as_vector() - expected).norm() < 1e-15);
        }
    }
}
