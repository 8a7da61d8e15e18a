//! The quartic velocity-profile family and the one-step Picard approximants
//! built from it.
//!
//! The quartic u(z) = A z + B z^2 + C z^3 + D z^4 is pinned by the wall and
//! upper-boundary conditions u(0) = 0, u(1) = U, u'(1) = 0, u''(1) = 0, which
//! fix the four coefficients in terms of the free-stream speed U and the
//! shape parameter lambda (zero when U is constant along the layer).
//!
//! One Picard integration of the truncated series through the quartic yields
//! the small-velocity approximant. Two closed forms are shipped:
//!
//! * `literal`: delta*c*[z + (6/25)(1/(2*i0))(4U^2/3) z^4], the printed form;
//! * `recomputed`: the same integral executed exactly, whose correction is a
//!   degree-9 polynomial with leading term (4U^2/3) z^3.
//!
//! The two differ in the leading correction order (z^4 vs z^3); both are kept
//! so reports can adjudicate them against the exact solver.

use crate::error::{Error, Result};
use crate::flow::{self, FlowParams};
use crate::numeric::quadrature;
use crate::profile::{ProfileKind, ProfileTable};
use crate::series;

/// Quartic profile coefficients (A, B, C, D) with their generating data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticProfile {
    /// Coefficients of z, z^2, z^3, z^4.
    pub coeffs: [f64; 4],
    pub free_stream_speed: f64,
    pub shape_parameter: f64,
}

impl QuarticProfile {
    pub fn eval(&self, z: f64) -> f64 {
        let [a, b, c, d] = self.coeffs;
        z * (a + z * (b + z * (c + z * d)))
    }

    /// du/dz from the coefficients.
    pub fn slope(&self, z: f64) -> f64 {
        let [a, b, c, d] = self.coeffs;
        a + z * (2.0 * b + z * (3.0 * c + z * 4.0 * d))
    }

    /// d2u/dz2 from the coefficients.
    pub fn curvature(&self, z: f64) -> f64 {
        let [_, b, c, d] = self.coeffs;
        2.0 * b + z * (6.0 * c + z * 12.0 * d)
    }

    /// Sample on a z grid as a profile table.
    pub fn profile(&self, params: &FlowParams, z_grid: &[f64]) -> Result<ProfileTable> {
        let samples = z_grid.iter().map(|&z| (z, self.eval(z))).collect();
        ProfileTable::new(ProfileKind::Quartic, params.clone(), samples)
    }
}

/// Coefficients of the boundary-condition-pinned quartic:
/// A = U(2 + lambda/6), B = -U lambda/2, C = U(lambda/2 - 2),
/// D = U(1 - lambda/6). The physically meaningful lambda range is
/// [-12, 12]; any real value is accepted.
pub fn quartic_coeffs(free_stream_speed: f64, shape_parameter: f64) -> QuarticProfile {
    let u = free_stream_speed;
    let l = shape_parameter;
    QuarticProfile {
        coeffs: [
            u * (2.0 + l / 6.0),
            -u * l / 2.0,
            u * (l / 2.0 - 2.0),
            u * (1.0 - l / 6.0),
        ],
        free_stream_speed: u,
        shape_parameter: l,
    }
}

/// Shape parameter lambda = [-delta/(1 - U^2)] dU/dell from an analytic
/// free-stream derivative. Errors when the printed denominator 1 - U^2
/// vanishes (|1 - U^2| < 1e-12).
pub fn shape_parameter_from_derivative(
    free_stream_speed: f64,
    speed_gradient: f64,
    thickness: f64,
) -> Result<f64> {
    let denom = 1.0 - free_stream_speed * free_stream_speed;
    if denom.abs() < 1e-12 {
        return Err(Error::SonicDenominator {
            magnitude: denom.abs(),
        });
    }
    if speed_gradient == 0.0 {
        return Ok(0.0);
    }
    Ok(-thickness / denom * speed_gradient)
}

/// Shape parameter with dU/dell estimated by a central difference of the
/// free-stream speed profile (step 1e-6 times the position scale).
pub fn shape_parameter_of<F: Fn(f64) -> f64>(
    free_stream: F,
    thickness: f64,
    position: f64,
) -> Result<f64> {
    let step = 1e-6 * position.abs().max(1.0);
    let gradient = (free_stream(position + step) - free_stream(position - step)) / (2.0 * step);
    shape_parameter_from_derivative(free_stream(position), gradient, thickness)
}

/// One Picard integration of the truncated series through an input profile:
/// u_next(z) = delta * c * integral_0^z S_N(u(tau)) d tau, evaluated on the
/// given z grid by cumulative adaptive quadrature (absolute tolerance 1e-12
/// per segment).
pub fn picard_step<F: Fn(f64) -> f64>(
    input: F,
    params: &FlowParams,
    order: usize,
    z_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    // Only positivity of the fields the integral uses is required; the
    // free-stream speed may sit at the energy bound (the flat quartic
    // touches U only at z = 1, which no quadrature node samples).
    for (name, value) in [
        ("total_energy", params.total_energy),
        ("wall_gradient", params.wall_gradient),
        ("thickness", params.thickness),
    ] {
        if !(value > 0.0) {
            return Err(Error::NonPositiveParameter { name, value });
        }
    }
    let coeffs = series::binomial_coeffs(order)?;
    let scale = params.thickness * params.wall_gradient;
    let energy_bound = params.energy_bound();

    // The quadrature integrand cannot return a Result; domain violations
    // surface as NaN and are rejected after each segment.
    let integrand = |tau: f64| {
        let u = input(tau);
        let x = u * u / energy_bound;
        if x < 1.0 {
            series::horner(coeffs.coeffs(), x)
        } else {
            f64::NAN
        }
    };

    let mut samples = Vec::with_capacity(z_grid.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (i, &z) in z_grid.iter().enumerate() {
        if i == 0 {
            if z != 0.0 {
                return Err(Error::InvalidProfile {
                    reason: format!("picard grid must start at z = 0, got {z}"),
                });
            }
            samples.push((0.0, 0.0));
            continue;
        }
        acc += quadrature::integrate_abs(&integrand, prev, z, 1e-12)?.value;
        if acc.is_nan() {
            return Err(Error::EnergyBoundReached {
                speed: input(z),
                limit: params.speed_limit(),
            });
        }
        samples.push((z, scale * acc));
        prev = z;
    }
    Ok(samples)
}

/// Which closed form of the one-step approximant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproximantForm {
    /// The printed z^4 correction.
    Literal,
    /// The Picard integral executed exactly: a degree-9 correction starting
    /// at z^3.
    Recomputed,
}

impl ApproximantForm {
    pub fn profile_kind(self) -> ProfileKind {
        match self {
            ApproximantForm::Literal => ProfileKind::Theorem1Literal,
            ApproximantForm::Recomputed => ProfileKind::Theorem1Recomputed,
        }
    }
}

/// Correction polynomial of the recomputed form: the exact integral
/// P(z) = integral_0^z (2 tau - 2 tau^3 + tau^4)^2 d tau, scaled by U^2.
/// Expanding the square and integrating term by term:
/// P(z)/U^2 = 4/3 z^3 - 8/5 z^5 + 2/3 z^6 + 4/7 z^7 - 1/2 z^8 + 1/9 z^9.
pub fn squared_quartic_integral(free_stream_speed: f64, z: f64) -> f64 {
    // Horner on the bracket [4/3, 0, -8/5, 2/3, 4/7, -1/2, 1/9] in z.
    let inner = 4.0 / 3.0
        + z * (0.0
            + z * (-8.0 / 5.0
                + z * (2.0 / 3.0 + z * (4.0 / 7.0 + z * (-0.5 + z * (1.0 / 9.0))))));
    free_stream_speed * free_stream_speed * z * z * z * inner
}

/// The one-step approximant at normalized height z in [0, 1].
///
/// Literal: delta*c*[z + (6/25)(1/(2*i0))(4 U^2/3) z^4].
/// Recomputed: delta*c*[z + (6/25)(1/(2*i0)) P(z)] with the exact P.
pub fn theorem1_eval(form: ApproximantForm, z: f64, params: &FlowParams) -> f64 {
    let alpha = flow::ratio_to_f64(params.series_exponent);
    let u = params.free_stream_speed;
    let correction = match form {
        ApproximantForm::Literal => 4.0 * u * u / 3.0 * z * z * z * z,
        ApproximantForm::Recomputed => squared_quartic_integral(u, z),
    };
    params.thickness * params.wall_gradient * (z + alpha / params.energy_bound() * correction)
}

/// Approximant sampled on a z grid as a profile table.
pub fn theorem1_profile(
    form: ApproximantForm,
    params: &FlowParams,
    z_grid: &[f64],
) -> Result<ProfileTable> {
    let samples = z_grid
        .iter()
        .map(|&z| (z, theorem1_eval(form, z, params)))
        .collect();
    ProfileTable::new(form.profile_kind(), params.clone(), samples)
}

/// Least-squares slope of ln|y| against ln x; the empirical leading order
/// of y(x) on the sampled window.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.abs().ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::unit_grid;

    fn fixture_params() -> FlowParams {
        // delta = c = 1, 2*i0 = 1, U = 1. The speed sits exactly at the
        // energy bound, which the algebraic forms tolerate; the record is
        // built directly, bypassing the strict-inequality validation.
        FlowParams {
            free_stream_speed: 1.0,
            total_energy: 0.5,
            wall_gradient: 1.0,
            thickness: 1.0,
            ..FlowParams::default()
        }
    }

    #[test]
    fn quartic_flat_shape() {
        let q = quartic_coeffs(1.0, 0.0);
        assert_eq!(q.coeffs, [2.0, 0.0, -2.0, 1.0]);
    }

    #[test]
    fn quartic_shape_six() {
        let q = quartic_coeffs(1.0, 6.0);
        assert_eq!(q.coeffs, [3.0, -3.0, 1.0, 0.0]);
    }

    #[test]
    fn quartic_reaches_free_stream() {
        for &(u, l) in &[(1.0, 0.0), (0.5, -7.0), (2.0, 12.0), (0.1, 3.3)] {
            let q = quartic_coeffs(u, l);
            let sum: f64 = q.coeffs.iter().sum();
            assert!((sum - u).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_parameter_constant_free_stream() {
        assert_eq!(shape_parameter_of(|_| 0.5, 1.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn shape_parameter_linear_free_stream() {
        // U(ell) = 0.5 + 0.1 ell at ell = 0: -1/(1 - 0.25) * 0.1 = -2/15.
        let lambda = shape_parameter_of(|ell| 0.5 + 0.1 * ell, 1.0, 0.0).unwrap();
        assert!((lambda - (-2.0 / 15.0)).abs() < 1e-9);
    }

    #[test]
    fn shape_parameter_sonic_error() {
        assert!(matches!(
            shape_parameter_of(|_| 1.0, 1.0, 0.0),
            Err(Error::SonicDenominator { .. })
        ));
    }

    #[test]
    fn picard_zero_input_is_linear() {
        let p = FlowParams::new(0.0, 0.5, 2.0, 0.7).unwrap();
        let grid = unit_grid(21);
        let out = picard_step(|_| 0.0, &p, 4, &grid).unwrap();
        for &(z, u) in &out {
            assert!((u - p.thickness * p.wall_gradient * z).abs() <= 1e-12);
        }
    }

    #[test]
    fn picard_order_zero_is_linear_for_any_input() {
        let p = FlowParams::new(0.3, 0.5, 1.0, 1.0).unwrap();
        let grid = unit_grid(11);
        let quartic = quartic_coeffs(0.3, 0.0);
        let out = picard_step(|z| quartic.eval(z), &p, 0, &grid).unwrap();
        for &(z, u) in &out {
            assert!((u - p.thickness * p.wall_gradient * z).abs() <= 1e-12);
        }
    }

    #[test]
    fn picard_matches_recomputed_closed_form() {
        // Order-1 Picard through the flat quartic is exactly the recomputed
        // approximant; quadrature vs closed-form polynomial to 1e-10.
        let p = fixture_params();
        let grid = unit_grid(41);
        let quartic = quartic_coeffs(p.free_stream_speed, 0.0);
        let out = picard_step(|z| quartic.eval(z), &p, 1, &grid).unwrap();
        for &(z, u) in &out {
            let closed = theorem1_eval(ApproximantForm::Recomputed, z, &p);
            assert!((u - closed).abs() <= 1e-10, "z = {z}: {u} vs {closed}");
        }
    }

    #[test]
    fn picard_rejects_saturated_input() {
        let p = FlowParams::new(0.0, 0.5, 1.0, 1.0).unwrap();
        let grid = unit_grid(5);
        let res = picard_step(|_| 2.0, &p, 2, &grid);
        assert!(res.is_err());
    }

    #[test]
    fn literal_closed_form_values() {
        let p = fixture_params();
        assert_eq!(theorem1_eval(ApproximantForm::Literal, 0.0, &p), 0.0);
        // z = 1: 1 + (6/25)(4/3) = 1.32.
        let top = theorem1_eval(ApproximantForm::Literal, 1.0, &p);
        assert!((top - 1.32).abs() < 1e-14);
    }

    #[test]
    fn recomputed_closed_form_values() {
        let p = fixture_params();
        assert_eq!(theorem1_eval(ApproximantForm::Recomputed, 0.0, &p), 0.0);
        // P(1) = 367/630, so u(1) = 1 + 0.24 * 367/630.
        let top = theorem1_eval(ApproximantForm::Recomputed, 1.0, &p);
        let expected = 1.0 + 0.24 * 367.0 / 630.0;
        assert!((top - expected).abs() < 1e-14, "{top} vs {expected}");
    }

    #[test]
    fn zero_speed_collapses_both_forms() {
        let p = FlowParams::new(0.0, 0.5, 1.5, 0.8).unwrap();
        for z in [0.0, 0.25, 0.9, 1.0] {
            let linear = p.thickness * p.wall_gradient * z;
            assert_eq!(theorem1_eval(ApproximantForm::Literal, z, &p), linear);
            assert_eq!(theorem1_eval(ApproximantForm::Recomputed, z, &p), linear);
        }
    }

    #[test]
    fn wall_slope_is_thickness_times_gradient() {
        // d u/d z at z = 0 equals delta * c for both forms (the chain rule
        // du/dz = delta * du/ds through the normalization z = s/delta).
        let p = FlowParams::new(0.4, 0.5, 2.0, 0.6).unwrap();
        let h = 1e-6;
        for form in [ApproximantForm::Literal, ApproximantForm::Recomputed] {
            let slope = theorem1_eval(form, h, &p) / h;
            let expected = p.thickness * p.wall_gradient;
            assert!(
                (slope - expected).abs() <= 1e-6 * expected,
                "{form:?}: {slope}"
            );
        }
    }

    #[test]
    fn leading_correction_orders_differ() {
        // (approximant - delta*c*z) scales as z^3 recomputed, z^4 literal;
        // the log-log slope over [1e-3, 1e-2] separates them decisively.
        let p = FlowParams::new(0.1, 0.5, 0.01, 1.0).unwrap();
        let linear = p.thickness * p.wall_gradient;
        let window: Vec<f64> = (0..20)
            .map(|i| 1e-3 * (10f64).powf(i as f64 / 19.0))
            .collect();
        for (form, expected) in [
            (ApproximantForm::Recomputed, 3.0),
            (ApproximantForm::Literal, 4.0),
        ] {
            let pts: Vec<(f64, f64)> = window
                .iter()
                .map(|&z| (z, theorem1_eval(form, z, &p) - linear * z))
                .collect();
            let slope = log_log_slope(&pts);
            assert!(
                (slope - expected).abs() <= 0.05,
                "{form:?}: slope {slope}, expected {expected}"
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn quartic_boundary_conditions(u in 0.0f64..2.0, l in -12.0f64..12.0) {
                let q = quartic_coeffs(u, l);
                prop_assert!(q.eval(0.0) == 0.0);
                prop_assert!((q.eval(1.0) - u).abs() < 1e-12);
                prop_assert!(q.slope(1.0).abs() < 1e-12);
                prop_assert!(q.curvature(1.0).abs() < 1e-12);
            }

            #[test]
            fn approximants_start_linear(z in 0.0f64..=1.0, u in 0.0f64..0.9) {
                let p = FlowParams::new(u, 0.5, 1.0, 1.0).unwrap();
                let linear = p.thickness * p.wall_gradient * z;
                for form in [ApproximantForm::Literal, ApproximantForm::Recomputed] {
                    let v = theorem1_eval(form, z, &p);
                    prop_assert!(v >= linear - 1e-15);
                }
            }
        }
    }
}
