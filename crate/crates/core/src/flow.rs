//! Physical parameters of the layer and the scalar building blocks every
//! other module evaluates: the nonlinear factor of the reduced equation and
//! the power-law viscosity ratio.
//!
//! Quantities may be supplied nondimensionalized (e.g. `total_energy = 1/2`
//! makes the energy bound `2*i0 = 1`); the library is unit-agnostic.

use num::rational::Ratio;

use crate::error::{Error, Result};

/// Series exponent alpha = 6/25, kept as an exact rational.
pub const SERIES_EXPONENT: Ratio<i64> = Ratio::new_raw(6, 25);

/// Viscosity exponent omega = 19/25, kept as an exact rational.
pub const VISCOSITY_EXPONENT: Ratio<i64> = Ratio::new_raw(19, 25);

/// Default polytropic exponent of the adiabatic atmosphere.
pub const DEFAULT_POLYTROPIC_EXPONENT: f64 = 1.405;

/// Physical constants of one boundary-layer problem.
///
/// `wall_gradient` is the positive continuous extension of du/ds to the wall
/// (the no-back-flow constant), `thickness` the layer height in transformed
/// coordinates, `total_energy` the constant c_p * T0.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowParams {
    /// Free-stream speed U at the upper boundary.
    pub free_stream_speed: f64,
    /// Total energy i0 = c_p * T0; the admissible speeds satisfy u^2 < 2*i0.
    pub total_energy: f64,
    /// Wall velocity gradient c = du/ds at s = 0, strictly positive.
    pub wall_gradient: f64,
    /// Layer thickness delta in transformed coordinates, strictly positive.
    pub thickness: f64,
    /// Series exponent, fixed at 6/25.
    pub series_exponent: Ratio<i64>,
    /// Viscosity exponent, fixed at 19/25.
    pub viscosity_exponent: Ratio<i64>,
    /// Polytropic exponent b of the atmosphere law.
    pub polytropic_exponent: f64,
    /// Wall pressure p0, strictly positive.
    pub wall_pressure: f64,
    /// Absolute surface temperature T0, strictly positive.
    pub surface_temperature: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            free_stream_speed: 0.0,
            total_energy: 0.5,
            wall_gradient: 1.0,
            thickness: 1.0,
            series_exponent: SERIES_EXPONENT,
            viscosity_exponent: VISCOSITY_EXPONENT,
            polytropic_exponent: DEFAULT_POLYTROPIC_EXPONENT,
            wall_pressure: 1.0,
            surface_temperature: 1.0,
        }
    }
}

impl FlowParams {
    /// Construct from the four quantities that vary between runs, keeping
    /// library defaults for the rest, and validate.
    pub fn new(free_stream_speed: f64, total_energy: f64, wall_gradient: f64, thickness: f64) -> Result<Self> {
        FlowParams {
            free_stream_speed,
            total_energy,
            wall_gradient,
            thickness,
            ..FlowParams::default()
        }
        .validated()
    }

    /// Twice the total energy; the squared speed limit.
    pub fn energy_bound(&self) -> f64 {
        2.0 * self.total_energy
    }

    /// The speed limit sqrt(2*i0) that no admissible velocity may reach.
    pub fn speed_limit(&self) -> f64 {
        self.energy_bound().sqrt()
    }

    /// Check every invariant, returning the record unchanged on success.
    /// Idempotent: a validated record validates to an identical record.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Check every invariant; reports the first violated one by name.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("total_energy", self.total_energy),
            ("wall_gradient", self.wall_gradient),
            ("thickness", self.thickness),
            ("wall_pressure", self.wall_pressure),
            ("surface_temperature", self.surface_temperature),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        if !self.free_stream_speed.is_finite() || self.free_stream_speed < 0.0 {
            return Err(Error::InvalidSpeed {
                value: self.free_stream_speed,
            });
        }
        let speed_squared = self.free_stream_speed * self.free_stream_speed;
        if speed_squared >= self.energy_bound() {
            return Err(Error::SpeedExceedsEnergyBound {
                speed_squared,
                energy_bound: self.energy_bound(),
            });
        }
        if self.series_exponent != SERIES_EXPONENT {
            return Err(Error::ExponentMismatch {
                name: "series_exponent",
                expected_num: 6,
                expected_den: 25,
            });
        }
        if self.viscosity_exponent != VISCOSITY_EXPONENT {
            return Err(Error::ExponentMismatch {
                name: "viscosity_exponent",
                expected_num: 19,
                expected_den: 25,
            });
        }
        if !(self.polytropic_exponent > 1.0) {
            return Err(Error::NonPositiveParameter {
                name: "polytropic_exponent",
                value: self.polytropic_exponent,
            });
        }
        Ok(())
    }
}

/// Exact rational as f64, used to apply the fixed exponents.
pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The nonlinear factor f(u) = (1 - u^2/(2*i0))^(-6/25) of the reduced
/// equation. Always >= 1 on the admissible range, diverging at the bound.
///
/// The fractional power is applied as exp(-alpha * ln(1 - x)) with the
/// exact rational alpha.
pub fn nonlinear_factor(speed: f64, params: &FlowParams) -> Result<f64> {
    let x = speed_fraction(speed, params)?;
    let alpha = ratio_to_f64(params.series_exponent);
    Ok((-alpha * (-x).ln_1p()).exp())
}

/// x = u^2 / (2*i0), the variable of the series expansion.
/// Errors when the speed reaches the energy bound (x >= 1).
pub fn speed_fraction(speed: f64, params: &FlowParams) -> Result<f64> {
    let x = speed * speed / params.energy_bound();
    if !(x < 1.0) {
        return Err(Error::EnergyBoundReached {
            speed,
            limit: params.speed_limit(),
        });
    }
    Ok(x)
}

/// Derivative of the nonlinear factor with respect to the velocity:
/// df/du = alpha * (u / i0) * (1 - x)^(-alpha - 1).
pub fn nonlinear_factor_velocity_derivative(speed: f64, params: &FlowParams) -> Result<f64> {
    let x = speed_fraction(speed, params)?;
    let alpha = ratio_to_f64(params.series_exponent);
    Ok(alpha * speed / params.total_energy * (-(alpha + 1.0) * (-x).ln_1p()).exp())
}

/// Power-law viscosity ratio mu/mu_h = (T/T_h)^(19/25).
pub fn viscosity_ratio(temperature_ratio: f64) -> Result<f64> {
    if !(temperature_ratio > 0.0) {
        return Err(Error::NonPositiveTemperatureRatio {
            value: temperature_ratio,
        });
    }
    let omega = ratio_to_f64(VISCOSITY_EXPONENT);
    Ok((omega * temperature_ratio.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_energy_params() -> FlowParams {
        // 2*i0 = 1 keeps x = u^2.
        FlowParams::new(0.1, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn default_params_validate() {
        FlowParams::default().validate().unwrap();
    }

    #[test]
    fn accepts_inspection_example() {
        FlowParams::new(0.1, 0.5, 1.0, 1.0).unwrap();
    }

    #[test]
    fn rejects_speed_beyond_energy_bound() {
        let err = FlowParams::new(1.1, 0.5, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::SpeedExceedsEnergyBound { .. }));
    }

    #[test]
    fn rejects_zero_wall_gradient() {
        let err = FlowParams::new(0.1, 0.5, 0.0, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveParameter {
                name: "wall_gradient",
                value: 0.0
            }
        );
    }

    #[test]
    fn validation_is_idempotent() {
        let p = FlowParams::new(0.3, 0.5, 2.0, 0.7).unwrap();
        let q = p.clone().validated().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn factor_identity_at_rest() {
        let p = unit_energy_params();
        assert_eq!(nonlinear_factor(0.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn factor_at_half_fraction() {
        // x = 1/2 gives 2^(6/25); high-precision reference value.
        let p = unit_energy_params();
        let u = (0.5_f64).sqrt();
        let f = nonlinear_factor(u, &p).unwrap();
        assert!((f - 1.180_992_661_429_530_4).abs() < 1e-14);
    }

    #[test]
    fn factor_near_singularity_is_finite() {
        // x = 0.999999 -> (1e-6)^(-6/25), still finite.
        let p = unit_energy_params();
        let u = 0.999_999_f64.sqrt();
        let f = nonlinear_factor(u, &p).unwrap();
        assert!((f - 27.542_287_033_381_664).abs() < 1e-9);
        assert!(f.is_finite());
    }

    #[test]
    fn factor_domain_error_at_bound() {
        let p = unit_energy_params();
        assert!(matches!(
            nonlinear_factor(1.0, &p),
            Err(Error::EnergyBoundReached { .. })
        ));
    }

    #[test]
    fn viscosity_identity_and_reference() {
        assert_eq!(viscosity_ratio(1.0).unwrap(), 1.0);
        assert!((viscosity_ratio(2.0).unwrap() - 1.693_490_624_725_054_3).abs() < 1e-14);
    }

    #[test]
    fn viscosity_rejects_zero_temperature() {
        assert!(matches!(
            viscosity_ratio(0.0),
            Err(Error::NonPositiveTemperatureRatio { .. })
        ));
    }

    #[test]
    fn factor_derivative_matches_finite_difference() {
        let p = unit_energy_params();
        let u = 0.4;
        let h = 1e-6;
        let fd = (nonlinear_factor(u + h, &p).unwrap() - nonlinear_factor(u - h, &p).unwrap())
            / (2.0 * h);
        let analytic = nonlinear_factor_velocity_derivative(u, &p).unwrap();
        assert!((fd - analytic).abs() < 1e-9);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn factor_is_even(u in -0.999f64..0.999) {
                let p = unit_energy_params();
                let plus = nonlinear_factor(u, &p).unwrap();
                let minus = nonlinear_factor(-u, &p).unwrap();
                prop_assert_eq!(plus, minus);
            }

            #[test]
            fn factor_at_least_one_and_monotone(u in 0.0f64..0.998, bump in 1e-6f64..1e-3) {
                let p = unit_energy_params();
                let lo = nonlinear_factor(u, &p).unwrap();
                let hi = nonlinear_factor((u + bump).min(0.9995), &p).unwrap();
                prop_assert!(lo >= 1.0);
                prop_assert!(hi >= lo);
            }

            #[test]
            fn viscosity_is_multiplicative(a in 0.05f64..20.0, b in 0.05f64..20.0) {
                let joint = viscosity_ratio(a * b).unwrap();
                let split = viscosity_ratio(a).unwrap() * viscosity_ratio(b).unwrap();
                // Ulp-scale tolerance: rounding in the exponent of exp(w*ln t)
                // is amplified by the exponent magnitude.
                let omega = ratio_to_f64(VISCOSITY_EXPONENT);
                let amplification = 1.0 + (omega * (a * b).ln()).abs();
                let tol = 4.0 * f64::EPSILON * amplification * joint.abs();
                prop_assert!((joint - split).abs() <= tol);
            }
        }
    }
}
