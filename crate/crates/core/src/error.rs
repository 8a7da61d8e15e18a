//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while validating parameters or evaluating
/// the boundary-layer operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter that must be strictly positive is zero, negative or non-finite.
    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    /// The free-stream speed violates the energy bound U^2 < 2*i0.
    #[error("speed exceeds energy bound: U^2 = {speed_squared} >= 2*i0 = {energy_bound}")]
    SpeedExceedsEnergyBound { speed_squared: f64, energy_bound: f64 },

    /// A fixed rational exponent was tampered with.
    #[error("exponent `{name}` must equal {expected_num}/{expected_den}")]
    ExponentMismatch {
        name: &'static str,
        expected_num: i64,
        expected_den: i64,
    },

    /// The free-stream speed is negative or non-finite.
    #[error("free-stream speed must be finite and >= 0, got {value}")]
    InvalidSpeed { value: f64 },

    /// A velocity argument reached or passed the energy bound sqrt(2*i0).
    #[error("velocity {speed} is outside the admissible range |u| < sqrt(2*i0) = {limit}")]
    EnergyBoundReached { speed: f64, limit: f64 },

    /// Temperature ratio outside the power-law domain.
    #[error("temperature ratio must be strictly positive, got {value}")]
    NonPositiveTemperatureRatio { value: f64 },

    /// Requested series order outside the supported range.
    #[error("series order {order} outside supported range 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    /// The transformed abscissa cannot be inverted: the profile would exceed
    /// the energy bound before reaching it.
    #[error("beyond saturation: c*s = {target} exceeds the antiderivative supremum {supremum}")]
    BeyondSaturation { target: f64, supremum: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved}, requested {requested}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Bracketed root finding failed to converge.
    #[error("root finding did not converge within {max_iter} iterations")]
    RootNonConvergence { max_iter: usize },

    /// The adaptive ODE step collapsed, typically approaching saturation.
    #[error("ODE step size underflow at s = {last_valid_s}")]
    StepSizeUnderflow { last_valid_s: f64 },

    /// A profile violated an ordering or boundary invariant.
    #[error("invalid profile: {reason}")]
    InvalidProfile { reason: String },

    /// The residual stencil requires uniform spacing.
    #[error("profile samples are not uniformly spaced (index {index})")]
    NonUniformSpacing { index: usize },

    /// The residual stencil requires enough interior samples.
    #[error("profile has {have} interior samples, need at least {need}")]
    InsufficientSamples { have: usize, need: usize },

    /// The Pohlhausen shape-parameter formula divides by 1 - U^2.
    #[error("sonic denominator: |1 - U^2| = {magnitude} below 1e-12")]
    SonicDenominator { magnitude: f64 },

    /// Density must be strictly positive everywhere.
    #[error("density must be strictly positive: rho({x}, {y}) = {value}")]
    NonPositiveDensity { x: f64, y: f64, value: f64 },

    /// A coordinate fell outside the domain rectangle.
    #[error("coordinate `{name}` = {value} outside [{low}, {high}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        low: f64,
        high: f64,
    },

    /// Domain geometry violated a `DomainSpec` invariant.
    #[error("invalid domain: {reason}")]
    InvalidDomain { reason: String },

    /// A tabulated field was not a rectilinear grid.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
