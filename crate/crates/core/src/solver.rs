//! Reference solution of the reduced equation du/ds = c * f(u) by separable
//! quadrature and root inversion, an independent adaptive Runge-Kutta
//! integration, and a finite-difference residual check of the original
//! second-order form f * u'' = f' * u'.
//!
//! Separation gives F(u) = c * s with
//!
//! ```text
//! F(u) = integral_0^u (1 - v^2/(2*i0))^(6/25) dv
//! ```
//!
//! F is strictly increasing and bounded; its supremum at the energy bound
//! sqrt(2*i0) caps how far any profile can extend (saturation).

use crate::error::{Error, Result};
use crate::flow::{self, FlowParams};
use crate::numeric::quadrature;
use crate::numeric::rootfind::bracketed_root;
use crate::numeric::runge_kutta::AdaptiveOde;
use crate::profile::{ProfileKind, ProfileTable};

/// Default absolute quadrature tolerance for the antiderivative.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Default bracket tolerance for root inversion.
pub const INVERT_TOL: f64 = 1e-12;

/// Relative tolerance of the adaptive ODE route.
pub const ODE_REL_TOL: f64 = 1e-10;

/// The antiderivative F of the separated equation, with its saturation
/// supremum precomputed. Immutable after construction; safe to share
/// across threads.
#[derive(Debug, Clone)]
pub struct Antiderivative {
    params: FlowParams,
    abs_tol: f64,
    /// Upper end of the invertible bracket, just inside the energy bound.
    bracket_hi: f64,
    /// F at `bracket_hi`; targets beyond this are saturated.
    invertible_sup: f64,
    /// F at the energy bound itself (the improper-endpoint supremum).
    supremum: f64,
    /// Monotone (u, F(u)) knots used to narrow inversion brackets.
    cache: Vec<(f64, f64)>,
}

/// Number of warm-up knots in the bracketing cache.
const CACHE_KNOTS: usize = 64;

impl Antiderivative {
    pub fn new(params: &FlowParams) -> Result<Self> {
        Self::with_tolerance(params, QUADRATURE_TOL)
    }

    /// Build with a custom absolute quadrature tolerance (used by the
    /// refinement-invariance checks).
    pub fn with_tolerance(params: &FlowParams, abs_tol: f64) -> Result<Self> {
        let params = params.clone().validated()?;
        let limit = params.speed_limit();
        let bracket_hi = limit * (1.0 - 1e-12);

        let integrand = integrand_fn(&params);
        // The endpoint integral converges (exponent 6/25 > -1) but its
        // derivative blows up there; the adaptive splitter piles panels onto
        // the endpoint. A machine-level relative floor keeps very large
        // scales (huge i0) convergent.
        let supremum = quadrature::integrate(&integrand, 0.0, limit, abs_tol, 1e-14)?.value;
        let invertible_sup =
            quadrature::integrate(&integrand, 0.0, bracket_hi, abs_tol, 1e-14)?.value;

        let mut cache = Vec::with_capacity(CACHE_KNOTS + 1);
        cache.push((0.0, 0.0));
        let mut acc = 0.0;
        let mut prev = 0.0;
        for i in 1..=CACHE_KNOTS {
            let u = bracket_hi * i as f64 / CACHE_KNOTS as f64;
            acc += quadrature::integrate(&integrand, prev, u, abs_tol, 1e-14)?.value;
            cache.push((u, acc));
            prev = u;
        }

        Ok(Antiderivative {
            params,
            abs_tol,
            bracket_hi,
            invertible_sup,
            supremum,
            cache,
        })
    }

    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    /// The improper-endpoint supremum F(sqrt(2*i0)^-).
    pub fn supremum(&self) -> f64 {
        self.supremum
    }

    /// F(u) = integral of the separated factor from 0 to u. Strictly
    /// increasing, F(u) < u since the integrand is below 1 on (0, bound).
    pub fn eval(&self, speed: f64) -> Result<f64> {
        if !(0.0..self.params.speed_limit()).contains(&speed) {
            return Err(Error::EnergyBoundReached {
                speed,
                limit: self.params.speed_limit(),
            });
        }
        let integrand = integrand_fn(&self.params);
        Ok(quadrature::integrate(&integrand, 0.0, speed, self.abs_tol, 1e-14)?.value)
    }

    /// The integrand (1 - u^2/(2*i0))^(6/25), also F'(u).
    pub fn derivative(&self, speed: f64) -> Result<f64> {
        let x = flow::speed_fraction(speed, &self.params)?;
        let alpha = flow::ratio_to_f64(self.params.series_exponent);
        Ok((alpha * (-x).ln_1p()).exp())
    }

    /// Invert the separated relation: the unique u with F(u) = c * s.
    ///
    /// Bisection/secant on a cache-narrowed bracket, then two Newton polish
    /// steps with the analytic F'. Fails with [`Error::BeyondSaturation`]
    /// when c * s exceeds the supremum.
    pub fn invert(&self, transformed_height: f64) -> Result<f64> {
        let target = self.params.wall_gradient * transformed_height;
        if transformed_height < 0.0 {
            return Err(Error::OutOfDomain {
                name: "s",
                value: transformed_height,
                low: 0.0,
                high: self.invertible_sup / self.params.wall_gradient,
            });
        }
        if target == 0.0 {
            return Ok(0.0);
        }
        if target > self.invertible_sup {
            return Err(Error::BeyondSaturation {
                target,
                supremum: self.supremum,
            });
        }

        // Narrow the bracket with the warm-up knots. The knots carry their
        // own quadrature error, so fall back to the full bracket when the
        // narrowed one misses the sign change.
        let idx = self.cache.partition_point(|&(_, f)| f < target);
        let mut lo = if idx == 0 { 0.0 } else { self.cache[idx - 1].0 };
        let mut hi = if idx >= self.cache.len() {
            self.bracket_hi
        } else {
            self.cache[idx].0
        };

        let objective = |u: f64| self.eval(u).unwrap_or(f64::INFINITY) - target;
        if !(objective(lo) <= 0.0 && objective(hi) >= 0.0) {
            lo = 0.0;
            hi = self.bracket_hi;
        }
        let mut root = bracketed_root(&objective, lo, hi, INVERT_TOL)?;

        // Newton polish toward machine precision; F' >= (1-x)^alpha stays
        // well away from zero on the bracket interior.
        for _ in 0..2 {
            let f = self.eval(root)? - target;
            let d = self.derivative(root)?;
            let step = f / d;
            let candidate = root - step;
            if candidate > 0.0 && candidate < self.bracket_hi {
                root = candidate;
            }
        }
        Ok(root)
    }

    /// Exact profile on an increasing grid of transformed heights starting
    /// at 0, normalized by the layer thickness to z = s/delta.
    pub fn profile(&self, s_grid: &[f64]) -> Result<ProfileTable> {
        validate_grid(s_grid)?;
        let delta = self.params.thickness;
        let mut samples = Vec::with_capacity(s_grid.len());
        for &s in s_grid {
            samples.push((s / delta, self.invert(s)?));
        }
        ProfileTable::new(ProfileKind::Exact, self.params.clone(), samples)
    }
}

fn integrand_fn(params: &FlowParams) -> impl Fn(f64) -> f64 {
    let energy_bound = params.energy_bound();
    let alpha = flow::ratio_to_f64(params.series_exponent);
    move |v: f64| {
        let x = (v * v / energy_bound).min(1.0);
        (alpha * (-x).ln_1p()).exp()
    }
}

/// Convenience wrapper: F(u) for one-off evaluation.
pub fn antiderivative_value(speed: f64, params: &FlowParams) -> Result<f64> {
    Antiderivative::new(params)?.eval(speed)
}

/// Convenience wrapper: the unique u with F(u) = c * s.
pub fn invert_profile(transformed_height: f64, params: &FlowParams) -> Result<f64> {
    Antiderivative::new(params)?.invert(transformed_height)
}

/// Transformed heights s_i = z_i * delta for a uniform unit grid of n points.
pub fn layer_grid(params: &FlowParams, n: usize) -> Vec<f64> {
    crate::profile::unit_grid(n)
        .into_iter()
        .map(|z| z * params.thickness)
        .collect()
}

fn validate_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::InvalidProfile {
            reason: "empty grid".into(),
        });
    }
    if s_grid[0] != 0.0 {
        return Err(Error::InvalidProfile {
            reason: format!("grid must start at s = 0, got {}", s_grid[0]),
        });
    }
    for pair in s_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidProfile {
                reason: "grid not strictly increasing".into(),
            });
        }
    }
    Ok(())
}

/// Integrate du/ds = c * f(u) with an adaptive embedded Runge-Kutta pair,
/// independent of the quadrature route, and sample at the grid points.
pub fn solve_ode(s_grid: &[f64], params: &FlowParams) -> Result<ProfileTable> {
    let params = params.clone().validated()?;
    validate_grid(s_grid)?;

    let c = params.wall_gradient;
    let rhs = |u: f64| Ok(c * flow::nonlinear_factor(u, &params)?);
    let ode = AdaptiveOde {
        rel_tol: ODE_REL_TOL,
        abs_tol: 1e-13,
    };
    let velocities = ode.solve(&rhs, 0.0, 0.0, s_grid)?;

    let delta = params.thickness;
    let samples = s_grid
        .iter()
        .zip(velocities)
        .map(|(&s, u)| (s / delta, u))
        .collect();
    ProfileTable::new(ProfileKind::Exact, params, samples)
}

/// Residual report of the second-order form over a uniformly spaced profile.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    /// Sup-norm of f*u'' - f'*u' over the interior samples.
    pub sup_norm: f64,
    /// Stencil spacing in the transformed height s.
    pub spacing: f64,
    /// Number of interior points entering the sup-norm.
    pub interior_points: usize,
}

/// Minimum interior samples the residual stencil accepts.
pub const MIN_INTERIOR_SAMPLES: usize = 5;

/// Check a profile against the original second-order relation
/// f * u'' = f' * u' by centered finite differences.
///
/// u' and u'' come from the sampled profile; f and its velocity derivative
/// are analytic, with f' = (df/du) * u' by the chain rule. For profiles that
/// satisfy the reduced first-order equation the residual vanishes at the
/// stencil order O(spacing^2); approximants leave an O(1) residual.
pub fn verify_reduction(profile: &ProfileTable, params: &FlowParams) -> Result<ResidualReport> {
    let params = params.clone().validated()?;
    let samples = profile.samples();
    if samples.len() < MIN_INTERIOR_SAMPLES + 2 {
        return Err(Error::InsufficientSamples {
            have: samples.len().saturating_sub(2),
            need: MIN_INTERIOR_SAMPLES,
        });
    }
    let dz = (samples.last().unwrap().0 - samples[0].0) / (samples.len() - 1) as f64;
    for (i, pair) in samples.windows(2).enumerate() {
        if ((pair[1].0 - pair[0].0) - dz).abs() > 1e-8 * dz {
            return Err(Error::NonUniformSpacing { index: i + 1 });
        }
    }
    let ds = dz * params.thickness;

    let mut sup = 0.0_f64;
    for i in 1..samples.len() - 1 {
        let u_prev = samples[i - 1].1;
        let u = samples[i].1;
        let u_next = samples[i + 1].1;

        let first = (u_next - u_prev) / (2.0 * ds);
        let second = (u_next - 2.0 * u + u_prev) / (ds * ds);

        let factor = flow::nonlinear_factor(u, &params)?;
        let factor_slope = flow::nonlinear_factor_velocity_derivative(u, &params)?;

        let residual = factor * second - factor_slope * first * first;
        sup = sup.max(residual.abs());
    }

    Ok(ResidualReport {
        sup_norm: sup,
        spacing: ds,
        interior_points: samples.len() - 2,
    })
}
