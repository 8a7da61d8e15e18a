//! Embedded Dormand-Prince 5(4) integrator for a scalar autonomous ODE.
//!
//! Adaptive step control on the 4th/5th order difference, with a step clamp
//! so the integrator lands exactly on requested output points. The right-hand
//! side returns a `Result`; a domain failure (here: the velocity touching the
//! energy bound) rejects the step and retries with half the size instead of
//! aborting, so the solver creeps up to a saturation point before reporting
//! step-size underflow.

use crate::error::{Error, Result};

/// Dormand-Prince coefficients (the classic DOPRI5 tableau).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// 5th-order solution weights.
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub struct AdaptiveOde {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for AdaptiveOde {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
        }
    }
}

impl AdaptiveOde {
    /// Integrate `y' = f(y)` from `(t0, y0)`, reporting the state at each of
    /// `outputs` (strictly increasing, first may equal `t0`).
    pub fn solve<F>(&self, f: &F, t0: f64, y0: f64, outputs: &[f64]) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut results = Vec::with_capacity(outputs.len());
        let mut t = t0;
        let mut y = y0;
        let mut k0 = f(y)?;

        let span = outputs.last().copied().unwrap_or(t0) - t0;
        let mut h = if span > 0.0 { span * 1e-3 } else { 0.0 };
        let h_floor = span.abs() * 1e-14 + 1e-300;

        for &target in outputs {
            assert!(target >= t, "output points must be increasing");
            while t < target {
                let step = h.min(target - t);
                match self.try_step(f, y, k0, step) {
                    Ok((y_new, k_new, err_norm)) => {
                        if err_norm <= 1.0 {
                            t += step;
                            y = y_new;
                            k0 = k_new;
                            // PI-free controller: plain 5th-order growth bound.
                            let factor = if err_norm > 0.0 {
                                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                            } else {
                                5.0
                            };
                            h = (step * factor).max(h_floor);
                        } else {
                            h = (step * (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0)).max(h_floor);
                            if h <= h_floor {
                                return Err(Error::StepSizeUnderflow { last_valid_s: t });
                            }
                        }
                    }
                    Err(_) => {
                        // Right-hand side left its domain inside the step.
                        h = 0.5 * step;
                        if h <= h_floor {
                            return Err(Error::StepSizeUnderflow { last_valid_s: t });
                        }
                    }
                }
            }
            results.push(y);
        }
        Ok(results)
    }

    /// One trial step of size `h` from state `y` with cached `f(y) = k0`.
    /// Returns (new state, new slope, normalized error).
    fn try_step<F>(&self, f: &F, y: f64, k0: f64, h: f64) -> Result<(f64, f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut k = [0.0_f64; 7];
        k[0] = k0;
        for stage in 0..6 {
            let mut acc = 0.0;
            for (j, a) in A[stage].iter().enumerate().take(stage + 1) {
                acc += a * k[j];
            }
            k[stage + 1] = f(y + h * acc)?;
        }

        let mut y_new = y;
        let mut err = 0.0;
        for j in 0..7 {
            y_new += h * B5[j] * k[j];
            err += E[j] * k[j];
        }
        err *= h;

        let scale = self.abs_tol + self.rel_tol * y.abs().max(y_new.abs());
        Ok((y_new, k[6], (err / scale).abs()))
    }
}
