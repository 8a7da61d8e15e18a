//! Bracketed root finding for monotone functions.
//!
//! Bisection with a secant candidate each iteration: the secant step is taken
//! when it lands strictly inside the bracket, otherwise the midpoint is.
//! Globally convergent on any sign-changing bracket, no derivative needed.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Find `x` in `[lo, hi]` with `f(x) = 0`, assuming `f(lo) <= 0 <= f(hi)`
/// (or the reverse). Stops when the bracket width is below `x_tol`.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, x_tol: f64) -> Result<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);

    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    assert!(
        fa.signum() != fb.signum(),
        "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
    );

    for _ in 0..MAX_ITER {
        if (b - a).abs() <= x_tol {
            return Ok(0.5 * (a + b));
        }

        // Secant candidate, midpoint fallback.
        let mid = 0.5 * (a + b);
        let mut x = if fb != fa {
            a - fa * (b - a) / (fb - fa)
        } else {
            mid
        };
        if !(x > a && x < b) {
            x = mid;
        }
        // Keep the secant from stalling against one edge of the bracket.
        let min_step = 0.01 * (b - a);
        if (x - a) < min_step || (b - x) < min_step {
            x = mid;
        }

        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Err(Error::RootNonConvergence { max_iter: MAX_ITER })
}
