//! Geometry of the physical domain: a long, thin region under an upper
//! boundary y = h(x) with h(0) = h(L) and a single interior maximum.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper boundary height, either a callable contract or tabulated knots
/// with linear interpolation.
#[derive(Clone)]
pub enum BoundaryHeight {
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// (x, h) knots with strictly increasing x covering [0, L].
    Tabulated(Vec<(f64, f64)>),
}

impl fmt::Debug for BoundaryHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryHeight::Analytic(_) => f.write_str("BoundaryHeight::Analytic(..)"),
            BoundaryHeight::Tabulated(knots) => {
                write!(f, "BoundaryHeight::Tabulated({} knots)", knots.len())
            }
        }
    }
}

impl BoundaryHeight {
    pub fn constant(height: f64) -> Self {
        BoundaryHeight::Analytic(Arc::new(move |_| height))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BoundaryHeight::Analytic(f) => f(x),
            BoundaryHeight::Tabulated(knots) => {
                let first = knots.first().expect("non-empty knot table");
                let last = knots.last().expect("non-empty knot table");
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                let idx = knots.partition_point(|&(kx, _)| kx <= x);
                let (x0, h0) = knots[idx - 1];
                let (x1, h1) = knots[idx];
                let t = (x - x0) / (x1 - x0);
                h0 + t * (h1 - h0)
            }
        }
    }
}

/// Validated description of the physical domain 0 < y < h(x), 0 < x < L.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    /// Domain length L.
    pub length: f64,
    /// Upper boundary height over [0, L].
    pub height: BoundaryHeight,
    /// Global maximum H of the height.
    pub max_height: f64,
    /// Minimum admissible aspect ratio L/H. The slender-domain assumption.
    pub aspect_threshold: f64,
}

/// Outcome of validating a domain: hard invariants either pass or error;
/// shape checks that the transform itself does not need are warnings.
#[derive(Debug, Clone, Default)]
pub struct DomainValidation {
    pub warnings: Vec<String>,
}

pub const DEFAULT_ASPECT_THRESHOLD: f64 = 10.0;

/// Samples used to scan an analytic height for validation.
const VALIDATION_SAMPLES: usize = 257;

impl DomainSpec {
    pub fn new(length: f64, height: BoundaryHeight, max_height: f64) -> Self {
        DomainSpec {
            length,
            height,
            max_height,
            aspect_threshold: DEFAULT_ASPECT_THRESHOLD,
        }
    }

    /// Height samples used for validation: tabulated knots or a uniform scan.
    fn sample_heights(&self) -> Vec<(f64, f64)> {
        match &self.height {
            BoundaryHeight::Tabulated(knots) => knots.clone(),
            BoundaryHeight::Analytic(_) => (0..VALIDATION_SAMPLES)
                .map(|i| {
                    let x = self.length * i as f64 / (VALIDATION_SAMPLES - 1) as f64;
                    (x, self.height.eval(x))
                })
                .collect(),
        }
    }

    /// Check the domain invariants. Positivity, equal end heights, the
    /// sampled maximum matching `max_height`, and the aspect bound are hard
    /// errors; the single-interior-maximum shape is reported as a warning.
    pub fn validate(&self) -> Result<DomainValidation> {
        if !(self.length > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "length",
                value: self.length,
            });
        }
        let samples = self.sample_heights();
        if samples.len() < 2 {
            return Err(Error::InvalidDomain {
                reason: "height table needs at least two knots".into(),
            });
        }
        for &(x, h) in &samples {
            if !(h > 0.0) {
                return Err(Error::InvalidDomain {
                    reason: format!("height must be positive, h({x}) = {h}"),
                });
            }
        }
        let h0 = samples.first().unwrap().1;
        let hl = samples.last().unwrap().1;
        let tol = 1e-9 * self.max_height.abs().max(1.0);
        if (h0 - hl).abs() > tol {
            return Err(Error::InvalidDomain {
                reason: format!("end heights differ: h(0) = {h0}, h(L) = {hl}"),
            });
        }
        let sampled_max = samples.iter().map(|&(_, h)| h).fold(f64::MIN, f64::max);
        if (sampled_max - self.max_height).abs() > tol {
            return Err(Error::InvalidDomain {
                reason: format!(
                    "sampled maximum {sampled_max} does not match declared max_height {}",
                    self.max_height
                ),
            });
        }
        if self.length / self.max_height < self.aspect_threshold {
            return Err(Error::InvalidDomain {
                reason: format!(
                    "aspect ratio L/H = {} below threshold {}",
                    self.length / self.max_height,
                    self.aspect_threshold
                ),
            });
        }

        let mut validation = DomainValidation::default();
        // Shape check: one strict interior maximum means the height never
        // rises again after it starts falling.
        let mut rising_after_fall = false;
        let mut fell = false;
        for pair in samples.windows(2) {
            let dh = pair[1].1 - pair[0].1;
            if dh < -tol {
                fell = true;
            } else if dh > tol && fell {
                rising_after_fall = true;
                break;
            }
        }
        if rising_after_fall {
            validation
                .warnings
                .push("height has more than one interior maximum".into());
        } else if !fell && (sampled_max - h0).abs() <= tol {
            validation
                .warnings
                .push("height has no interior critical point (flat boundary)".into());
        }
        Ok(validation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(length: f64, base: f64, amp: f64) -> BoundaryHeight {
        BoundaryHeight::Analytic(Arc::new(move |x| {
            base + amp * (std::f64::consts::PI * x / length).sin()
        }))
    }

    #[test]
    fn single_bump_passes_cleanly() {
        let dom = DomainSpec::new(20.0, bump(20.0, 1.0, 0.5), 1.5);
        let v = dom.validate().unwrap();
        assert!(v.warnings.is_empty());
    }

    #[test]
    fn flat_boundary_warns_but_passes() {
        let dom = DomainSpec::new(20.0, BoundaryHeight::constant(1.0), 1.0);
        let v = dom.validate().unwrap();
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn double_bump_warns() {
        let dom = DomainSpec::new(40.0, {
            BoundaryHeight::Analytic(Arc::new(move |x| {
                1.0 + 0.5 * (2.0 * std::f64::consts::PI * x / 40.0).sin().abs()
            }))
        }, 1.5);
        let v = dom.validate().unwrap();
        assert!(!v.warnings.is_empty());
    }

    #[test]
    fn rejects_squat_domain() {
        let dom = DomainSpec::new(5.0, BoundaryHeight::constant(1.0), 1.0);
        assert!(dom.validate().is_err());
    }

    #[test]
    fn rejects_unequal_ends() {
        let knots = vec![(0.0, 1.0), (10.0, 1.2), (20.0, 1.1)];
        let dom = DomainSpec::new(20.0, BoundaryHeight::Tabulated(knots), 1.2);
        assert!(dom.validate().is_err());
    }

    #[test]
    fn tabulated_interpolation() {
        let knots = vec![(0.0, 1.0), (10.0, 2.0), (20.0, 1.0)];
        let h = BoundaryHeight::Tabulated(knots);
        assert_eq!(h.eval(5.0), 1.5);
        assert_eq!(h.eval(0.0), 1.0);
        assert_eq!(h.eval(20.0), 1.0);
    }
}
