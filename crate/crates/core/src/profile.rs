//! Sampled velocity profiles over the normalized height z = s/delta.

use crate::error::{Error, Result};
use crate::flow::FlowParams;

/// Provenance of a profile: which construction produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Exact,
    Quartic,
    Theorem1Literal,
    Theorem1Recomputed,
    SeriesTruncated,
}

impl ProfileKind {
    /// Stable label used in file output.
    pub fn label(self) -> &'static str {
        match self {
            ProfileKind::Exact => "exact",
            ProfileKind::Quartic => "quartic",
            ProfileKind::Theorem1Literal => "theorem1-literal",
            ProfileKind::Theorem1Recomputed => "theorem1-recomputed",
            ProfileKind::SeriesTruncated => "series-truncated",
        }
    }

    pub const ALL: [ProfileKind; 5] = [
        ProfileKind::Exact,
        ProfileKind::Quartic,
        ProfileKind::Theorem1Literal,
        ProfileKind::Theorem1Recomputed,
        ProfileKind::SeriesTruncated,
    ];
}

impl std::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// An ordered table of (z, u) samples on [0, 1] with provenance.
///
/// Invariants enforced at construction: z strictly increasing starting at 0,
/// z never exceeding 1, and u(0) = 0 (no slip). A profile spanning the whole
/// layer additionally ends at z = 1; [`ProfileTable::is_full_span`] tells the
/// two apart.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    kind: ProfileKind,
    params: FlowParams,
    samples: Vec<(f64, f64)>,
}

impl ProfileTable {
    pub fn new(kind: ProfileKind, params: FlowParams, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidProfile {
                reason: "profile needs at least one sample".into(),
            });
        }
        if samples[0].0 != 0.0 {
            return Err(Error::InvalidProfile {
                reason: format!("first sample must sit at z = 0, got {}", samples[0].0),
            });
        }
        if samples[0].1 != 0.0 {
            return Err(Error::InvalidProfile {
                reason: format!("no-slip violated: u(0) = {}", samples[0].1),
            });
        }
        for (i, pair) in samples.windows(2).enumerate() {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::InvalidProfile {
                    reason: format!("z not strictly increasing at index {}", i + 1),
                });
            }
        }
        let z_last = samples.last().unwrap().0;
        if z_last > 1.0 + 1e-12 {
            return Err(Error::InvalidProfile {
                reason: format!("z must stay within [0, 1], got {z_last}"),
            });
        }
        Ok(ProfileTable {
            kind,
            params,
            samples,
        })
    }

    /// Like [`ProfileTable::new`] but additionally requires the last sample
    /// to sit at z = 1 (a profile covering the full layer).
    pub fn new_full_span(
        kind: ProfileKind,
        params: FlowParams,
        samples: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let table = ProfileTable::new(kind, params, samples)?;
        if !table.is_full_span() {
            return Err(Error::InvalidProfile {
                reason: format!(
                    "full-span profile must end at z = 1, got {}",
                    table.samples.last().unwrap().0
                ),
            });
        }
        Ok(table)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_full_span(&self) -> bool {
        self.samples.last().map(|&(z, _)| z) == Some(1.0)
    }

    /// Uniform spacing of the z grid, if it is uniform to a relative 1e-8.
    pub fn uniform_spacing(&self) -> Option<f64> {
        if self.samples.len() < 2 {
            return None;
        }
        let dz = (self.samples.last().unwrap().0 - self.samples[0].0)
            / (self.samples.len() - 1) as f64;
        for pair in self.samples.windows(2) {
            if ((pair[1].0 - pair[0].0) - dz).abs() > 1e-8 * dz {
                return None;
            }
        }
        Some(dz)
    }

    /// Velocities in sample order.
    pub fn velocities(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(_, u)| u)
    }
}

/// Uniform grid of `n` points covering [0, 1].
pub fn unit_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}
