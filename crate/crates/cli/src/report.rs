//! Profile comparison: all approximant forms evaluated on one grid and
//! measured against the exact solver.

use serde::Serialize;

use gaslayer::pohlhausen::{self, ApproximantForm};
use gaslayer::profile::unit_grid;
use gaslayer::series;
use gaslayer::solver::{self, Antiderivative};
use gaslayer::{Error, FlowParams, ProfileKind, ProfileTable};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Distance and residual metrics for one profile kind.
#[derive(Debug, Clone, Serialize)]
pub struct KindMetrics {
    pub kind: String,
    /// Sup-norm distance to the exact profile over the grid.
    pub sup_norm_distance: f64,
    /// Root-mean-square distance to the exact profile.
    pub rms_distance: f64,
    /// Sup-norm of the second-order-form residual; absent when the grid is
    /// too coarse for the stencil.
    pub residual_sup_norm: Option<f64>,
    /// Number of interior points entering the residual.
    pub residual_points: usize,
    /// True when the residual could not be computed at stencil confidence.
    pub low_confidence_residual: bool,
    /// Finite-difference du/dz at the wall (expected: delta * c).
    pub wall_slope: f64,
    /// Rank by sup-norm distance, 1 = closest (the exact profile itself).
    pub rank: usize,
}

/// Full comparison of the five profile constructions.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub zs: Vec<f64>,
    /// Transformed heights s = z * delta.
    pub ss: Vec<f64>,
    pub exact: Vec<f64>,
    pub quartic: Vec<f64>,
    pub literal: Vec<f64>,
    pub recomputed: Vec<f64>,
    pub series: Vec<f64>,
    pub metrics: Vec<KindMetrics>,
    /// Kind labels sorted by sup-norm distance (ties by label).
    pub ranking: Vec<String>,
    /// Whether the recomputed form stays at least as close as the literal
    /// form on z in [0, 1/2], the expected ordering at small parameters.
    pub half_span_ordering_ok: bool,
}

impl Comparison {
    pub fn velocities(&self, kind: ProfileKind) -> &[f64] {
        match kind {
            ProfileKind::Exact => &self.exact,
            ProfileKind::Quartic => &self.quartic,
            ProfileKind::Theorem1Literal => &self.literal,
            ProfileKind::Theorem1Recomputed => &self.recomputed,
            ProfileKind::SeriesTruncated => &self.series,
        }
    }

    pub fn metrics_for(&self, kind: ProfileKind) -> &KindMetrics {
        self.metrics
            .iter()
            .find(|m| m.kind == kind.label())
            .expect("metrics cover every kind")
    }
}

/// Exact profile by quadrature inversion on the configured grid.
fn exact_profile(params: &FlowParams, n: usize) -> CliResult<ProfileTable> {
    let antiderivative = Antiderivative::new(params)?;
    let grid = solver::layer_grid(params, n);
    Ok(antiderivative.profile(&grid)?)
}

/// Profile of the truncated-series equation du/ds = c * S_N(u), solved by
/// the adaptive Runge-Kutta integrator. Isolates series-truncation error.
fn series_profile(params: &FlowParams, order: usize, n: usize) -> CliResult<ProfileTable> {
    let coeffs = series::binomial_coeffs(order)?;
    let c = params.wall_gradient;
    let rhs = move |u: f64| -> gaslayer::Result<f64> {
        Ok(c * series::eval_series(&coeffs, u, params)?)
    };
    let ode = gaslayer::numeric::runge_kutta::AdaptiveOde {
        rel_tol: 1e-10,
        abs_tol: 1e-13,
    };
    let s_grid = solver::layer_grid(params, n);
    let velocities = ode.solve(&rhs, 0.0, 0.0, &s_grid)?;
    let samples = s_grid
        .iter()
        .zip(velocities)
        .map(|(&s, u)| (s / params.thickness, u))
        .collect();
    Ok(ProfileTable::new(
        ProfileKind::SeriesTruncated,
        params.clone(),
        samples,
    )?)
}

fn distances(reference: &[f64], candidate: &[f64]) -> (f64, f64) {
    let mut sup = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    for (r, c) in reference.iter().zip(candidate) {
        let d = (r - c).abs();
        sup = sup.max(d);
        sum_sq += d * d;
    }
    (sup, (sum_sq / reference.len() as f64).sqrt())
}

/// Run the full comparison for one parameter set.
pub fn compare(config: &RunConfig) -> CliResult<Comparison> {
    let params = config.validate()?;
    let n = config.grid;
    let zs = unit_grid(n);
    let ss: Vec<f64> = zs.iter().map(|&z| z * params.thickness).collect();

    let exact = exact_profile(&params, n)?;
    let quartic = pohlhausen::quartic_coeffs(params.free_stream_speed, 0.0)
        .profile(&params, &zs)?;
    let literal = pohlhausen::theorem1_profile(ApproximantForm::Literal, &params, &zs)?;
    let recomputed = pohlhausen::theorem1_profile(ApproximantForm::Recomputed, &params, &zs)?;
    let series_table = series_profile(&params, config.series_order, n)?;

    let tables = [&exact, &quartic, &literal, &recomputed, &series_table];
    let exact_us: Vec<f64> = exact.velocities().collect();
    let dz = 1.0 / (n - 1) as f64;

    let mut metrics = Vec::with_capacity(tables.len());
    for table in tables {
        let us: Vec<f64> = table.velocities().collect();
        let (sup, rms) = distances(&exact_us, &us);
        let (residual, points, low_confidence) =
            match solver::verify_reduction(table, &params) {
                Ok(report) => (Some(report.sup_norm), report.interior_points, false),
                Err(Error::InsufficientSamples { have, .. }) => (None, have, true),
                Err(other) => return Err(other.into()),
            };
        if let Some(r) = residual {
            if !r.is_finite() {
                return Err(CliError::Io(format!(
                    "non-finite residual for {}",
                    table.kind()
                )));
            }
        }
        let wall_slope = (us[1] - us[0]) / dz;
        if !sup.is_finite() || !rms.is_finite() || !wall_slope.is_finite() {
            return Err(CliError::Io(format!(
                "non-finite metric for {}",
                table.kind()
            )));
        }
        metrics.push(KindMetrics {
            kind: table.kind().label().to_string(),
            sup_norm_distance: sup,
            rms_distance: rms,
            residual_sup_norm: residual,
            residual_points: points,
            low_confidence_residual: low_confidence,
            wall_slope,
            rank: 0,
        });
    }

    // Rank by sup-norm distance, label as the deterministic tie-break.
    let mut order: Vec<usize> = (0..metrics.len()).collect();
    order.sort_by(|&a, &b| {
        metrics[a]
            .sup_norm_distance
            .total_cmp(&metrics[b].sup_norm_distance)
            .then_with(|| metrics[a].kind.cmp(&metrics[b].kind))
    });
    for (rank, &idx) in order.iter().enumerate() {
        metrics[idx].rank = rank + 1;
    }
    let ranking: Vec<String> = order.iter().map(|&i| metrics[i].kind.clone()).collect();

    // Expected ordering of the two closed forms on the lower half layer.
    let half = n.div_ceil(2);
    let literal_us: Vec<f64> = literal.velocities().collect();
    let recomputed_us: Vec<f64> = recomputed.velocities().collect();
    let (sup_lit_half, _) = distances(&exact_us[..half], &literal_us[..half]);
    let (sup_rec_half, _) = distances(&exact_us[..half], &recomputed_us[..half]);
    let half_span_ordering_ok = sup_rec_half <= sup_lit_half;

    Ok(Comparison {
        zs,
        ss,
        exact: exact_us,
        quartic: quartic.velocities().collect(),
        literal: literal_us,
        recomputed: recomputed_us,
        series: series_table.velocities().collect(),
        metrics,
        ranking,
        half_span_ordering_ok,
    })
}
