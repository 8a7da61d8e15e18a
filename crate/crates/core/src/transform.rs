//! The density-weighted coordinate transform over the physical domain:
//! ell(x) by a linear map, s(x, yhat) by column quadrature of the density,
//! and per-column thickness delta(x) = s(x, h(x)).
//!
//! For a strictly positive density the map (x, yhat) -> (ell, s) is a
//! diffeomorphism; `check_diffeomorphism` verifies the discrete analogue,
//! per-column strict monotonicity, and reports the injectivity margin.

use std::fmt;
use std::sync::Arc;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::flow::FlowParams;
use crate::numeric::quadrature;

/// Relative tolerance of the column quadrature.
pub const COLUMN_REL_TOL: f64 = 1e-10;

/// A rectilinear density grid with bilinear interpolation.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Row-major `values[ix * ys.len() + iy]`.
    values: Vec<f64>,
}

impl DensityGrid {
    /// Build from axis knots and row-major node values. Rejects nonpositive
    /// node values and non-increasing axes.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::InvalidGrid {
                reason: "grid needs at least 2 knots per axis".into(),
            });
        }
        if values.len() != xs.len() * ys.len() {
            return Err(Error::InvalidGrid {
                reason: format!(
                    "expected {} node values, got {}",
                    xs.len() * ys.len(),
                    values.len()
                ),
            });
        }
        for axis in [&xs, &ys] {
            for pair in axis.windows(2) {
                if !(pair[1] > pair[0]) {
                    return Err(Error::InvalidGrid {
                        reason: "axis knots must be strictly increasing".into(),
                    });
                }
            }
        }
        for (ix, &x) in xs.iter().enumerate() {
            for (iy, &y) in ys.iter().enumerate() {
                let v = values[ix * ys.len() + iy];
                if !(v > 0.0) {
                    return Err(Error::NonPositiveDensity { x, y, value: v });
                }
            }
        }
        Ok(DensityGrid { xs, ys, values })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn bracket(knots: &[f64], v: f64) -> usize {
        let idx = knots.partition_point(|&k| k <= v);
        idx.clamp(1, knots.len() - 1) - 1
    }

    /// Bilinear interpolation; clamps to the rectangle edges.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let ix = Self::bracket(&self.xs, x);
        let iy = Self::bracket(&self.ys, y);
        let (x0, x1) = (self.xs[ix], self.xs[ix + 1]);
        let (y0, y1) = (self.ys[iy], self.ys[iy + 1]);
        let tx = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        let ty = ((y - y0) / (y1 - y0)).clamp(0.0, 1.0);
        let stride = self.ys.len();
        let v00 = self.values[ix * stride + iy];
        let v01 = self.values[ix * stride + iy + 1];
        let v10 = self.values[(ix + 1) * stride + iy];
        let v11 = self.values[(ix + 1) * stride + iy + 1];
        let lo = v00 + tx * (v10 - v00);
        let hi = v01 + tx * (v11 - v01);
        lo + ty * (hi - lo)
    }
}

/// Density over the domain rectangle, analytic or tabulated.
#[derive(Clone)]
pub enum DensityField {
    Analytic {
        rho: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        x_range: (f64, f64),
        y_range: (f64, f64),
    },
    Tabulated(DensityGrid),
}

impl fmt::Debug for DensityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityField::Analytic { x_range, y_range, .. } => {
                write!(f, "DensityField::Analytic({x_range:?} x {y_range:?})")
            }
            DensityField::Tabulated(g) => {
                write!(f, "DensityField::Tabulated({}x{})", g.xs.len(), g.ys.len())
            }
        }
    }
}

impl DensityField {
    pub fn analytic<F>(rho: F, x_range: (f64, f64), y_range: (f64, f64)) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        DensityField::Analytic {
            rho: Arc::new(rho),
            x_range,
            y_range,
        }
    }

    pub fn x_range(&self) -> (f64, f64) {
        match self {
            DensityField::Analytic { x_range, .. } => *x_range,
            DensityField::Tabulated(g) => (g.xs[0], *g.xs.last().unwrap()),
        }
    }

    pub fn y_range(&self) -> (f64, f64) {
        match self {
            DensityField::Analytic { y_range, .. } => *y_range,
            DensityField::Tabulated(g) => (g.ys[0], *g.ys.last().unwrap()),
        }
    }

    /// Evaluate the density, rejecting nonpositive values.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let value = match self {
            DensityField::Analytic { rho, .. } => rho(x, y),
            DensityField::Tabulated(g) => g.eval(x, y),
        };
        if !(value > 0.0) {
            return Err(Error::NonPositiveDensity { x, y, value });
        }
        Ok(value)
    }
}

/// Default exponent of the pressure-temperature scale: 2b/(b - 1).
///
/// The printed grouping of the exponent is ambiguous; this default is
/// configurable through `ell_coordinate`'s `exponent` argument.
pub fn default_scale_exponent(polytropic_exponent: f64) -> f64 {
    2.0 * polytropic_exponent / (polytropic_exponent - 1.0)
}

/// The constant c1 = p0 * T0^e of the abscissa map.
pub fn pressure_temperature_scale(params: &FlowParams, exponent: Option<f64>) -> f64 {
    let e = exponent.unwrap_or_else(|| default_scale_exponent(params.polytropic_exponent));
    params.wall_pressure * params.surface_temperature.powf(e)
}

/// Transformed abscissa ell(x) = c1 * (1 - U^2/(2*i0)) * x.
pub fn ell_coordinate(x: f64, params: &FlowParams, exponent: Option<f64>) -> f64 {
    let c1 = pressure_temperature_scale(params, exponent);
    let fraction = params.free_stream_speed * params.free_stream_speed / params.energy_bound();
    c1 * (1.0 - fraction) * x
}

/// Transformed ordinate s(x, yhat) = integral_0^yhat rho(x, y) dy by
/// adaptive column quadrature (relative tolerance 1e-10). Strictly
/// increasing in yhat for positive density.
pub fn s_coordinate(x: f64, yhat: f64, rho: &DensityField) -> Result<f64> {
    let (x_lo, x_hi) = rho.x_range();
    if !(x_lo..=x_hi).contains(&x) {
        return Err(Error::OutOfDomain {
            name: "x",
            value: x,
            low: x_lo,
            high: x_hi,
        });
    }
    let (y_lo, y_hi) = rho.y_range();
    if !(0.0f64.min(y_lo)..=y_hi).contains(&yhat) {
        return Err(Error::OutOfDomain {
            name: "yhat",
            value: yhat,
            low: 0.0f64.min(y_lo),
            high: y_hi,
        });
    }

    // NaN marks a nonpositive sample inside the column; rejected after
    // integration since the quadrature integrand cannot return a Result.
    let integrand = |y: f64| rho.eval(x, y).unwrap_or(f64::NAN);
    let result = quadrature::integrate(&integrand, 0.0, yhat, 1e-14, COLUMN_REL_TOL)?;
    if result.value.is_nan() {
        return Err(Error::NonPositiveDensity {
            x,
            y: yhat,
            value: f64::NAN,
        });
    }
    Ok(result.value)
}

/// Per-column thickness delta(x) = s(x, h(x)).
pub fn delta_of_x(x: f64, rho: &DensityField, dom: &DomainSpec) -> Result<f64> {
    if !(0.0..=dom.length).contains(&x) {
        return Err(Error::OutOfDomain {
            name: "x",
            value: x,
            low: 0.0,
            high: dom.length,
        });
    }
    s_coordinate(x, dom.height.eval(x), rho)
}

/// One column of the transformed mesh.
#[derive(Debug, Clone)]
pub struct MeshColumn {
    pub x: f64,
    pub ell: f64,
    /// (yhat, s) nodes, ordered by yhat from the wall upward.
    pub nodes: Vec<(f64, f64)>,
    /// s at the column's upper boundary.
    pub delta: f64,
}

/// The transformed mesh: per-column (ell, s) node coordinates and thickness.
#[derive(Debug, Clone)]
pub struct TransformedMesh {
    pub columns: Vec<MeshColumn>,
}

/// Build the mesh over `x_knots` columns with `y_points` nodes per column,
/// each column spanning [0, h(x)]. Column quadratures accumulate segment by
/// segment so every node reuses the integral below it.
pub fn build_mesh(
    rho: &DensityField,
    dom: &DomainSpec,
    params: &FlowParams,
    exponent: Option<f64>,
    x_knots: &[f64],
    y_points: usize,
) -> Result<TransformedMesh> {
    assert!(y_points >= 2, "column needs at least two nodes");
    let mut columns = Vec::with_capacity(x_knots.len());
    for &x in x_knots {
        let height = dom.height.eval(x);
        let integrand = |y: f64| rho.eval(x, y).unwrap_or(f64::NAN);
        let mut nodes = Vec::with_capacity(y_points);
        nodes.push((0.0, 0.0));
        let mut acc = 0.0;
        let mut prev = 0.0;
        for i in 1..y_points {
            let yhat = height * i as f64 / (y_points - 1) as f64;
            acc += quadrature::integrate(&integrand, prev, yhat, 1e-14, COLUMN_REL_TOL)?.value;
            if acc.is_nan() {
                return Err(Error::NonPositiveDensity {
                    x,
                    y: yhat,
                    value: f64::NAN,
                });
            }
            nodes.push((yhat, acc));
            prev = yhat;
        }
        columns.push(MeshColumn {
            x,
            ell: ell_coordinate(x, params, exponent),
            delta: acc,
            nodes,
        });
    }
    Ok(TransformedMesh { columns })
}

/// Discrete diffeomorphism check: strict monotonicity of s within each
/// column and of ell across columns, with the smallest increment reported
/// as the injectivity margin.
#[derive(Debug, Clone)]
pub struct DiffeoReport {
    pub pass: bool,
    /// Smallest s increment over all columns (the column margin).
    pub min_s_increment: f64,
    /// Smallest ell increment across columns.
    pub min_ell_increment: f64,
    /// First violating (column index, node index), if any.
    pub violation: Option<(usize, usize)>,
}

pub fn check_diffeomorphism(mesh: &TransformedMesh) -> DiffeoReport {
    let mut min_s = f64::INFINITY;
    let mut min_ell = f64::INFINITY;
    let mut violation = None;

    for (ci, col) in mesh.columns.iter().enumerate() {
        if col.nodes.first().map(|&(_, s)| s) != Some(0.0) {
            violation.get_or_insert((ci, 0));
        }
        for (ni, pair) in col.nodes.windows(2).enumerate() {
            let ds = pair[1].1 - pair[0].1;
            min_s = min_s.min(ds);
            if !(ds > 0.0) {
                violation.get_or_insert((ci, ni + 1));
            }
        }
    }
    for (ci, pair) in mesh.columns.windows(2).enumerate() {
        let dell = pair[1].ell - pair[0].ell;
        min_ell = min_ell.min(dell);
        if !(dell > 0.0) {
            violation.get_or_insert((ci + 1, 0));
        }
    }

    DiffeoReport {
        pass: violation.is_none(),
        min_s_increment: min_s,
        min_ell_increment: min_ell,
        violation,
    }
}
