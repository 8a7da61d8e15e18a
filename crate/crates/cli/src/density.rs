//! Density ingestion for the transform subcommand: CSV files with an
//! `x,y,rho` header forming a rectilinear grid, or analytic presets.

use std::collections::BTreeMap;
use std::path::Path;

use gaslayer::transform::{DensityField, DensityGrid};

use crate::error::{CliError, CliResult};

/// How the density was specified on the command line.
#[derive(Debug, Clone)]
pub enum DensitySource {
    /// rho = 1 everywhere.
    Unit,
    /// rho = 1 + y.
    OnePlusY,
    /// Tabulated from a CSV path.
    File(String),
}

impl DensitySource {
    pub fn parse(raw: &str) -> Self {
        match raw {
            "unit" => DensitySource::Unit,
            "one-plus-y" => DensitySource::OnePlusY,
            path => DensitySource::File(path.to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DensitySource::Unit => "unit".into(),
            DensitySource::OnePlusY => "one-plus-y".into(),
            DensitySource::File(path) => path.clone(),
        }
    }

    /// Materialize the density field. Presets span the given rectangle.
    pub fn load(&self, length: f64, height: f64) -> CliResult<DensityField> {
        match self {
            DensitySource::Unit => Ok(DensityField::analytic(
                |_, _| 1.0,
                (0.0, length),
                (0.0, height),
            )),
            DensitySource::OnePlusY => Ok(DensityField::analytic(
                |_, y| 1.0 + y,
                (0.0, length),
                (0.0, height),
            )),
            DensitySource::File(path) => load_density_csv(Path::new(path)),
        }
    }
}

/// Exact-bits key for grid knots; the CSV must repeat coordinates exactly.
fn knot_key(v: f64) -> u64 {
    v.to_bits()
}

/// Parse a density CSV (`x,y,rho` with header) into a rectilinear grid.
///
/// Structural problems report the offending line as malformed input
/// (exit 4); nonpositive densities name the row (exit 5).
pub fn load_density_csv(path: &Path) -> CliResult<DensityField> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::MalformedInput {
        path: path.display().to_string(),
        line: 0,
        reason: e.to_string(),
    })?;
    let malformed = |line: usize, reason: String| CliError::MalformedInput {
        path: path.display().to_string(),
        line,
        reason,
    };

    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((i, raw)) => {
                let trimmed = raw.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (i + 1, trimmed);
            }
            None => return Err(malformed(0, "empty file".into())),
        }
    };
    let header_cols: Vec<&str> = header.1.split(',').map(str::trim).collect();
    if header_cols != ["x", "y", "rho"] {
        return Err(malformed(
            header.0,
            format!("expected header `x,y,rho`, got `{}`", header.1),
        ));
    }

    let mut records: Vec<(f64, f64, f64, usize)> = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            return Err(malformed(
                line_no,
                format!("expected 3 columns, got {}", cells.len()),
            ));
        }
        let mut values = [0.0_f64; 3];
        for (slot, cell) in values.iter_mut().zip(&cells) {
            *slot = cell
                .parse::<f64>()
                .map_err(|_| malformed(line_no, format!("bad number `{cell}`")))?;
        }
        let [x, y, rho] = values;
        // Rejects NaN along with nonpositive values.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(rho > 0.0) {
            return Err(CliError::InvalidDensity(format!(
                "{} line {line_no}: rho({x}, {y}) = {rho} must be strictly positive",
                path.display()
            )));
        }
        records.push((x, y, rho, line_no));
    }
    if records.is_empty() {
        return Err(malformed(0, "no data rows".into()));
    }

    // Assemble the rectilinear grid: every (x, y) pair exactly once.
    let mut xs: BTreeMap<u64, f64> = BTreeMap::new();
    let mut ys: BTreeMap<u64, f64> = BTreeMap::new();
    for &(x, y, _, line_no) in &records {
        if !x.is_finite() || !y.is_finite() {
            return Err(malformed(line_no, "non-finite coordinate".into()));
        }
        xs.insert(knot_key(x), x);
        ys.insert(knot_key(y), y);
    }
    let mut xs: Vec<f64> = xs.into_values().collect();
    let mut ys: Vec<f64> = ys.into_values().collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    let x_index: BTreeMap<u64, usize> =
        xs.iter().enumerate().map(|(i, &v)| (knot_key(v), i)).collect();
    let y_index: BTreeMap<u64, usize> =
        ys.iter().enumerate().map(|(i, &v)| (knot_key(v), i)).collect();

    let mut values = vec![f64::NAN; xs.len() * ys.len()];
    for &(x, y, rho, line_no) in &records {
        let ix = x_index[&knot_key(x)];
        let iy = y_index[&knot_key(y)];
        let slot = &mut values[ix * ys.len() + iy];
        if !slot.is_nan() {
            return Err(malformed(line_no, format!("duplicate node ({x}, {y})")));
        }
        *slot = rho;
    }
    if let Some(flat) = values.iter().position(|v| v.is_nan()) {
        let ix = flat / ys.len();
        let iy = flat % ys.len();
        return Err(malformed(
            0,
            format!("grid not rectilinear: missing node ({}, {})", xs[ix], ys[iy]),
        ));
    }

    let grid = DensityGrid::new(xs, ys, values).map_err(CliError::from)?;
    Ok(DensityField::Tabulated(grid))
}
