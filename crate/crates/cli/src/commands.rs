//! Subcommand implementations. Each builds the full output as a string so
//! emission is all-or-nothing.

use serde::Serialize;

use gaslayer::domain::{BoundaryHeight, DomainSpec};
use gaslayer::flow;
use gaslayer::profile::ProfileKind;
use gaslayer::series::{self, SeriesSource};
use gaslayer::solver::{self, Antiderivative};
use gaslayer::transform::{self, DiffeoReport, TransformedMesh};

use crate::config::{OutputFormat, RunConfig, FLOW_KEYS};
use crate::density::DensitySource;
use crate::error::{CliError, CliResult};
use crate::output::{csv_row, fmt_f64};
use crate::report::{self, Comparison, KindMetrics};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Canonical order of the metric rows in reports.
const KIND_ORDER: [ProfileKind; 5] = [
    ProfileKind::Exact,
    ProfileKind::Quartic,
    ProfileKind::Theorem1Literal,
    ProfileKind::Theorem1Recomputed,
    ProfileKind::SeriesTruncated,
];

fn echo_header(tool: &str, config: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# gaslayer {tool}\n"));
    out.push_str(&format!("# version = {VERSION}\n"));
    for line in config.echo_lines() {
        out.push_str(&format!("# {line}\n"));
    }
    out
}

#[derive(Serialize)]
struct JsonEnvelope<'a, T: Serialize> {
    tool: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(tool: &str, config: &RunConfig, body: T) -> CliResult<String> {
    let envelope = JsonEnvelope {
        tool,
        version: VERSION,
        config,
        body,
    };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| CliError::Io(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

// ---------------------------------------------------------------- solve --

#[derive(Serialize)]
struct SolveSample {
    s: f64,
    z: f64,
    u: f64,
    du_ds: f64,
}

/// The exact profile at the configured grid.
pub fn cmd_solve(config: &RunConfig) -> CliResult<String> {
    let params = config.validate()?;
    let antiderivative = Antiderivative::new(&params)?;
    let grid = solver::layer_grid(&params, config.grid);
    let profile = antiderivative.profile(&grid)?;

    let mut samples = Vec::with_capacity(profile.len());
    for (&s, &(z, u)) in grid.iter().zip(profile.samples()) {
        let du_ds = params.wall_gradient * flow::nonlinear_factor(u, &params)?;
        samples.push(SolveSample { s, z, u, du_ds });
    }

    match config.format {
        OutputFormat::Csv => {
            let mut out = echo_header("solve", config);
            out.push_str("s,z,u,du_ds\n");
            for sample in &samples {
                out.push_str(&csv_row([
                    fmt_f64(sample.s),
                    fmt_f64(sample.z),
                    fmt_f64(sample.u),
                    fmt_f64(sample.du_ds),
                ]));
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                samples: Vec<SolveSample>,
            }
            to_json("solve", config, Body { samples })
        }
    }
}

// -------------------------------------------------------------- compare --

fn metric_cells(m: &KindMetrics) -> Vec<String> {
    vec![
        m.kind.clone(),
        fmt_f64(m.sup_norm_distance),
        fmt_f64(m.rms_distance),
        m.residual_sup_norm.map(fmt_f64).unwrap_or_default(),
        m.residual_points.to_string(),
        m.low_confidence_residual.to_string(),
        fmt_f64(m.wall_slope),
        m.rank.to_string(),
    ]
}

const METRIC_HEADER: &str =
    "kind,sup_norm_distance,rms_distance,residual_sup_norm,residual_points,low_confidence_residual,wall_slope,rank";

fn comparison_csv(config: &RunConfig, cmp: &Comparison) -> String {
    let mut out = echo_header("compare", config);
    out.push_str(&format!(
        "# ranking = {}\n# half_span_ordering_ok = {}\n",
        cmp.ranking.join(" < "),
        cmp.half_span_ordering_ok
    ));
    out.push_str(METRIC_HEADER);
    out.push('\n');
    for kind in KIND_ORDER {
        out.push_str(&csv_row(metric_cells(cmp.metrics_for(kind))));
        out.push('\n');
    }
    out.push_str("\n# profiles\n");
    out.push_str(
        "z,s,u_exact,u_quartic,u_thm1_literal,u_thm1_recomputed,u_series,abs_err_quartic,abs_err_thm1_literal,abs_err_thm1_recomputed,abs_err_series\n",
    );
    for i in 0..cmp.zs.len() {
        let exact = cmp.exact[i];
        out.push_str(&csv_row([
            fmt_f64(cmp.zs[i]),
            fmt_f64(cmp.ss[i]),
            fmt_f64(exact),
            fmt_f64(cmp.quartic[i]),
            fmt_f64(cmp.literal[i]),
            fmt_f64(cmp.recomputed[i]),
            fmt_f64(cmp.series[i]),
            fmt_f64((cmp.quartic[i] - exact).abs()),
            fmt_f64((cmp.literal[i] - exact).abs()),
            fmt_f64((cmp.recomputed[i] - exact).abs()),
            fmt_f64((cmp.series[i] - exact).abs()),
        ]));
        out.push('\n');
    }
    out
}

/// Compare every profile construction against the exact solver.
pub fn cmd_compare(config: &RunConfig, quiet: bool) -> CliResult<String> {
    let cmp = report::compare(config)?;
    if !cmp.half_span_ordering_ok && !quiet {
        eprintln!(
            "warning: recomputed form farther from exact than literal on z in [0, 1/2]"
        );
    }
    match config.format {
        OutputFormat::Csv => Ok(comparison_csv(config, &cmp)),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct QuarticOut {
                a: f64,
                b: f64,
                c: f64,
                d: f64,
                free_stream_speed: f64,
                shape_parameter: f64,
            }
            #[derive(Serialize)]
            struct Body<'a> {
                metrics: &'a [KindMetrics],
                ranking: &'a [String],
                half_span_ordering_ok: bool,
                quartic_coefficients: QuarticOut,
            }
            let quartic =
                gaslayer::pohlhausen::quartic_coeffs(config.free_stream_speed, 0.0);
            to_json(
                "compare",
                config,
                Body {
                    metrics: &cmp.metrics,
                    ranking: &cmp.ranking,
                    half_span_ordering_ok: cmp.half_span_ordering_ok,
                    quartic_coefficients: QuarticOut {
                        a: quartic.coeffs[0],
                        b: quartic.coeffs[1],
                        c: quartic.coeffs[2],
                        d: quartic.coeffs[3],
                        free_stream_speed: quartic.free_stream_speed,
                        shape_parameter: quartic.shape_parameter,
                    },
                },
            )
        }
    }
}

// --------------------------------------------------------------- series --

/// Coefficient tables from all three sources.
pub fn cmd_series(config: &RunConfig) -> CliResult<String> {
    config.validate()?;
    let order = config.series_order;
    let tables = [
        (
            SeriesSource::BinomialOracle,
            series::binomial_coeffs(order)?.coeffs().to_vec(),
        ),
        (
            SeriesSource::ExpLogComposition,
            series::explog_coeffs(order)?.coeffs().to_vec(),
        ),
        (
            SeriesSource::PaperLiteral,
            series::paper_literal_coeffs().coeffs().to_vec(),
        ),
    ];

    match config.format {
        OutputFormat::Csv => {
            let mut out = echo_header("series", config);
            out.push_str("order,coefficient,source\n");
            for (source, coeffs) in &tables {
                for (k, &c) in coeffs.iter().enumerate() {
                    out.push_str(&csv_row([
                        k.to_string(),
                        fmt_f64(c),
                        source.label().to_string(),
                    ]));
                    out.push('\n');
                }
            }
            Ok(out)
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Table {
                source: String,
                coefficients: Vec<f64>,
            }
            #[derive(Serialize)]
            struct Body {
                tables: Vec<Table>,
            }
            let body = Body {
                tables: tables
                    .iter()
                    .map(|(source, coeffs)| Table {
                        source: source.label().to_string(),
                        coefficients: coeffs.clone(),
                    })
                    .collect(),
            };
            to_json("series", config, body)
        }
    }
}

// ------------------------------------------------------------ transform --

pub struct TransformArgs {
    pub source: DensitySource,
    /// Domain length for presets.
    pub length: f64,
    /// Boundary height for presets.
    pub height: f64,
    /// Minimum admissible aspect ratio L/H.
    pub aspect_threshold: f64,
    /// Columns for analytic presets (tabulated grids use their own knots).
    pub columns: usize,
    /// Exponent of the pressure-temperature scale c1 = p0 * T0^e;
    /// defaults to 2b/(b-1).
    pub scale_exponent: Option<f64>,
}

/// Mesh emission: (main output, per-column delta table for CSV mode).
pub struct TransformOutput {
    pub main: String,
    pub delta_table: Option<String>,
}

fn mesh_csv(
    config: &RunConfig,
    args: &TransformArgs,
    mesh: &TransformedMesh,
    report: &DiffeoReport,
) -> TransformOutput {
    let mut out = echo_header("transform", config);
    out.push_str(&format!("# density = {}\n", args.source.label()));
    out.push_str(&format!(
        "# diffeomorphism = {}\n# min_s_increment = {}\n# min_ell_increment = {}\n",
        if report.pass { "pass" } else { "fail" },
        fmt_f64(report.min_s_increment),
        fmt_f64(report.min_ell_increment),
    ));
    out.push_str("x,yhat,ell,s\n");
    for col in &mesh.columns {
        for &(yhat, s) in &col.nodes {
            out.push_str(&csv_row([
                fmt_f64(col.x),
                fmt_f64(yhat),
                fmt_f64(col.ell),
                fmt_f64(s),
            ]));
            out.push('\n');
        }
    }

    let mut delta = echo_header("transform deltas", config);
    delta.push_str("x,delta\n");
    for col in &mesh.columns {
        delta.push_str(&csv_row([fmt_f64(col.x), fmt_f64(col.delta)]));
        delta.push('\n');
    }

    TransformOutput {
        main: out,
        delta_table: Some(delta),
    }
}

/// Build and emit the transformed mesh for a density field.
pub fn cmd_transform(
    config: &RunConfig,
    args: &TransformArgs,
    quiet: bool,
) -> CliResult<TransformOutput> {
    let params = config.validate()?;
    let rho = args.source.load(args.length, args.height)?;

    let (x_lo, x_hi) = rho.x_range();
    let (_, y_hi) = rho.y_range();
    if x_lo != 0.0 {
        return Err(CliError::InvalidDensity(format!(
            "density domain must start at x = 0, got {x_lo}"
        )));
    }
    let mut dom = DomainSpec::new(x_hi, BoundaryHeight::constant(y_hi), y_hi);
    dom.aspect_threshold = args.aspect_threshold;
    let validation = dom.validate().map_err(CliError::from)?;
    if !quiet {
        for warning in &validation.warnings {
            eprintln!("warning: {warning}");
        }
    }

    let (x_knots, y_points) = match &rho {
        transform::DensityField::Tabulated(grid) => (grid.xs().to_vec(), grid.ys().len()),
        transform::DensityField::Analytic { .. } => {
            let cols = args.columns.max(2);
            let knots = (0..cols)
                .map(|i| x_hi * i as f64 / (cols - 1) as f64)
                .collect();
            (knots, config.grid)
        }
    };

    let mesh = transform::build_mesh(&rho, &dom, &params, args.scale_exponent, &x_knots, y_points)?;
    let report = transform::check_diffeomorphism(&mesh);
    if !report.pass && !quiet {
        eprintln!("warning: diffeomorphism check failed at {:?}", report.violation);
    }

    match config.format {
        OutputFormat::Csv => Ok(mesh_csv(config, args, &mesh, &report)),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ColumnOut {
                x: f64,
                ell: f64,
                delta: f64,
                nodes: Vec<(f64, f64)>,
            }
            #[derive(Serialize)]
            struct Diffeo {
                pass: bool,
                min_s_increment: f64,
                min_ell_increment: f64,
            }
            #[derive(Serialize)]
            struct Body {
                density: String,
                diffeomorphism: Diffeo,
                columns: Vec<ColumnOut>,
            }
            let body = Body {
                density: args.source.label(),
                diffeomorphism: Diffeo {
                    pass: report.pass,
                    min_s_increment: report.min_s_increment,
                    min_ell_increment: report.min_ell_increment,
                },
                columns: mesh
                    .columns
                    .iter()
                    .map(|c| ColumnOut {
                        x: c.x,
                        ell: c.ell,
                        delta: c.delta,
                        nodes: c.nodes.clone(),
                    })
                    .collect(),
            };
            Ok(TransformOutput {
                main: to_json("transform", config, body)?,
                delta_table: None,
            })
        }
    }
}

// ---------------------------------------------------------------- sweep --

/// One sweep tuple: effective flow values plus per-kind metrics or an error.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub values: Vec<(String, f64)>,
    pub metrics: Option<Vec<KindMetrics>>,
    pub error: Option<String>,
}

/// Expand the sweep cross product in lexicographic order of the input
/// lists (canonical parameter order, later parameters innermost).
pub fn expand_tuples(config: &RunConfig) -> Vec<Vec<(String, f64)>> {
    let mut tuples: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for (key, values) in &config.sweep {
        let mut next = Vec::with_capacity(tuples.len() * values.len());
        for prefix in &tuples {
            for &v in values {
                let mut tuple = prefix.clone();
                tuple.push((key.clone(), v));
                next.push(tuple);
            }
        }
        tuples = next;
    }
    tuples
}

fn run_tuple(base: &RunConfig, tuple: &[(String, f64)]) -> SweepRow {
    let mut config = base.clone();
    config.sweep.clear();
    for (key, value) in tuple {
        // Keys were validated when the sweep lists were built.
        config.set_flow(key, *value).expect("validated sweep key");
    }
    let values: Vec<(String, f64)> = FLOW_KEYS
        .iter()
        .map(|&k| {
            (
                k.to_string(),
                tuple
                    .iter()
                    .find(|(key, _)| key == k)
                    .map(|&(_, v)| v)
                    .unwrap_or_else(|| match k {
                        "U" => config.free_stream_speed,
                        "i0" => config.total_energy,
                        "c" => config.wall_gradient,
                        "delta" => config.thickness,
                        "b" => config.polytropic_exponent,
                        "p0" => config.wall_pressure,
                        "T0" => config.surface_temperature,
                        _ => unreachable!(),
                    }),
            )
        })
        .collect();

    match report::compare(&config) {
        Ok(cmp) => SweepRow {
            values,
            metrics: Some(cmp.metrics),
            error: None,
        },
        Err(err) => SweepRow {
            values,
            metrics: None,
            error: Some(err.to_string()),
        },
    }
}

/// Run every tuple, optionally on a bounded worker pool. Row order is the
/// tuple order regardless of the worker count, and the count never enters
/// the output.
pub fn run_sweep(config: &RunConfig, workers: usize) -> CliResult<Vec<SweepRow>> {
    config.validate()?;
    let tuples = expand_tuples(config);
    let workers = workers.min(tuples.len()).max(1);

    let rows: Vec<SweepRow> = if workers == 1 {
        tuples.iter().map(|t| run_tuple(config, t)).collect()
    } else {
        let mut slots: Vec<Option<SweepRow>> = vec![None; tuples.len()];
        std::thread::scope(|scope| {
            let chunk = tuples.len().div_ceil(workers);
            let mut pending: Vec<_> = Vec::new();
            for (worker, batch) in tuples.chunks(chunk).enumerate() {
                let base = &*config;
                pending.push(scope.spawn(move || {
                    batch
                        .iter()
                        .enumerate()
                        .map(|(i, t)| (worker * chunk + i, run_tuple(base, t)))
                        .collect::<Vec<_>>()
                }));
            }
            for handle in pending {
                for (idx, row) in handle.join().expect("sweep worker panicked") {
                    slots[idx] = Some(row);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("all slots filled")).collect()
    };
    Ok(rows)
}

/// Aggregated sweep report: one metric row per tuple and profile kind.
pub fn cmd_sweep(config: &RunConfig, workers: usize) -> CliResult<(String, usize)> {
    let rows = run_sweep(config, workers)?;
    let successes = rows.iter().filter(|r| r.error.is_none()).count();

    let text = match config.format {
        OutputFormat::Csv => {
            let mut out = echo_header("sweep", config);
            out.push_str(&format!("{},{METRIC_HEADER},error\n", FLOW_KEYS.join(",")));
            for row in &rows {
                let prefix: Vec<String> =
                    row.values.iter().map(|(_, v)| fmt_f64(*v)).collect();
                match (&row.metrics, &row.error) {
                    (Some(metrics), None) => {
                        for kind in KIND_ORDER {
                            let m = metrics
                                .iter()
                                .find(|m| m.kind == kind.label())
                                .expect("metrics cover every kind");
                            let mut cells = prefix.clone();
                            cells.extend(metric_cells(m));
                            cells.push(String::new());
                            out.push_str(&csv_row(cells));
                            out.push('\n');
                        }
                    }
                    (_, Some(err)) => {
                        let mut cells = prefix.clone();
                        cells.extend(std::iter::repeat_n(String::new(), 8));
                        cells.push(err.replace(',', ";"));
                        out.push_str(&csv_row(cells));
                        out.push('\n');
                    }
                    (None, None) => unreachable!("row has metrics or error"),
                }
            }
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [SweepRow],
            }
            to_json("sweep", config, Body { rows: &rows })?
        }
    };
    Ok((text, successes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> RunConfig {
        RunConfig {
            free_stream_speed: 0.1,
            wall_gradient: 0.01,
            grid: 21,
            ..RunConfig::default()
        }
    }

    #[test]
    fn solve_csv_starts_with_no_slip_row() {
        let text = cmd_solve(&base_config()).unwrap();
        let first_data = text
            .lines()
            .find(|l| !l.starts_with('#') && !l.starts_with("s,"))
            .unwrap();
        assert_eq!(first_data, "0,0,0,0.01");
    }

    #[test]
    fn solve_saturated_exits_with_code_3() {
        let mut config = base_config();
        config.wall_gradient = 1.0;
        config.thickness = 1.0;
        let err = cmd_solve(&config).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn series_csv_lists_three_sources() {
        let text = cmd_series(&base_config()).unwrap();
        for source in ["binomial-oracle", "explog-composition", "paper-literal"] {
            assert!(text.contains(source), "missing {source}");
        }
        assert!(text.contains("2,0.24,paper-literal"));
        assert!(text.contains("2,0.1488,binomial-oracle"));
    }

    #[test]
    fn sweep_single_tuple_matches_compare_metrics() {
        let mut config = base_config();
        config.set_sweep("U", vec![0.1]).unwrap();
        let rows = run_sweep(&config, 1).unwrap();
        assert_eq!(rows.len(), 1);

        let mut solo = base_config();
        solo.free_stream_speed = 0.1;
        let cmp = report::compare(&solo).unwrap();
        let row_metrics = rows[0].metrics.as_ref().unwrap();
        for (a, b) in row_metrics.iter().zip(&cmp.metrics) {
            assert_eq!(a.kind, b.kind);
            assert_eq!(a.sup_norm_distance, b.sup_norm_distance);
            assert_eq!(a.rms_distance, b.rms_distance);
        }
    }

    #[test]
    fn sweep_parallel_rows_identical_to_serial() {
        let mut config = base_config();
        config.set_sweep("U", vec![0.0, 0.1, 0.2]).unwrap();
        config.set_sweep("c", vec![0.01, 0.02]).unwrap();

        let serial = cmd_sweep(&config, 1).unwrap();
        let parallel = cmd_sweep(&config, 4).unwrap();
        assert_eq!(serial.0, parallel.0);
        assert_eq!(serial.1, parallel.1);
    }

    #[test]
    fn sweep_records_per_tuple_failures() {
        let mut config = base_config();
        // One admissible speed, one beyond the energy bound.
        config.set_sweep("U", vec![0.1, 5.0]).unwrap();
        let (text, successes) = cmd_sweep(&config, 1).unwrap();
        assert_eq!(successes, 1);
        assert!(text.contains("speed exceeds energy bound"));
    }

    #[test]
    fn zero_speed_sweep_row_has_equal_closed_forms() {
        let mut config = base_config();
        config.set_sweep("U", vec![0.0, 0.1, 0.2]).unwrap();
        let rows = run_sweep(&config, 2).unwrap();
        assert_eq!(rows.len(), 3);
        let metrics = rows[0].metrics.as_ref().unwrap();
        let lit = metrics
            .iter()
            .find(|m| m.kind == "theorem1-literal")
            .unwrap();
        let rec = metrics
            .iter()
            .find(|m| m.kind == "theorem1-recomputed")
            .unwrap();
        assert_eq!(lit.sup_norm_distance, rec.sup_norm_distance);
    }

    #[test]
    fn transform_preset_unit_density() {
        let config = base_config();
        let args = TransformArgs {
            source: DensitySource::Unit,
            length: 10.0,
            height: 1.0,
            aspect_threshold: 10.0,
            columns: 5,
            scale_exponent: None,
        };
        let out = cmd_transform(&config, &args, true).unwrap();
        assert!(out.main.contains("# diffeomorphism = pass"));
        let delta = out.delta_table.unwrap();
        for line in delta.lines().filter(|l| !l.starts_with('#') && !l.starts_with("x,")) {
            let cells: Vec<&str> = line.split(',').collect();
            let d: f64 = cells[1].parse().unwrap();
            assert!((d - 1.0).abs() < 1e-10);
        }
    }
}
