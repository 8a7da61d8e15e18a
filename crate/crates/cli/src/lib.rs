//! Command-line front end: configuration ingestion, one subcommand per
//! computation, parameter sweeps, and CSV/JSON report emission.
//!
//! Exit codes: 0 ok, 2 invalid configuration, 3 saturation, 4 malformed
//! input file, 5 invalid density.

pub mod commands;
pub mod config;
pub mod density;
pub mod error;
pub mod output;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::commands::TransformArgs;
use crate::config::{OutputFormat, RunConfig};
use crate::density::DensitySource;
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "gaslayer",
    version,
    about = "Compressible boundary-layer velocity profiles: exact solver, series, quartic family, coordinate transform"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (flat key = value with [flow]/[run]/[sweep] sections).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Sample count over z in [0, 1].
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Series truncation order N.
    #[arg(long = "series-order", global = true)]
    series_order: Option<usize>,

    /// Worker pool size for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Suppress warnings and timing on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    /// Free-stream speed U.
    #[arg(long = "U", global = true)]
    free_stream_speed: Option<f64>,

    /// Total energy i0 = c_p * T0.
    #[arg(long = "i0", global = true)]
    total_energy: Option<f64>,

    /// Wall velocity gradient c (no-back-flow constant).
    #[arg(long = "c", global = true)]
    wall_gradient: Option<f64>,

    /// Layer thickness delta in transformed coordinates.
    #[arg(long = "delta", global = true)]
    thickness: Option<f64>,

    /// Polytropic exponent b.
    #[arg(long = "b", global = true)]
    polytropic_exponent: Option<f64>,

    /// Wall pressure p0.
    #[arg(long = "p0", global = true)]
    wall_pressure: Option<f64>,

    /// Surface temperature T0.
    #[arg(long = "T0", global = true)]
    surface_temperature: Option<f64>,

    /// Sweep list KEY=V1,V2,... (repeatable; overrides the config file).
    #[arg(long = "sweep", global = true)]
    sweep: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact profile of the reduced equation on the configured grid.
    Solve,
    /// All profile constructions measured against the exact solver.
    Compare,
    /// Series coefficient tables from all three sources.
    Series,
    /// Density-weighted coordinate transform of the physical domain.
    Transform {
        /// Density: a CSV path (x,y,rho with header) or preset unit | one-plus-y.
        #[arg(long, default_value = "unit")]
        density: String,
        /// Domain length for analytic presets.
        #[arg(long, default_value_t = 10.0)]
        length: f64,
        /// Boundary height for analytic presets.
        #[arg(long, default_value_t = 1.0)]
        height: f64,
        /// Minimum admissible aspect ratio L/H.
        #[arg(long = "aspect-threshold", default_value_t = 10.0)]
        aspect_threshold: f64,
        /// Number of mesh columns for analytic presets.
        #[arg(long, default_value_t = 21)]
        columns: usize,
        /// Exponent e of the scale c1 = p0 * T0^e (default 2b/(b-1)).
        #[arg(long = "c1-exponent")]
        c1_exponent: Option<f64>,
    },
    /// Compare across the cross product of the sweep lists.
    Sweep,
}

/// Merge defaults, config file, and command-line flags (highest precedence).
fn build_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for (key, value) in [
        ("U", cli.free_stream_speed),
        ("i0", cli.total_energy),
        ("c", cli.wall_gradient),
        ("delta", cli.thickness),
        ("b", cli.polytropic_exponent),
        ("p0", cli.wall_pressure),
        ("T0", cli.surface_temperature),
    ] {
        if let Some(v) = value {
            config.set_flow(key, v)?;
        }
    }
    if let Some(grid) = cli.grid {
        config.grid = grid;
    }
    if let Some(order) = cli.series_order {
        config.series_order = order;
    }
    if let Some(format) = &cli.format {
        config.format = OutputFormat::parse(format)?;
    }
    for spec in &cli.sweep {
        let (key, list) = spec.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--sweep expects KEY=V1,V2,..., got `{spec}`"))
        })?;
        let values: Vec<f64> = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("bad sweep value `{v}`")))
            })
            .collect::<CliResult<_>>()?;
        config.set_sweep(key.trim(), values)?;
    }
    Ok(config)
}

fn dispatch(cli: &Cli, config: &RunConfig) -> CliResult<()> {
    match &cli.command {
        Command::Solve => {
            let text = commands::cmd_solve(config)?;
            output::emit(cli.out.as_deref(), &text)
        }
        Command::Compare => {
            let text = commands::cmd_compare(config, cli.quiet)?;
            output::emit(cli.out.as_deref(), &text)
        }
        Command::Series => {
            let text = commands::cmd_series(config)?;
            output::emit(cli.out.as_deref(), &text)
        }
        Command::Transform {
            density,
            length,
            height,
            aspect_threshold,
            columns,
            c1_exponent,
        } => {
            let args = TransformArgs {
                source: DensitySource::parse(density),
                length: *length,
                height: *height,
                aspect_threshold: *aspect_threshold,
                columns: *columns,
                scale_exponent: *c1_exponent,
            };
            let out = commands::cmd_transform(config, &args, cli.quiet)?;
            output::emit(cli.out.as_deref(), &out.main)?;
            if let (Some(delta), Some(path)) = (&out.delta_table, &cli.out) {
                let delta_path = delta_table_path(path);
                output::write_atomic(&delta_path, delta)?;
            }
            Ok(())
        }
        Command::Sweep => {
            let workers = cli.workers.unwrap_or(1);
            if workers == 0 {
                return Err(CliError::Config("workers must be at least 1".into()));
            }
            let (text, successes) = commands::cmd_sweep(config, workers)?;
            output::emit(cli.out.as_deref(), &text)?;
            if successes == 0 {
                return Err(CliError::Config(
                    "no sweep tuple produced a valid comparison".into(),
                ));
            }
            Ok(())
        }
    }
}

/// Sibling path `<stem>.delta.csv` for the per-column thickness table.
pub fn delta_table_path(mesh_path: &std::path::Path) -> PathBuf {
    let stem = mesh_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "mesh".into());
    mesh_path.with_file_name(format!("{stem}.delta.csv"))
}

/// Entry point: parse, run, and exit with the documented code.
pub fn run() {
    let cli = Cli::parse();
    let started = Instant::now();

    let outcome = build_config(&cli).and_then(|config| dispatch(&cli, &config));
    match outcome {
        Ok(()) => {
            if !cli.quiet {
                eprintln!("done in {:.3}s", started.elapsed().as_secs_f64());
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
