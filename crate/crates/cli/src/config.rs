//! Run configuration: defaults, config-file parsing, flag overrides, and
//! the deterministic echo that report files embed.
//!
//! The config format is flat `key = value` text under section headers:
//!
//! ```text
//! [flow]
//! U = 0.1
//! i0 = 0.5
//!
//! [run]
//! grid = 201
//! format = csv
//!
//! [sweep]
//! U = 0, 0.1, 0.2
//! ```
//!
//! Every key is also overridable by a command-line flag of the same name.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!(
                "format must be csv or json, got `{other}`"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Canonical order of sweepable flow parameters; sweep rows iterate the
/// cross product with the later names innermost.
pub const FLOW_KEYS: [&str; 7] = ["U", "i0", "c", "delta", "b", "p0", "T0"];

/// Largest admissible sweep cross product.
pub const MAX_SWEEP_TUPLES: usize = 1_000_000;

/// One run's worth of configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(rename = "U")]
    pub free_stream_speed: f64,
    #[serde(rename = "i0")]
    pub total_energy: f64,
    #[serde(rename = "c")]
    pub wall_gradient: f64,
    #[serde(rename = "delta")]
    pub thickness: f64,
    #[serde(rename = "b")]
    pub polytropic_exponent: f64,
    #[serde(rename = "p0")]
    pub wall_pressure: f64,
    #[serde(rename = "T0")]
    pub surface_temperature: f64,
    pub grid: usize,
    pub series_order: usize,
    pub format: OutputFormat,
    /// (parameter name, values) in canonical parameter order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<(String, Vec<f64>)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flow = gaslayer::FlowParams::default();
        RunConfig {
            free_stream_speed: 0.1,
            total_energy: flow.total_energy,
            wall_gradient: flow.wall_gradient,
            thickness: flow.thickness,
            polytropic_exponent: flow.polytropic_exponent,
            wall_pressure: flow.wall_pressure,
            surface_temperature: flow.surface_temperature,
            grid: 201,
            series_order: 2,
            format: OutputFormat::Csv,
            sweep: Vec::new(),
        }
    }
}

impl RunConfig {
    /// Validate the run-level invariants and build the flow parameters.
    pub fn validate(&self) -> CliResult<gaslayer::FlowParams> {
        if self.grid < 5 {
            return Err(CliError::Config(format!(
                "grid must be at least 5, got {}",
                self.grid
            )));
        }
        if self.series_order > 16 {
            return Err(CliError::Config(format!(
                "series_order must be within 0..=16, got {}",
                self.series_order
            )));
        }
        if !self.sweep.is_empty() {
            let mut tuples: usize = 1;
            for (key, values) in &self.sweep {
                if !FLOW_KEYS.contains(&key.as_str()) {
                    return Err(CliError::Config(format!("unknown sweep key `{key}`")));
                }
                if values.is_empty() {
                    return Err(CliError::Config(format!("empty sweep list for `{key}`")));
                }
                tuples = tuples.saturating_mul(values.len());
            }
            if tuples > MAX_SWEEP_TUPLES {
                return Err(CliError::Config(format!(
                    "sweep cross product {tuples} exceeds {MAX_SWEEP_TUPLES}"
                )));
            }
        }
        self.flow_params()
    }

    /// Flow parameters as configured (validated).
    pub fn flow_params(&self) -> CliResult<gaslayer::FlowParams> {
        gaslayer::FlowParams {
            free_stream_speed: self.free_stream_speed,
            total_energy: self.total_energy,
            wall_gradient: self.wall_gradient,
            thickness: self.thickness,
            polytropic_exponent: self.polytropic_exponent,
            wall_pressure: self.wall_pressure,
            surface_temperature: self.surface_temperature,
            ..gaslayer::FlowParams::default()
        }
        .validated()
        .map_err(CliError::from)
    }

    /// Set one flow value by flag name.
    pub fn set_flow(&mut self, key: &str, value: f64) -> CliResult<()> {
        match key {
            "U" => self.free_stream_speed = value,
            "i0" => self.total_energy = value,
            "c" => self.wall_gradient = value,
            "delta" => self.thickness = value,
            "b" => self.polytropic_exponent = value,
            "p0" => self.wall_pressure = value,
            "T0" => self.surface_temperature = value,
            other => return Err(CliError::Config(format!("unknown flow key `{other}`"))),
        }
        Ok(())
    }

    fn flow_value(&self, key: &str) -> f64 {
        match key {
            "U" => self.free_stream_speed,
            "i0" => self.total_energy,
            "c" => self.wall_gradient,
            "delta" => self.thickness,
            "b" => self.polytropic_exponent,
            "p0" => self.wall_pressure,
            "T0" => self.surface_temperature,
            _ => unreachable!("flow keys are fixed"),
        }
    }

    /// Add or replace a sweep list, keeping canonical key order.
    pub fn set_sweep(&mut self, key: &str, values: Vec<f64>) -> CliResult<()> {
        if !FLOW_KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown sweep key `{key}`")));
        }
        self.sweep.retain(|(k, _)| k != key);
        self.sweep.push((key.to_string(), values));
        self.sweep.sort_by_key(|(k, _)| {
            FLOW_KEYS.iter().position(|&name| name == k).unwrap_or(usize::MAX)
        });
        Ok(())
    }

    /// Deterministic `key = value` echo lines, reparseable by
    /// [`RunConfig::from_echo_lines`].
    pub fn echo_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for key in FLOW_KEYS {
            lines.push(format!("{key} = {}", self.flow_value(key)));
        }
        lines.push(format!("grid = {}", self.grid));
        lines.push(format!("series_order = {}", self.series_order));
        lines.push(format!("format = {}", self.format));
        for (key, values) in &self.sweep {
            let list: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
            lines.push(format!("sweep.{key} = {}", list.join(", ")));
        }
        lines
    }

    /// Rebuild a config from echo lines (leading `# ` stripped by the caller
    /// or present; both accepted).
    pub fn from_echo_lines<'a, I: IntoIterator<Item = &'a str>>(lines: I) -> CliResult<Self> {
        let mut config = RunConfig::default();
        for raw in lines {
            let line = raw.trim_start_matches('#').trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_key_value(line, 0)?;
            config.apply_key(&key, &value, 0)?;
        }
        Ok(config)
    }

    fn apply_key(&mut self, key: &str, value: &str, line_no: usize) -> CliResult<()> {
        let parse_f64 = |v: &str| -> CliResult<f64> {
            v.parse::<f64>()
                .map_err(|_| CliError::Config(format!("line {line_no}: bad number `{v}`")))
        };
        let parse_usize = |v: &str| -> CliResult<usize> {
            v.parse::<usize>()
                .map_err(|_| CliError::Config(format!("line {line_no}: bad integer `{v}`")))
        };
        if let Some(name) = key.strip_prefix("sweep.") {
            let values = parse_list(value, line_no)?;
            return self.set_sweep(name, values);
        }
        match key {
            "U" | "i0" | "c" | "delta" | "b" | "p0" | "T0" => {
                self.set_flow(key, parse_f64(value)?)
            }
            "grid" => {
                self.grid = parse_usize(value)?;
                Ok(())
            }
            "series_order" => {
                self.series_order = parse_usize(value)?;
                Ok(())
            }
            "format" => {
                self.format = OutputFormat::parse(value)?;
                Ok(())
            }
            other => Err(CliError::Config(format!(
                "line {line_no}: unknown key `{other}`"
            ))),
        }
    }

    /// Parse the sectioned config-file text.
    pub fn from_file_text(text: &str) -> CliResult<Self> {
        let mut config = RunConfig::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    CliError::Config(format!("line {line_no}: unterminated section header"))
                })?;
                section = name.trim().to_string();
                if !matches!(section.as_str(), "flow" | "run" | "sweep") {
                    return Err(CliError::Config(format!(
                        "line {line_no}: unknown section `[{section}]`"
                    )));
                }
                continue;
            }
            let (key, value) = split_key_value(line, line_no)?;
            match section.as_str() {
                "flow" => config.apply_key(&key, &value, line_no)?,
                "run" => config.apply_key(&key, &value, line_no)?,
                "sweep" => {
                    let values = parse_list(&value, line_no)?;
                    config.set_sweep(&key, values)?;
                }
                _ => {
                    return Err(CliError::Config(format!(
                        "line {line_no}: key `{key}` before any section header"
                    )))
                }
            }
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_file_text(&text)
    }

    /// Recover the config embedded in a report's `# key = value` header.
    /// Non-config header lines (version, ranking, ...) are skipped.
    pub fn from_report_header(text: &str) -> CliResult<Self> {
        let is_config_key = |k: &str| {
            FLOW_KEYS.contains(&k)
                || matches!(k, "grid" | "series_order" | "format")
                || k.starts_with("sweep.")
        };
        let lines = text
            .lines()
            .filter_map(|l| l.strip_prefix("# "))
            .filter(|l| {
                l.split_once('=')
                    .map(|(k, _)| is_config_key(k.trim()))
                    .unwrap_or(false)
            });
        Self::from_echo_lines(lines)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

fn split_key_value(line: &str, line_no: usize) -> CliResult<(String, String)> {
    let (key, value) = line.split_once('=').ok_or_else(|| {
        CliError::Config(format!("line {line_no}: expected `key = value`, got `{line}`"))
    })?;
    Ok((key.trim().to_string(), value.trim().to_string()))
}

fn parse_list(value: &str, line_no: usize) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("line {line_no}: bad number `{}`", v.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn parses_sectioned_file() {
        let text = "\
# speeds
[flow]
U = 0.2
i0 = 0.5

[run]
grid = 101
format = json

[sweep]
c = 0.1, 1, 10
";
        let config = RunConfig::from_file_text(text).unwrap();
        assert_eq!(config.free_stream_speed, 0.2);
        assert_eq!(config.grid, 101);
        assert_eq!(config.format, OutputFormat::Json);
        assert_eq!(config.sweep, vec![("c".to_string(), vec![0.1, 1.0, 10.0])]);
    }

    #[test]
    fn rejects_unknown_key_with_line_number() {
        let err = RunConfig::from_file_text("[run]\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn echo_round_trips() {
        let mut config = RunConfig {
            free_stream_speed: 0.30000000000000004,
            wall_gradient: 1.0 / 3.0,
            grid: 41,
            ..RunConfig::default()
        };
        config.set_sweep("U", vec![0.0, 0.1, 0.2]).unwrap();
        let lines = config.echo_lines();
        let reparsed =
            RunConfig::from_echo_lines(lines.iter().map(|s| s.as_str())).unwrap();
        assert_eq!(config, reparsed);
    }

    #[test]
    fn sweep_keys_keep_canonical_order() {
        let mut config = RunConfig::default();
        config.set_sweep("c", vec![1.0]).unwrap();
        config.set_sweep("U", vec![0.0]).unwrap();
        let keys: Vec<&str> = config.sweep.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["U", "c"]);
    }

    #[test]
    fn grid_floor_enforced() {
        let config = RunConfig {
            grid: 4,
            ..RunConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn sweep_budget_enforced() {
        let mut config = RunConfig::default();
        let big: Vec<f64> = (0..1001).map(|i| i as f64 * 1e-4).collect();
        config.set_sweep("U", big.clone()).unwrap();
        config.set_sweep("c", big).unwrap();
        assert!(config.validate().is_err());
    }
}
