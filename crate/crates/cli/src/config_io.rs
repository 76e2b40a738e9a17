//! Simulation configuration files: flat `key = value` lines with `#`
//! comments. Duration values accept the `ns`/`us`/`ms`/`s` suffixes; rates
//! carry their unit in the key name. Keys not present fall back to the
//! defaults, so a config file only needs the values it changes.

use std::fs;
use std::path::Path;

use photonstat_core::{Mode, PumpSchedule, SimConfig};

use crate::error::CliError;
use crate::units::parse_duration;

pub const KEYS: &[&str] = &[
    "atom_flux_per_ms",
    "mean_transit",
    "transit_spread",
    "period",
    "bright_duration",
    "p_emit",
    "background_rate_per_s",
    "detector_efficiency",
    "mode",
    "rabi_period",
    "peak_rate_continuous_per_s",
    "record_length",
    "rng_seed",
];

/// Applies `key = value` lines from `text` on top of `base`.
pub fn parse_config_str(text: &str, base: SimConfig) -> Result<SimConfig, String> {
    let mut config = base;
    let mut period = config.schedule.period();
    let mut bright = config.schedule.bright_duration();
    let mut seen: Vec<&str> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {lineno}: expected 'key = value', got '{line}'"))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(format!("line {lineno}: {key} has no value"));
        }

        let canonical = KEYS
            .iter()
            .find(|&&k| k == key)
            .ok_or_else(|| format!("line {lineno}: unknown key '{key}'"))?;
        if seen.contains(canonical) {
            return Err(format!("line {lineno}: duplicate key '{key}'"));
        }
        seen.push(canonical);

        let duration =
            |v: &str| parse_duration(v).map_err(|e| format!("line {lineno}: {key}: {e}"));
        let number = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| format!("line {lineno}: {key}: '{v}' is not a number"))
        };

        match *canonical {
            "atom_flux_per_ms" => config.atom_flux_per_ms = number(value)?,
            "mean_transit" => config.mean_transit = duration(value)?,
            "transit_spread" => config.transit_spread = duration(value)?,
            "period" => period = duration(value)?,
            "bright_duration" => bright = duration(value)?,
            "p_emit" => config.p_emit = number(value)?,
            "background_rate_per_s" => config.background_rate_per_s = number(value)?,
            "detector_efficiency" => config.detector_efficiency = number(value)?,
            "mode" => {
                config.mode = match value.to_ascii_lowercase().as_str() {
                    "pulsed" => Mode::Pulsed,
                    "continuous" => Mode::Continuous,
                    other => {
                        return Err(format!(
                            "line {lineno}: mode: '{other}' is neither 'pulsed' nor 'continuous'"
                        ))
                    }
                }
            }
            "rabi_period" => config.rabi_period = duration(value)?,
            "peak_rate_continuous_per_s" => config.peak_rate_continuous_per_s = number(value)?,
            "record_length" => config.record_length = duration(value)?,
            "rng_seed" => {
                config.rng_seed = value
                    .parse()
                    .map_err(|_| format!("line {lineno}: rng_seed: '{value}' is not a u64"))?
            }
            _ => unreachable!("key list is exhaustive"),
        }
    }

    config.schedule =
        PumpSchedule::new(period, bright).map_err(|e| format!("period/bright_duration: {e}"))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SimConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let config = parse_config_str(&text, SimConfig::default())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    config
        .validate()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(config)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Pulsed => "pulsed",
        Mode::Continuous => "continuous",
    }
}

/// Full `key = value` rendering of a resolved configuration; parses back to
/// the same config.
pub fn render_config(config: &SimConfig) -> String {
    format!(
        "atom_flux_per_ms = {}\n\
         mean_transit = {}\n\
         transit_spread = {}\n\
         period = {}\n\
         bright_duration = {}\n\
         p_emit = {}\n\
         background_rate_per_s = {}\n\
         detector_efficiency = {}\n\
         mode = {}\n\
         rabi_period = {}\n\
         peak_rate_continuous_per_s = {}\n\
         record_length = {}\n\
         rng_seed = {}\n",
        config.atom_flux_per_ms,
        config.mean_transit,
        config.transit_spread,
        config.schedule.period(),
        config.schedule.bright_duration(),
        config.p_emit,
        config.background_rate_per_s,
        config.detector_efficiency,
        mode_name(config.mode),
        config.rabi_period,
        config.peak_rate_continuous_per_s,
        config.record_length,
        config.rng_seed,
    )
}
