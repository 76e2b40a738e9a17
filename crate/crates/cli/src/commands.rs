//! Implementations behind the CLI subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use photonstat_core::conditioner::{build_chain, find_triggers, g2_dn, ConditionerError};
use photonstat_core::correlator::{g2_tau, CorrelatorError};
use photonstat_core::phase::{jitter_distribution, phase_jitter, PhaseParams};
use photonstat_core::rng::{self, streams};
use photonstat_core::sim::{beamsplit, simulate};
use photonstat_core::{PumpSchedule, SimConfig, Time};

use crate::config_io::{load_config, render_config};
use crate::csv_out::{conditioned_csv, histogram_csv};
use crate::error::CliError;
use crate::manifest::{digest_file, RunManifest};
use crate::stream_io::{read_stream, write_atomic, write_binary, write_text};

pub const SEED_ENV_VAR: &str = "PHOTONSTAT_SEED";

/// Seed priority: `--seed` flag, then `PHOTONSTAT_SEED`, then the fallback
/// (config value or default). Returns the seed and where it came from.
pub fn resolve_seed(flag: Option<u64>, fallback: u64) -> Result<(u64, &'static str), CliError> {
    if let Some(seed) = flag {
        return Ok((seed, "--seed"));
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(value) => {
            let seed = value.parse().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV_VAR}='{value}' is not a u64 seed"))
            })?;
            Ok((seed, SEED_ENV_VAR))
        }
        Err(_) => Ok((fallback, "config")),
    }
}

pub fn manifest_path(out_path: &Path) -> PathBuf {
    let mut name = out_path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.txt");
    out_path.with_file_name(name)
}

pub fn cmd_simulate(
    config_path: Option<&Path>,
    out_path: &Path,
    seed_flag: Option<u64>,
    text_format: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let mut config = match config_path {
        Some(path) => load_config(path)?,
        None => SimConfig::default(),
    };
    let (seed, seed_source) = resolve_seed(seed_flag, config.rng_seed)?;
    config.rng_seed = seed;

    let output = simulate(&config).map_err(|e| CliError::Config(e.to_string()))?;
    if text_format {
        write_text(out_path, &output.clicks)?;
    } else {
        write_binary(out_path, &output.clicks)?;
    }

    let mut file_digests = Vec::new();
    if let Some(path) = config_path {
        file_digests.push((
            "input_config".to_string(),
            path.display().to_string(),
            digest_file(path)?,
        ));
    }
    file_digests.push((
        "output_stream".to_string(),
        out_path.display().to_string(),
        digest_file(out_path)?,
    ));
    let manifest = RunManifest {
        command: format!(
            "simulate{} --out {}{}",
            config_path
                .map(|p| format!(" --config {}", p.display()))
                .unwrap_or_default(),
            out_path.display(),
            if text_format { " --text" } else { "" },
        ),
        seed,
        seed_source,
        resolved_config: render_config(&config),
        file_digests,
        wall_clock_ms: started.elapsed().as_millis(),
    };
    manifest.write(&manifest_path(out_path))?;

    eprintln!(
        "simulate: {} clicks over {} ({} atoms, {} emitted, {} background) -> {}",
        output.clicks.len(),
        config.record_length,
        output.transits.len(),
        output.emitted_photon_count,
        output.background_count,
        out_path.display()
    );
    Ok(())
}

fn correlator_error(e: CorrelatorError) -> CliError {
    match e {
        CorrelatorError::EmptyStream => CliError::EmptyStream(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn cmd_g2tau(
    input: &Path,
    out_csv: &Path,
    bin_width: Time,
    max_tau: Time,
    hbt: bool,
    split_seed: u64,
) -> Result<(), CliError> {
    let stream = read_stream(input)?;
    let histogram = if hbt {
        let (a, b) = beamsplit(&stream, &mut rng::stream(split_seed, streams::BEAMSPLIT));
        g2_tau(&a, &b, bin_width, max_tau).map_err(correlator_error)?
    } else {
        g2_tau(&stream, &stream, bin_width, max_tau).map_err(correlator_error)?
    };
    let mut header: Vec<(&str, String)> = vec![
        ("input", input.display().to_string()),
        (
            "detection",
            if hbt {
                "hbt-cross-correlation".into()
            } else {
                "single-detector-autocorrelation".into()
            },
        ),
        ("max_tau_ns", max_tau.as_ns().to_string()),
    ];
    if hbt {
        header.push(("split_seed", split_seed.to_string()));
    }
    write_atomic(out_csv, histogram_csv(&histogram, &header).as_bytes())?;
    eprintln!(
        "g2tau: {} bins over ±{} -> {}",
        histogram.len(),
        max_tau,
        out_csv.display()
    );
    Ok(())
}

pub fn cmd_g2dn(
    input: &Path,
    out_csv: &Path,
    period: Time,
    bright: Time,
    window: usize,
    replicates: usize,
    bootstrap_seed: u64,
) -> Result<(), CliError> {
    if window == 0 {
        return Err(CliError::Usage(
            "window half-width W must be at least 1".into(),
        ));
    }
    let schedule = PumpSchedule::new(period, bright).map_err(|e| CliError::Usage(e.to_string()))?;
    let stream = read_stream(input)?;
    let triggers = find_triggers(&stream, &schedule);
    let chain = build_chain(&stream, &schedule, &triggers, window);
    let result = g2_dn(
        &chain,
        replicates,
        &mut rng::stream(bootstrap_seed, streams::BOOTSTRAP),
    )
    .map_err(|e| match e {
        ConditionerError::DegenerateChain => CliError::EmptyStream(e.to_string()),
    })?;

    let header: Vec<(&str, String)> = vec![
        ("input", input.display().to_string()),
        ("window", window.to_string()),
        ("period_ns", period.as_ns().to_string()),
        ("bright_ns", bright.as_ns().to_string()),
        ("triggers", triggers.len().to_string()),
        ("bootstrap_replicates", replicates.to_string()),
        ("bootstrap_seed", bootstrap_seed.to_string()),
    ];
    write_atomic(out_csv, conditioned_csv(&result, &header).as_bytes())?;
    eprintln!(
        "g2dn: {} triggers, {} segments, g2(0) = {:.4} ± {:.4} -> {}",
        triggers.len(),
        result.n_segments,
        result.at(0),
        result.stderr_at(0),
        out_csv.display()
    );
    Ok(())
}

pub fn cmd_phase(
    velocity_mm_s: f64,
    pulse: Time,
    wavelength_nm: f64,
    samples: usize,
    hist_out: Option<&Path>,
    seed_flag: Option<u64>,
) -> Result<(), CliError> {
    if wavelength_nm <= 0.0 {
        return Err(CliError::Usage("wavelength must be positive".into()));
    }
    let jitter = phase_jitter(&PhaseParams {
        axial_velocity_mm_s: velocity_mm_s,
        pulse_duration: pulse,
        wavelength_nm,
    });
    if jitter == 0.0 {
        println!(
            "phase jitter: 0 rad (velocity {velocity_mm_s} mm/s, pulse {pulse}, wavelength {wavelength_nm} nm)"
        );
    } else {
        println!(
            "phase jitter: {:.6} rad = pi/{:.2} (velocity {} mm/s, pulse {}, wavelength {} nm)",
            jitter,
            std::f64::consts::PI / jitter,
            velocity_mm_s,
            pulse,
            wavelength_nm
        );
    }
    if samples > 0 {
        let (seed, _) = resolve_seed(seed_flag, 0)?;
        let stats = jitter_distribution(
            velocity_mm_s,
            pulse,
            wavelength_nm,
            samples,
            &mut rng::stream(seed, 0),
        );
        println!(
            "over {} uniform velocity samples: max |dphi| = {:.6} rad, mean = {:.6} rad, bound = {:.6} rad",
            stats.n_samples, stats.max_abs, stats.mean_abs, stats.analytic_bound
        );
        if let Some(path) = hist_out {
            let mut csv = String::from("# photonstat phase jitter histogram\n");
            csv.push_str(&format!(
                "# velocity_bound_mm_s={velocity_mm_s} pulse_ns={} wavelength_nm={wavelength_nm} samples={samples}\n",
                pulse.as_ns()
            ));
            csv.push_str("bin_lo_rad,bin_hi_rad,count\n");
            let bin = stats.analytic_bound / stats.histogram.len() as f64;
            for (i, count) in stats.histogram.iter().enumerate() {
                csv.push_str(&format!(
                    "{:.8},{:.8},{count}\n",
                    i as f64 * bin,
                    (i + 1) as f64 * bin
                ));
            }
            write_atomic(path, csv.as_bytes())?;
        }
    }
    Ok(())
}
