//! One-shot reproduction of the reference results with a pass/fail report.
//!
//! Runs the default pulsed simulation and its conditioned and unconditioned
//! analyses, the low-flux and continuous-excitation comparison runs, and the
//! phase-jitter bound, then checks every headline claim at its pinned
//! tolerance. Writes plot-ready CSVs plus `report.txt` into the output
//! directory. All values are a pure function of the seed.

use std::fmt::Write as _;
use std::path::Path;

use photonstat_core::conditioner::{build_chain, find_triggers, g2_dn, ConditionedResult};
use photonstat_core::correlator::{g2_tau, oscillation_summary, OscillationSummary};
use photonstat_core::phase::{
    jitter_distribution, phase_jitter, PhaseParams, DEFAULT_WAVELENGTH_NM,
};
use photonstat_core::rng::{self, streams};
use photonstat_core::sim::simulate;
use photonstat_core::stats;
use photonstat_core::{Mode, SimConfig, Time};

use crate::csv_out::{conditioned_csv, histogram_csv};
use crate::error::CliError;
use crate::stream_io::write_atomic;

pub const DEFAULT_SEED: u64 = 42;

// Analysis parameters of the reproduction.
pub const WINDOW: usize = 5;
pub const BOOTSTRAP_REPLICATES: usize = 1000;
pub const BIN_WIDTH: Time = Time::from_ns(500);
pub const MAX_TAU: Time = Time::from_us(50);
pub const FLUX_SEEDS: u64 = 10;
pub const LOW_FLUX_PER_MS: f64 = 3.0;

// Pinned acceptance thresholds.
pub const G2_ZERO_RANGE: (f64, f64) = (0.2, 0.6);
pub const G2_ZERO_SIGNIFICANCE: f64 = 3.0;
pub const OFF_PEAK_TOLERANCE: f64 = 0.10;
pub const TRANSIT_PEAK_SIGNIFICANCE: f64 = 2.0;
pub const CONTINUOUS_SIGNIFICANCE: f64 = 3.0;
pub const PHASE_REFERENCE_RANGE: (f64, f64) =
    (std::f64::consts::PI / 45.0, std::f64::consts::PI / 38.0);
pub const PHASE_ROUND_BOUND: f64 = std::f64::consts::PI / 40.0;
pub const JITTER_SAMPLES: usize = 100_000;
pub const JITTER_MEAN_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: usize,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Reproduction {
    pub seed: u64,
    pub criteria: Vec<CriterionOutcome>,
    pub report: String,
}

impl Reproduction {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn criterion(&self, index: usize) -> &CriterionOutcome {
        self.criteria
            .iter()
            .find(|c| c.index == index)
            .expect("criterion index exists")
    }
}

fn check(
    criteria: &mut Vec<CriterionOutcome>,
    index: usize,
    title: &'static str,
    checks: Vec<(bool, String)>,
) {
    let pass = checks.iter().all(|(ok, _)| *ok);
    let details = checks
        .into_iter()
        .map(|(ok, line)| format!("[{}] {line}", if ok { "ok" } else { "FAIL" }))
        .collect();
    criteria.push(CriterionOutcome {
        index,
        title,
        pass,
        details,
    });
}

/// Continuous-mode peak rate with the same mean click rate as the pulsed
/// defaults: flux·p_emit·(transit/period)·η = flux·peak·(transit/2)·η gives
/// peak = 2·p_emit/period.
pub fn matched_continuous_peak(config: &SimConfig) -> f64 {
    2.0 * config.p_emit / config.schedule.period().as_secs_f64()
}

fn conditioned_from_config(config: &SimConfig, replicates: usize) -> Option<ConditionedResult> {
    let out = simulate(config).ok()?;
    let triggers = find_triggers(&out.clicks, &config.schedule);
    let chain = build_chain(&out.clicks, &config.schedule, &triggers, WINDOW);
    g2_dn(
        &chain,
        replicates,
        &mut rng::stream(config.rng_seed, streams::BOOTSTRAP),
    )
    .ok()
}

pub fn run_reproduction(out_dir: &Path, seed: u64) -> Result<Reproduction, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut criteria: Vec<CriterionOutcome> = Vec::new();

    // Default pulsed run and both analyses.
    let config = SimConfig {
        rng_seed: seed,
        ..SimConfig::default()
    };
    eprintln!(
        "reproduce: default pulsed run (flux {} atoms/ms)",
        config.atom_flux_per_ms
    );
    let pulsed = simulate(&config).map_err(|e| CliError::Config(e.to_string()))?;

    let histogram = g2_tau(&pulsed.clicks, &pulsed.clicks, BIN_WIDTH, MAX_TAU)
        .map_err(|e| CliError::EmptyStream(e.to_string()))?;
    write_atomic(
        &out_dir.join("g2_tau_pulsed.csv"),
        histogram_csv(
            &histogram,
            &[
                ("detection", "single-detector-autocorrelation".into()),
                ("seed", seed.to_string()),
            ],
        )
        .as_bytes(),
    )?;
    let summary = oscillation_summary(&histogram, &config.schedule)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let triggers = find_triggers(&pulsed.clicks, &config.schedule);
    let chain = build_chain(&pulsed.clicks, &config.schedule, &triggers, WINDOW);
    eprintln!(
        "reproduce: conditioned analysis ({} triggers, {} bootstrap replicates)",
        triggers.len(),
        BOOTSTRAP_REPLICATES
    );
    let conditioned = g2_dn(
        &chain,
        BOOTSTRAP_REPLICATES,
        &mut rng::stream(seed, streams::BOOTSTRAP),
    )
    .map_err(|e| CliError::EmptyStream(e.to_string()))?;
    write_atomic(
        &out_dir.join("g2_dn_default.csv"),
        conditioned_csv(
            &conditioned,
            &[
                ("window", WINDOW.to_string()),
                ("period_ns", config.schedule.period().as_ns().to_string()),
                (
                    "bright_ns",
                    config.schedule.bright_duration().as_ns().to_string(),
                ),
                ("triggers", triggers.len().to_string()),
                ("seed", seed.to_string()),
            ],
        )
        .as_bytes(),
    )?;

    // Criterion 1: conditioned antibunching.
    let g2_zero = conditioned.at(0);
    let se_zero = conditioned.stderr_at(0);
    let significance = (1.0 - g2_zero) / se_zero;
    let off_peak: Vec<f64> = (2..=WINDOW as i64).map(|d| conditioned.at(d)).collect();
    let off_peak_mean = stats::mean(&off_peak);
    check(
        &mut criteria,
        1,
        "conditioned antibunching",
        vec![
            (
                significance >= G2_ZERO_SIGNIFICANCE,
                format!(
                    "g2(dN=0) = {g2_zero:.4} ± {se_zero:.4}, {significance:.1}σ below 1 (need ≥ {G2_ZERO_SIGNIFICANCE}σ)"
                ),
            ),
            (
                (G2_ZERO_RANGE.0..=G2_ZERO_RANGE.1).contains(&g2_zero),
                format!(
                    "g2(dN=0) within [{}, {}]",
                    G2_ZERO_RANGE.0, G2_ZERO_RANGE.1
                ),
            ),
            (
                (off_peak_mean - 1.0).abs() <= OFF_PEAK_TOLERANCE,
                format!(
                    "mean g2(|dN| = 2..{WINDOW}) = {off_peak_mean:.4} within 1.00 ± {OFF_PEAK_TOLERANCE:.2}"
                ),
            ),
        ],
    );

    // Criterion 2: flux ordering, point estimates averaged over seeds.
    eprintln!("reproduce: flux ordering ({FLUX_SEEDS} seeds per flux)");
    let mut flux_csv = String::from("# photonstat flux ordering\nflux_per_ms,seed,g2_zero\n");
    let mut flux_means = Vec::new();
    for flux in [config.atom_flux_per_ms, LOW_FLUX_PER_MS] {
        let mut values = Vec::new();
        for offset in 0..FLUX_SEEDS {
            let run_seed = seed.wrapping_add(offset);
            let run_config = SimConfig {
                atom_flux_per_ms: flux,
                rng_seed: run_seed,
                ..SimConfig::default()
            };
            let result = conditioned_from_config(&run_config, 0)
                .ok_or_else(|| CliError::EmptyStream("flux run produced no triggers".into()))?;
            let _ = writeln!(flux_csv, "{flux},{run_seed},{:.6}", result.at(0));
            values.push(result.at(0));
        }
        flux_means.push(stats::mean(&values));
    }
    write_atomic(&out_dir.join("flux_ordering.csv"), flux_csv.as_bytes())?;
    let (high_flux_mean, low_flux_mean) = (flux_means[0], flux_means[1]);
    check(
        &mut criteria,
        2,
        "flux ordering of g2(dN=0)",
        vec![(
            low_flux_mean < high_flux_mean,
            format!(
                "mean g2(dN=0) over {FLUX_SEEDS} seeds: {low_flux_mean:.4} at {LOW_FLUX_PER_MS} atoms/ms < {high_flux_mean:.4} at {} atoms/ms",
                config.atom_flux_per_ms
            ),
        )],
    );

    // Criterion 3: transit peaks at dN = ±1 exceed the window edge.
    let peak = conditioned.at(1);
    let edge = conditioned.at(WINDOW as i64);
    let se_diff =
        (conditioned.stderr_at(1).powi(2) + conditioned.stderr_at(WINDOW as i64).powi(2)).sqrt();
    let peak_significance = (peak - edge) / se_diff;
    check(
        &mut criteria,
        3,
        "transit peaks at dN = ±1",
        vec![(
            peak_significance >= TRANSIT_PEAK_SIGNIFICANCE,
            format!(
                "g2(±1) = {peak:.4} exceeds g2(±{WINDOW}) = {edge:.4} by {peak_significance:.1}σ (need ≥ {TRANSIT_PEAK_SIGNIFICANCE}σ)"
            ),
        )],
    );

    // Criterion 4: pulsed oscillation locked to the pump period, all dark
    // minima significantly below 1, bunching at τ=0.
    let OscillationSummary {
        ref windows,
        fraction_minima_below_one,
        g2_at_zero,
        mean_peak_spacing,
    } = summary;
    let spacing = mean_peak_spacing.unwrap_or(Time::ZERO);
    let spacing_error = (spacing - config.schedule.period()).abs();
    check(
        &mut criteria,
        4,
        "pulsed g2(τ) oscillation",
        vec![
            (
                spacing_error <= BIN_WIDTH,
                format!(
                    "oscillation period {spacing} within one bin ({BIN_WIDTH}) of the pump period {} ({} windows)",
                    config.schedule.period(),
                    windows.len()
                ),
            ),
            (
                fraction_minima_below_one == 1.0,
                format!(
                    "dark-lag minima below 1 at ≥2σ in {:.1}% of period windows (need 100%)",
                    100.0 * fraction_minima_below_one
                ),
            ),
            (
                g2_at_zero > 1.0,
                format!("τ=0 bin g2 = {g2_at_zero:.4} exceeds 1"),
            ),
        ],
    );

    // Criterion 5: continuous excitation at matched mean click rate shows no
    // significant dip below 1.
    let continuous_config = SimConfig {
        mode: Mode::Continuous,
        peak_rate_continuous_per_s: matched_continuous_peak(&config),
        rng_seed: seed,
        ..SimConfig::default()
    };
    eprintln!(
        "reproduce: continuous run (peak rate {:.0}/s)",
        continuous_config.peak_rate_continuous_per_s
    );
    let continuous = simulate(&continuous_config).map_err(|e| CliError::Config(e.to_string()))?;
    let continuous_hist = g2_tau(&continuous.clicks, &continuous.clicks, BIN_WIDTH, MAX_TAU)
        .map_err(|e| CliError::EmptyStream(e.to_string()))?;
    write_atomic(
        &out_dir.join("g2_tau_continuous.csv"),
        histogram_csv(
            &continuous_hist,
            &[
                ("detection", "single-detector-autocorrelation".into()),
                ("mode", "continuous".into()),
                ("seed", seed.to_string()),
            ],
        )
        .as_bytes(),
    )?;
    let dips = (0..continuous_hist.len())
        .filter(|&i| {
            (1.0 - continuous_hist.g2[i]) >= CONTINUOUS_SIGNIFICANCE * continuous_hist.stderr[i]
        })
        .count();
    let rate_pulsed = pulsed.clicks.len() as f64 / config.record_length.as_secs_f64();
    let rate_continuous =
        continuous.clicks.len() as f64 / continuous_config.record_length.as_secs_f64();
    check(
        &mut criteria,
        5,
        "continuous excitation stays at or above 1",
        vec![
            (
                dips == 0,
                format!(
                    "{dips} of {} bins fall below 1 at ≥{CONTINUOUS_SIGNIFICANCE}σ (need 0)",
                    continuous_hist.len()
                ),
            ),
            (
                (rate_continuous - rate_pulsed).abs() <= 0.05 * rate_pulsed,
                format!(
                    "mean click rate matched: {rate_continuous:.0}/s continuous vs {rate_pulsed:.0}/s pulsed (±5%)"
                ),
            ),
        ],
    );

    // Criterion 6: phase-jitter bound.
    let reference = phase_jitter(&PhaseParams {
        axial_velocity_mm_s: 5.0,
        pulse_duration: Time::from_us(2),
        wavelength_nm: DEFAULT_WAVELENGTH_NM,
    });
    let at_800 = phase_jitter(&PhaseParams {
        axial_velocity_mm_s: 5.0,
        pulse_duration: Time::from_us(2),
        wavelength_nm: 800.0,
    });
    let doubled = phase_jitter(&PhaseParams {
        axial_velocity_mm_s: 10.0,
        pulse_duration: Time::from_us(2),
        wavelength_nm: DEFAULT_WAVELENGTH_NM,
    });
    let jitter_stats = jitter_distribution(
        5.0,
        Time::from_us(2),
        DEFAULT_WAVELENGTH_NM,
        JITTER_SAMPLES,
        &mut rng::stream(seed, 5),
    );
    let half_bound = jitter_stats.analytic_bound / 2.0;
    check(
        &mut criteria,
        6,
        "phase jitter bound",
        vec![
            (
                (PHASE_REFERENCE_RANGE.0..=PHASE_REFERENCE_RANGE.1).contains(&reference),
                format!(
                    "Δφ(5 mm/s, 2 μs, {DEFAULT_WAVELENGTH_NM} nm) = {reference:.6} rad = π/{:.2}, within [π/45, π/38]",
                    std::f64::consts::PI / reference
                ),
            ),
            (
                at_800 <= PHASE_ROUND_BOUND,
                format!("Δφ at 800 nm = {at_800:.6} rad ≤ π/40 = {PHASE_ROUND_BOUND:.6}"),
            ),
            (
                doubled == 2.0 * reference,
                "linear in velocity: Δφ(10 mm/s) = 2·Δφ(5 mm/s) exactly".to_string(),
            ),
            (
                jitter_stats.max_abs <= jitter_stats.analytic_bound,
                format!(
                    "max |Δφ| over {JITTER_SAMPLES} sampled velocities = {:.6} rad ≤ bound {:.6}",
                    jitter_stats.max_abs, jitter_stats.analytic_bound
                ),
            ),
            (
                (jitter_stats.mean_abs - half_bound).abs() <= JITTER_MEAN_TOLERANCE * half_bound,
                format!(
                    "mean |Δφ| = {:.6} rad within {:.0}% of bound/2 = {half_bound:.6}",
                    jitter_stats.mean_abs,
                    100.0 * JITTER_MEAN_TOLERANCE
                ),
            ),
        ],
    );

    // Report.
    let mut report = String::new();
    let _ = writeln!(report, "photonstat reproduction report");
    let _ = writeln!(report, "tool: photonstat {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(report, "seed: {seed}");
    let _ = writeln!(
        report,
        "default config: flux {} atoms/ms, period {}, bright {}, transit {} ± {}, p_emit {}, background {}/s, efficiency {}, record {}",
        config.atom_flux_per_ms,
        config.schedule.period(),
        config.schedule.bright_duration(),
        config.mean_transit,
        config.transit_spread,
        config.p_emit,
        config.background_rate_per_s,
        config.detector_efficiency,
        config.record_length
    );
    let _ = writeln!(report);
    for criterion in &criteria {
        let _ = writeln!(
            report,
            "criterion {} ({}): {}",
            criterion.index,
            criterion.title,
            if criterion.pass { "PASS" } else { "FAIL" }
        );
        for detail in &criterion.details {
            let _ = writeln!(report, "  {detail}");
        }
    }
    let passed = criteria.iter().filter(|c| c.pass).count();
    let _ = writeln!(report);
    let _ = writeln!(
        report,
        "overall: {} ({passed}/{} criteria)",
        if passed == criteria.len() {
            "PASS"
        } else {
            "FAIL"
        },
        criteria.len()
    );
    write_atomic(&out_dir.join("report.txt"), report.as_bytes())?;

    Ok(Reproduction {
        seed,
        criteria,
        report,
    })
}
