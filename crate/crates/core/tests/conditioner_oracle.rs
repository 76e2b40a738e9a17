//! Conditioned pipeline against the exhaustive oracle, plus the structural
//! claims of the conditioned statistics on simulated streams.

use std::time::Instant;

use rand::Rng;

use photonstat_core::conditioner::{
    build_chain, find_triggers, g2_dn, g2_dn_bruteforce, ConditionerError,
};
use photonstat_core::rng::{self, SimRng};
use photonstat_core::sim::simulate;
use photonstat_core::{ClickStream, PumpSchedule, SimConfig, Time};

/// Streams with the structure the conditioner cares about: bursts of
/// bright-interval clicks from "atoms" plus uniform background, and
/// occasionally dark-only or empty streams.
fn random_conditioner_stream(rng: &mut SimRng) -> (ClickStream, PumpSchedule) {
    let period = Time::from_ns(rng.random_range(2_000..8_000));
    let bright = Time::from_ns(rng.random_range(1..=period.as_ns()));
    let schedule = PumpSchedule::new(period, bright).unwrap();
    let n_intervals = rng.random_range(30..400i64);
    let record = Time::from_ns(n_intervals * period.as_ns() + rng.random_range(0..period.as_ns()));

    let mut times: Vec<Time> = Vec::new();
    // atom-like bursts over consecutive intervals
    for _ in 0..rng.random_range(0..20) {
        let start = rng.random_range(0..n_intervals);
        let span = rng.random_range(1..8i64);
        for k in start..(start + span).min(n_intervals) {
            if rng.random::<f64>() < 0.6 {
                let (lo, hi) = schedule.bright_span(k);
                times.push(Time::from_ns(rng.random_range(lo.as_ns()..hi.as_ns())));
            }
        }
    }
    // background anywhere in the record
    for _ in 0..rng.random_range(0..40) {
        times.push(Time::from_ns(rng.random_range(0..record.as_ns())));
    }
    times.sort_unstable();
    (ClickStream::new(times, record).unwrap(), schedule)
}

#[test]
fn pipeline_matches_bruteforce_on_random_streams() {
    let started = Instant::now();
    let mut rng = rng::seeded(2002);
    for case in 0..120 {
        let (stream, schedule) = random_conditioner_stream(&mut rng);
        let window = rng.random_range(1..=4usize);
        let boot_seed = rng.random::<u64>();
        let fast = {
            let triggers = find_triggers(&stream, &schedule);
            let chain = build_chain(&stream, &schedule, &triggers, window);
            g2_dn(&chain, 50, &mut rng::stream(boot_seed, 0))
        };
        let slow = g2_dn_bruteforce(
            &stream,
            &schedule,
            window,
            50,
            &mut rng::stream(boot_seed, 0),
        );
        assert_eq!(fast, slow, "case {case} (n={} W={window})", stream.len());
    }
    assert!(
        started.elapsed().as_secs_f64() < 10.0,
        "oracle comparison took {:?}",
        started.elapsed()
    );
}

#[test]
fn bruteforce_handles_the_click_cap() {
    // One dense stream near the oracle's intended 10⁴-click limit.
    let mut rng = rng::seeded(2003);
    let schedule = PumpSchedule::new(Time::from_us(5), Time::from_us(2)).unwrap();
    let record = Time::from_ms(50);
    let mut times: Vec<Time> = (0..10_000)
        .map(|_| Time::from_ns(rng.random_range(0..record.as_ns())))
        .collect();
    times.sort_unstable();
    let stream = ClickStream::new(times, record).unwrap();
    let triggers = find_triggers(&stream, &schedule);
    let chain = build_chain(&stream, &schedule, &triggers, 3);
    let fast = g2_dn(&chain, 0, &mut rng::stream(1, 0)).unwrap();
    let slow = g2_dn_bruteforce(&stream, &schedule, 3, 0, &mut rng::stream(1, 0)).unwrap();
    assert_eq!(fast, slow);
    // Uniform clicks are uncorrelated with their triggers, so the transit
    // peak structure is absent: all offsets carry similar g².
    assert!(fast.at(1) > 0.0);
}

#[test]
fn degenerate_cases_match_bruteforce() {
    let schedule = PumpSchedule::new(Time::from_us(5), Time::from_us(2)).unwrap();
    let record = Time::from_us(200);
    // Empty stream and dark-clicks-only stream: no triggers either way.
    let empty = ClickStream::empty(record);
    let dark = ClickStream::new(
        vec![
            Time::from_ns(3_000),
            Time::from_ns(8_200),
            Time::from_ns(13_500),
        ],
        record,
    )
    .unwrap();
    for stream in [&empty, &dark] {
        let triggers = find_triggers(stream, &schedule);
        let chain = build_chain(stream, &schedule, &triggers, 2);
        assert_eq!(
            g2_dn(&chain, 10, &mut rng::stream(5, 0)),
            Err(ConditionerError::DegenerateChain)
        );
        assert_eq!(
            g2_dn_bruteforce(stream, &schedule, 2, 10, &mut rng::stream(5, 0)),
            Err(ConditionerError::DegenerateChain)
        );
    }
}

#[test]
fn trigger_count_matches_ground_truth_rates() {
    // Triggers = detected signal photons (all in bright spans) + detected
    // background falling in bright spans. Both source counts are ground
    // truth in SimOutput, thinning and the bright fraction are known.
    let config = SimConfig {
        record_length: Time::from_secs(10),
        ..SimConfig::default()
    };
    let out = simulate(&config).unwrap();
    let triggers = find_triggers(&out.clicks, &config.schedule);
    let expected = config.detector_efficiency
        * (out.emitted_photon_count as f64
            + out.background_count as f64 * config.schedule.duty_factor());
    let got = triggers.len() as f64;
    assert!(
        (got - expected).abs() < 0.01 * expected,
        "triggers {got} vs expected {expected}"
    );
}

#[test]
fn transit_peaks_exceed_window_edges() {
    // The same atom often answers the next pulse but rarely one five pulses
    // away: mean neighbor counts at ±1 exceed those at ±5.
    let config = SimConfig {
        record_length: Time::from_secs(10),
        ..SimConfig::default()
    };
    let out = simulate(&config).unwrap();
    let triggers = find_triggers(&out.clicks, &config.schedule);
    let chain = build_chain(&out.clicks, &config.schedule, &triggers, 5);
    let w = chain.window();
    let mut sums = vec![0u64; chain.stride()];
    for seg in chain.segments() {
        for (s, &c) in sums.iter_mut().zip(seg) {
            *s += c as u64;
        }
    }
    let at = |offset: i64| sums[(offset + w as i64) as usize] as f64 / chain.n_segments() as f64;
    assert!(at(1) > 2.0 * at(5), "±1 {} vs ±5 {}", at(1), at(5));
    assert!(at(-1) > 2.0 * at(-5));
}

#[test]
fn isolated_atoms_are_strongly_sub_poissonian() {
    // Background off, unit efficiency, flux low enough that overlapping
    // transits are negligible (flux · mean_transit = 0.008 < 0.01): the
    // conditioned same-interval statistic nearly vanishes, and offsets
    // beyond the transit length form a flat plateau (the no-correlation
    // level) with every plateau value consistent within 3σ.
    let config = SimConfig {
        atom_flux_per_ms: 0.4,
        background_rate_per_s: 0.0,
        detector_efficiency: 1.0,
        record_length: Time::from_secs(60),
        ..SimConfig::default()
    };
    let out = simulate(&config).unwrap();
    let window = 10;
    let triggers = find_triggers(&out.clicks, &config.schedule);
    let chain = build_chain(&out.clicks, &config.schedule, &triggers, window);
    let result = g2_dn(&chain, 500, &mut rng::stream(config.rng_seed, 4)).unwrap();

    assert!(result.at(0) < 0.1, "g2(0) = {}", result.at(0));

    let plateau_offsets = [8i64, 9, 10];
    let plateau: f64 =
        plateau_offsets.iter().map(|&d| result.at(d)).sum::<f64>() / plateau_offsets.len() as f64;
    for &d in &plateau_offsets {
        let dev = (result.at(d) - plateau).abs();
        assert!(
            dev <= 3.0 * result.stderr_at(d),
            "offset {d}: {} vs plateau {plateau} (σ = {})",
            result.at(d),
            result.stderr_at(d)
        );
    }
    // The transit shoulder at ±1 towers above the plateau.
    assert!(result.at(1) > plateau + 10.0 * result.stderr_at(1));
}

#[test]
fn flux_ordering_of_conditioned_g2_zero() {
    // More simultaneous atoms raise the conditioned same-interval statistic.
    let base = SimConfig {
        record_length: Time::from_secs(15),
        ..SimConfig::default()
    };
    let g2_zero = |flux: f64| {
        let config = SimConfig {
            atom_flux_per_ms: flux,
            ..base.clone()
        };
        let out = simulate(&config).unwrap();
        let triggers = find_triggers(&out.clicks, &config.schedule);
        let chain = build_chain(&out.clicks, &config.schedule, &triggers, 5);
        g2_dn(&chain, 0, &mut rng::stream(0, 0)).unwrap().at(0)
    };
    let low = g2_zero(3.0);
    let high = g2_zero(10.0);
    assert!(
        low < high,
        "g2(0) at 3 atoms/ms ({low}) should fall below 10 atoms/ms ({high})"
    );
}

#[test]
fn conditioning_beats_the_unconditioned_zero_bin() {
    // The paper-level contrast at estimator level: on the same stream the
    // unconditioned τ=0 statistic shows bunching (> 1) while the conditioned
    // same-interval statistic is sub-Poissonian (< 1).
    use photonstat_core::correlator::g2_tau;
    let config = SimConfig {
        record_length: Time::from_secs(10),
        ..SimConfig::default()
    };
    let out = simulate(&config).unwrap();
    let h = g2_tau(
        &out.clicks,
        &out.clicks,
        Time::from_ns(500),
        Time::from_us(50),
    )
    .unwrap();
    let unconditioned_zero = h.g2[h.zero_bin()];

    let triggers = find_triggers(&out.clicks, &config.schedule);
    let chain = build_chain(&out.clicks, &config.schedule, &triggers, 5);
    let conditioned = g2_dn(&chain, 200, &mut rng::stream(config.rng_seed, 4)).unwrap();

    assert!(unconditioned_zero > 1.0, "τ=0 bin: {unconditioned_zero}");
    assert!(conditioned.at(0) < 1.0, "g2(ΔN=0): {}", conditioned.at(0));
}
