//! Monte Carlo generation of click streams.
//!
//! The source model is classical and stochastic: atoms arrive as a
//! homogeneous Poisson process and stay for a truncated-normal transit
//! duration. In [`Mode::Pulsed`] each atom emits at most one photon per
//! bright interval (probability `p_emit`, scaled by the overlap fraction for
//! partial transits), with the photon time uniform over the overlapped part
//! of the span. In [`Mode::Continuous`] each atom emits an inhomogeneous
//! Poisson stream with a sin²-modulated rate whose phase is pinned to the
//! atom's own arrival time. Background counts and detector thinning are
//! applied on top.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::config::{ConfigError, Mode, SimConfig};
use crate::rng::{self, streams, SimRng};
use crate::schedule::PumpSchedule;
use crate::stream::{ClickStream, TransitEvent};
use crate::time::Time;

/// Transit durations are truncated below at 1 μs.
pub const MIN_TRANSIT: Time = Time::from_us(1);

/// Result of one simulation run. `transits` is ground truth kept for
/// diagnostics; `emitted_photon_count` and `background_count` are the event
/// counts before detector thinning.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub clicks: ClickStream,
    pub transits: Vec<TransitEvent>,
    pub emitted_photon_count: u64,
    pub background_count: u64,
}

/// Homogeneous Poisson event times on `[0, record_length)`, in nanoseconds.
fn poisson_times(rate_per_ns: f64, record_length: Time, rng: &mut SimRng) -> Vec<Time> {
    let mut out = Vec::new();
    if rate_per_ns <= 0.0 {
        return out;
    }
    let exp = Exp::new(rate_per_ns).expect("positive rate");
    let end = record_length.as_ns() as f64;
    let mut t = exp.sample(rng);
    while t < end {
        out.push(Time::from_ns(t as i64));
        t += exp.sample(rng);
    }
    out
}

fn sample_transit_duration(mean: Time, spread: Time, rng: &mut SimRng) -> Time {
    if spread.as_ns() == 0 {
        return mean.max(MIN_TRANSIT);
    }
    let normal =
        Normal::new(mean.as_ns() as f64, spread.as_ns() as f64).expect("finite transit parameters");
    // Truncation by rejection; the cap only matters for degenerate configs
    // where essentially all mass sits below the minimum.
    for _ in 0..1000 {
        let d = normal.sample(rng);
        if d >= MIN_TRANSIT.as_ns() as f64 {
            return Time::from_ns(libm::round(d) as i64);
        }
    }
    MIN_TRANSIT
}

/// Atom transits over the record: Poisson arrivals at `flux_per_ms`, each
/// with a truncated-normal duration. Transits may overlap; departures are
/// clipped to the record end.
pub fn sample_atom_arrivals(
    flux_per_ms: f64,
    record_length: Time,
    mean_transit: Time,
    transit_spread: Time,
    rng: &mut SimRng,
) -> Vec<TransitEvent> {
    let rate_per_ns = flux_per_ms / 1e6;
    poisson_times(rate_per_ns, record_length, rng)
        .into_iter()
        .map(|arrival| {
            let duration = sample_transit_duration(mean_transit, transit_spread, rng);
            TransitEvent {
                arrival,
                departure: (arrival + duration).min(record_length),
            }
        })
        .collect()
}

/// Photon emission times of one atom under pulsed excitation.
///
/// For each pump interval whose bright span overlaps the transit, at most one
/// photon is emitted with probability `p_emit · overlap/bright`, uniformly
/// placed inside the overlapped part of the span. Dark spans never emit.
pub fn sample_emissions_pulsed(
    transit: &TransitEvent,
    schedule: &PumpSchedule,
    p_emit: f64,
    rng: &mut SimRng,
) -> Vec<Time> {
    let mut out = Vec::new();
    let (a, d) = (transit.arrival.as_ns(), transit.departure.as_ns());
    debug_assert!(a < d);
    let period = schedule.period().as_ns();
    let bright = schedule.bright_duration().as_ns();
    let k_first = a.div_euclid(period);
    let k_last = (d - 1).div_euclid(period);
    for k in k_first..=k_last {
        let span_lo = k * period;
        let span_hi = span_lo + bright;
        let lo = a.max(span_lo);
        let hi = d.min(span_hi);
        if hi <= lo {
            continue;
        }
        let overlap_fraction = (hi - lo) as f64 / bright as f64;
        if rng.random::<f64>() < p_emit * overlap_fraction {
            out.push(Time::from_ns(rng.random_range(lo..hi)));
        }
    }
    out
}

/// sin²-modulated emission rate at offset `since_arrival` into a transit,
/// as a fraction of the peak rate.
pub fn sin2_modulation(since_arrival_ns: f64, rabi_period: Time) -> f64 {
    let phase = (since_arrival_ns % rabi_period.as_ns() as f64) / rabi_period.as_ns() as f64;
    let s = libm::sin(core::f64::consts::PI * phase);
    s * s
}

/// Photon emission times of one atom under continuous excitation: an
/// inhomogeneous Poisson process on the transit with rate
/// `peak_rate · sin²(π (t − arrival) / rabi_period)`, realized by thinning a
/// homogeneous process at the peak rate.
pub fn sample_emissions_continuous(
    transit: &TransitEvent,
    rabi_period: Time,
    peak_rate_per_s: f64,
    rng: &mut SimRng,
) -> Vec<Time> {
    let mut out = Vec::new();
    let rate_per_ns = peak_rate_per_s / 1e9;
    if rate_per_ns <= 0.0 {
        return out;
    }
    assert!(rabi_period.as_ns() > 0, "rabi_period must be positive");
    let exp = Exp::new(rate_per_ns).expect("positive rate");
    let start = transit.arrival.as_ns() as f64;
    let end = transit.departure.as_ns() as f64;
    let mut t = start + exp.sample(rng);
    while t < end {
        if rng.random::<f64>() < sin2_modulation(t - start, rabi_period) {
            out.push(Time::from_ns(t as i64));
        }
        t += exp.sample(rng);
    }
    out
}

/// Merges a homogeneous Poisson background of the given rate into the stream.
pub fn add_background(stream: &ClickStream, rate_per_s: f64, rng: &mut SimRng) -> ClickStream {
    if rate_per_s <= 0.0 {
        return stream.clone();
    }
    let bg = ClickStream::from_sorted_unchecked(
        poisson_times(rate_per_s / 1e9, stream.record_length(), rng),
        stream.record_length(),
    );
    stream.merge(&bg).expect("same record length")
}

/// Keeps each click independently with probability `efficiency`.
pub fn thin_by_efficiency(stream: &ClickStream, efficiency: f64, rng: &mut SimRng) -> ClickStream {
    let kept = stream
        .timestamps()
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < efficiency)
        .collect();
    ClickStream::from_sorted_unchecked(kept, stream.record_length())
}

/// Routes each click to one of two outputs with probability ½ each, as a
/// 50/50 beam splitter in front of a detector pair would.
pub fn beamsplit(stream: &ClickStream, rng: &mut SimRng) -> (ClickStream, ClickStream) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &t in stream.timestamps() {
        if rng.random_bool(0.5) {
            a.push(t);
        } else {
            b.push(t);
        }
    }
    let record = stream.record_length();
    (
        ClickStream::from_sorted_unchecked(a, record),
        ClickStream::from_sorted_unchecked(b, record),
    )
}

/// Runs the full pipeline: arrivals → per-atom emissions → merge →
/// background → detector thinning. A pure function of `config` (including
/// `rng_seed`); per-atom RNG streams are derived from `(seed, atom index)`.
pub fn simulate(config: &SimConfig) -> Result<SimOutput, ConfigError> {
    config.validate()?;
    let seed = config.rng_seed;
    let record = config.record_length;

    let transits = sample_atom_arrivals(
        config.atom_flux_per_ms,
        record,
        config.mean_transit,
        config.transit_spread,
        &mut rng::stream(seed, streams::ARRIVALS),
    );

    let mut emissions: Vec<Time> = Vec::new();
    for (index, transit) in transits.iter().enumerate() {
        let mut atom_rng = rng::stream(seed, streams::atom(index as u64));
        match config.mode {
            Mode::Pulsed => emissions.extend(sample_emissions_pulsed(
                transit,
                &config.schedule,
                config.p_emit,
                &mut atom_rng,
            )),
            Mode::Continuous => emissions.extend(sample_emissions_continuous(
                transit,
                config.rabi_period,
                config.peak_rate_continuous_per_s,
                &mut atom_rng,
            )),
        }
    }
    emissions.sort_unstable();
    let emitted_photon_count = emissions.len() as u64;
    let photons = ClickStream::from_sorted_unchecked(emissions, record);

    let with_background = add_background(
        &photons,
        config.background_rate_per_s,
        &mut rng::stream(seed, streams::BACKGROUND),
    );
    let background_count = (with_background.len() - photons.len()) as u64;

    let clicks = thin_by_efficiency(
        &with_background,
        config.detector_efficiency,
        &mut rng::stream(seed, streams::THINNING),
    );

    Ok(SimOutput {
        clicks,
        transits,
        emitted_photon_count,
        background_count,
    })
}
