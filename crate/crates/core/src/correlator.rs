//! Unconditioned second-order intensity correlation g²(τ).
//!
//! [`g2_tau`] counts ordered click pairs into lag bins with a sliding window
//! over the sorted streams, then normalizes each bin by the uncorrelated
//! Poisson expectation with the triangular finite-record correction, so a
//! homogeneous Poisson input gives g² ≡ 1. [`g2_tau_bruteforce`] is the same
//! contract computed by an unoptimized double loop over all pairs; it exists
//! as the testing oracle for the fast path.
//!
//! Bins are centered on integer multiples of `bin_width`. For positive lags
//! bin `i` covers `((i−½)w, (i+½)w]`; negative lags use the mirrored
//! intervals so that the auto-correlation histogram is exactly symmetric.
//! Only bins that fit entirely inside `±max_tau` are kept.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::schedule::PumpSchedule;
use crate::stream::ClickStream;
use crate::time::Time;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CorrelatorError {
    #[error("need at least 2 clicks in each stream to estimate a correlation")]
    EmptyStream,
    #[error("streams cover different record lengths")]
    MismatchedRecordLength,
    #[error("invalid binning: {0}")]
    InvalidBinning(&'static str),
    #[error("histogram covers fewer than {required} pump periods")]
    InsufficientRange { required: usize },
}

/// Binned, normalized g²(τ) estimate with per-bin Poisson counting errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationHistogram {
    pub bin_width: Time,
    /// Signed bin centers τ, ascending.
    pub center_offsets: Vec<Time>,
    pub g2: Vec<f64>,
    pub raw_pairs: Vec<u64>,
    pub stderr: Vec<f64>,
    pub record_length: Time,
    pub total_clicks_a: u64,
    pub total_clicks_b: u64,
}

impl CorrelationHistogram {
    pub fn len(&self) -> usize {
        self.center_offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center_offsets.is_empty()
    }

    /// Index of the bin centered at τ = 0.
    pub fn zero_bin(&self) -> usize {
        self.len() / 2
    }
}

/// Number of bins kept on each side of zero: the largest `K` such that bin
/// `K` (upper edge `K·w + w/2`) still fits inside `max_tau`.
fn side_bins(bin_width: i64, max_tau: i64) -> i64 {
    (2 * max_tau - bin_width).div_euclid(2 * bin_width)
}

/// Largest |τ| that falls into a kept bin.
fn window_reach(bin_width: i64, side_bins: i64) -> i64 {
    (bin_width * (2 * side_bins + 1)).div_euclid(2)
}

/// Signed bin index of lag `tau`: the bin of |τ| is the smallest `i` with
/// `|τ| ≤ i·w + w/2`.
fn bin_index(tau: i64, bin_width: i64) -> i64 {
    let d = tau.abs();
    let i = (2 * d + bin_width - 1).div_euclid(2 * bin_width);
    if tau < 0 {
        -i
    } else {
        i
    }
}

struct BinLayout {
    bin_width: i64,
    side_bins: i64,
    reach: i64,
}

fn validate(
    a: &ClickStream,
    b: &ClickStream,
    bin_width: Time,
    max_tau: Time,
) -> Result<BinLayout, CorrelatorError> {
    if a.record_length() != b.record_length() {
        return Err(CorrelatorError::MismatchedRecordLength);
    }
    if bin_width.as_ns() <= 0 {
        return Err(CorrelatorError::InvalidBinning(
            "bin_width must be positive",
        ));
    }
    if max_tau < bin_width {
        return Err(CorrelatorError::InvalidBinning(
            "max_tau must be at least one bin_width",
        ));
    }
    if max_tau >= a.record_length() {
        return Err(CorrelatorError::InvalidBinning(
            "max_tau must be smaller than the record length",
        ));
    }
    if a.len() < 2 || b.len() < 2 {
        return Err(CorrelatorError::EmptyStream);
    }
    let w = bin_width.as_ns();
    let k = side_bins(w, max_tau.as_ns());
    Ok(BinLayout {
        bin_width: w,
        side_bins: k,
        reach: window_reach(w, k),
    })
}

/// Normalization shared by both estimators: per-bin expected pair count for
/// uncorrelated streams of the same rates, `N_a·N_b·w·(T−|τ_c|)/T²`, with
/// `g2 = raw/expected` and `stderr = √raw/expected`.
fn normalize(
    raw: Vec<u64>,
    layout: &BinLayout,
    a: &ClickStream,
    b: &ClickStream,
) -> CorrelationHistogram {
    let t_ns = a.record_length().as_ns() as f64;
    let n_pairs = a.len() as f64 * b.len() as f64;
    let w = layout.bin_width as f64;
    let k = layout.side_bins;
    let mut centers = Vec::with_capacity(raw.len());
    let mut g2 = Vec::with_capacity(raw.len());
    let mut stderr = Vec::with_capacity(raw.len());
    for (slot, &count) in raw.iter().enumerate() {
        let center = (slot as i64 - k) * layout.bin_width;
        let expected = n_pairs * w * (t_ns - center.abs() as f64) / (t_ns * t_ns);
        centers.push(Time::from_ns(center));
        g2.push(count as f64 / expected);
        stderr.push(libm::sqrt(count as f64) / expected);
    }
    CorrelationHistogram {
        bin_width: Time::from_ns(layout.bin_width),
        center_offsets: centers,
        g2,
        raw_pairs: raw,
        stderr,
        record_length: a.record_length(),
        total_clicks_a: a.len() as u64,
        total_clicks_b: b.len() as u64,
    }
}

/// g²(τ) between two streams (pass the same stream twice for the
/// auto-correlation). Every ordered pair with `0 < |t_b − t_a|` inside the
/// kept bins is counted once; self-pairs and exactly coincident pairs are
/// excluded.
pub fn g2_tau(
    a: &ClickStream,
    b: &ClickStream,
    bin_width: Time,
    max_tau: Time,
) -> Result<CorrelationHistogram, CorrelatorError> {
    let layout = validate(a, b, bin_width, max_tau)?;
    let n_bins = (2 * layout.side_bins + 1) as usize;
    let mut raw = vec![0u64; n_bins];

    let ta = a.timestamps();
    let tb = b.timestamps();
    let mut lo = 0usize;
    let mut hi = 0usize;
    for &t in ta {
        let t = t.as_ns();
        while lo < tb.len() && tb[lo].as_ns() < t - layout.reach {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < tb.len() && tb[hi].as_ns() <= t + layout.reach {
            hi += 1;
        }
        for &other in &tb[lo..hi] {
            let tau = other.as_ns() - t;
            if tau != 0 {
                let slot = (bin_index(tau, layout.bin_width) + layout.side_bins) as usize;
                raw[slot] += 1;
            }
        }
    }
    Ok(normalize(raw, &layout, a, b))
}

/// Same contract as [`g2_tau`], computed by an unoptimized O(N_a·N_b) scan
/// over every pair. Intended for streams of ≤ 10⁴ clicks; serves as the
/// oracle for the sliding-window implementation.
pub fn g2_tau_bruteforce(
    a: &ClickStream,
    b: &ClickStream,
    bin_width: Time,
    max_tau: Time,
) -> Result<CorrelationHistogram, CorrelatorError> {
    let layout = validate(a, b, bin_width, max_tau)?;
    let n_bins = (2 * layout.side_bins + 1) as usize;
    let mut raw = vec![0u64; n_bins];
    let w = layout.bin_width;
    for &t in a.timestamps() {
        for &other in b.timestamps() {
            let tau = other.as_ns() - t.as_ns();
            if tau == 0 {
                continue;
            }
            let d = tau.abs();
            if d > layout.reach {
                continue;
            }
            // Bin of |τ| from the division remainder: d = q·w + r falls in
            // bin q when r ≤ w/2, in bin q+1 otherwise.
            let (q, r) = (d / w, d % w);
            let i = if 2 * r <= w { q } else { q + 1 };
            debug_assert!(i <= layout.side_bins);
            let slot = (if tau < 0 { -i } else { i } + layout.side_bins) as usize;
            raw[slot] += 1;
        }
    }
    Ok(normalize(raw, &layout, a, b))
}

/// Per-period statistics of a pulsed-excitation histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodWindow {
    /// Period index: τ ∈ [index·period, (index+1)·period).
    pub index: i64,
    /// Largest g² among bright-lag bins, and its bin center.
    pub peak_g2: f64,
    pub peak_tau: Time,
    /// Smallest g² among dark-lag bins, its bin center and counting error.
    pub min_g2: f64,
    pub min_tau: Time,
    pub min_stderr: f64,
    /// Whether the dark minimum is below 1 with ≥ 2σ significance.
    pub min_below_one_2sigma: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationSummary {
    pub windows: Vec<PeriodWindow>,
    /// Fraction of period windows whose dark minimum is significantly
    /// (≥ 2σ) below 1.
    pub fraction_minima_below_one: f64,
    pub g2_at_zero: f64,
    /// Mean spacing between bright peaks of adjacent periods; equals the
    /// pump period for an oscillation locked to the pulsing.
    pub mean_peak_spacing: Option<Time>,
}

/// Splits the histogram into pump-period-aligned windows and reports, per
/// window, the bright-lag peak and the dark-lag minimum with its
/// significance. Requires at least 4 fully covered windows that contain both
/// bright and dark bins.
pub fn oscillation_summary(
    h: &CorrelationHistogram,
    schedule: &PumpSchedule,
) -> Result<OscillationSummary, CorrelatorError> {
    const REQUIRED_WINDOWS: usize = 4;
    let w = h.bin_width.as_ns();
    let period = schedule.period().as_ns();
    let bright = schedule.bright_duration().as_ns();
    let side = (h.len() as i64 - 1) / 2;

    let mut windows = Vec::new();
    // Lowest/highest period index whose τ span could be fully covered.
    let m_lo = (-side * w).div_euclid(period);
    let m_hi = (side * w).div_euclid(period);
    for m in m_lo..=m_hi {
        // Bin centers c = i·w with c in [m·period, (m+1)·period).
        let i_first = (m * period + w - 1).div_euclid(w);
        let i_last = ((m + 1) * period - 1).div_euclid(w);
        if i_first < -side || i_last > side || i_first > i_last {
            continue;
        }
        let mut peak: Option<(f64, i64)> = None;
        let mut min: Option<(f64, i64, f64)> = None;
        for i in i_first..=i_last {
            let slot = (i + side) as usize;
            let center = i * w;
            let is_bright = center.rem_euclid(period) < bright;
            let g2 = h.g2[slot];
            if is_bright {
                if peak.is_none_or(|(best, _)| g2 > best) {
                    peak = Some((g2, center));
                }
            } else if min.is_none_or(|(best, _, _)| g2 < best) {
                min = Some((g2, center, h.stderr[slot]));
            }
        }
        if let (Some((peak_g2, peak_tau)), Some((min_g2, min_tau, min_stderr))) = (peak, min) {
            windows.push(PeriodWindow {
                index: m,
                peak_g2,
                peak_tau: Time::from_ns(peak_tau),
                min_g2,
                min_tau: Time::from_ns(min_tau),
                min_stderr,
                min_below_one_2sigma: min_g2 < 1.0 && (1.0 - min_g2) >= 2.0 * min_stderr,
            });
        }
    }

    if windows.len() < REQUIRED_WINDOWS {
        return Err(CorrelatorError::InsufficientRange {
            required: REQUIRED_WINDOWS,
        });
    }

    let significant = windows.iter().filter(|w| w.min_below_one_2sigma).count();
    let fraction = significant as f64 / windows.len() as f64;

    let spacings: Vec<f64> = windows
        .windows(2)
        .filter(|pair| pair[1].index == pair[0].index + 1)
        .map(|pair| (pair[1].peak_tau - pair[0].peak_tau).as_ns() as f64)
        .collect();
    let mean_peak_spacing = (!spacings.is_empty())
        .then(|| Time::from_ns(libm::round(crate::stats::mean(&spacings)) as i64));

    let g2_at_zero = h.g2[h.zero_bin()];

    Ok(OscillationSummary {
        windows,
        fraction_minima_below_one: fraction,
        g2_at_zero,
        mean_peak_spacing,
    })
}
