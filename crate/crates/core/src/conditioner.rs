//! Conditioned photon statistics g²(ΔN).
//!
//! Every click inside a bright span is a trigger: evidence that an atom was
//! coupled to the cavity at that moment. For each trigger the bright-span
//! photon counts of the `2W+1` surrounding pump intervals form one segment;
//! all segments chained together give the conditioned count sequence from
//! which g²(ΔN) is estimated. Pairs are counted within segments only —
//! correlating counts across segment boundaries would pair photons that have
//! nothing to do with each other beyond the chaining order.
//!
//! For ΔN ≠ 0 the estimator is `⟨n_k·n_{k+ΔN}⟩ / ⟨n⟩²` with the numerator
//! averaged over all in-segment index pairs at that offset and `⟨n⟩` over all
//! segment entries. At ΔN = 0 it is the factorial-moment form
//! `⟨n(n−1)⟩ / ⟨n⟩²` (distinct same-interval pairs), the standard estimator
//! for pulsed sources; the trigger click itself is part of `counts[0]`.
//! Standard errors come from a block bootstrap that resamples whole segments
//! with replacement.

use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::rng::SimRng;
use crate::schedule::PumpSchedule;
use crate::stream::ClickStream;
use crate::time::Time;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ConditionerError {
    #[error("degenerate chain: no segments (or no counts) to normalize by")]
    DegenerateChain,
}

/// A trigger click and the pump interval containing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trigger {
    pub time: Time,
    pub interval: i64,
}

/// All bright-span clicks of a stream, in time order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerSet {
    pub triggers: Vec<Trigger>,
}

impl TriggerSet {
    pub fn len(&self) -> usize {
        self.triggers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triggers.is_empty()
    }
}

/// Chained per-trigger segments of bright-interval counts.
///
/// Segment `s` spans intervals `trigger_interval(s) − W ..= trigger_interval(s) + W`;
/// `counts` is stored flat with stride `2W+1`. Triggers whose window would
/// extend past either record edge are dropped entirely, so all segments have
/// the same shape. Every trigger gets its own segment — two triggers in the
/// same interval produce two identical segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalChain {
    window: usize,
    trigger_intervals: Vec<i64>,
    counts: Vec<u32>,
}

impl IntervalChain {
    /// Window half-width W.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn n_segments(&self) -> usize {
        self.trigger_intervals.len()
    }

    pub fn stride(&self) -> usize {
        2 * self.window + 1
    }

    pub fn trigger_interval(&self, segment: usize) -> i64 {
        self.trigger_intervals[segment]
    }

    /// Counts of one segment, indexed by offset `-W..=W` (slot `W` is the
    /// trigger interval).
    pub fn segment(&self, segment: usize) -> &[u32] {
        let s = self.stride();
        &self.counts[segment * s..(segment + 1) * s]
    }

    pub fn segments(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks_exact(self.stride())
    }
}

/// Conditioned correlation estimate. `delta_n` runs `-W..=W`; mirrored
/// offsets are exactly equal because every in-segment pair is counted at
/// both signs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedResult {
    pub delta_n: Vec<i64>,
    pub g2: Vec<f64>,
    /// Block-bootstrap standard errors (zeros if resampling was disabled).
    pub stderr: Vec<f64>,
    /// Raw photon-pair sums per offset: Σ n(n−1) at ΔN = 0, Σ n_k·n_{k+ΔN}
    /// otherwise.
    pub pair_counts: Vec<u64>,
    pub n_segments: usize,
    /// Mean count over all chain entries.
    pub mean_count: f64,
}

impl ConditionedResult {
    /// g² at a signed offset.
    pub fn at(&self, delta_n: i64) -> f64 {
        let w = (self.delta_n.len() / 2) as i64;
        self.g2[(delta_n + w) as usize]
    }

    pub fn stderr_at(&self, delta_n: i64) -> f64 {
        let w = (self.delta_n.len() / 2) as i64;
        self.stderr[(delta_n + w) as usize]
    }
}

/// Every click that falls inside a bright span, tagged with its interval
/// index. Dark-span clicks are excluded.
pub fn find_triggers(stream: &ClickStream, schedule: &PumpSchedule) -> TriggerSet {
    let triggers = stream
        .timestamps()
        .iter()
        .filter_map(|&t| {
            let (interval, bright) = schedule.interval_index(t);
            bright.then_some(Trigger { time: t, interval })
        })
        .collect();
    TriggerSet { triggers }
}

/// Bright-span click counts per interval, as a sorted sparse list.
fn bright_counts_by_interval(stream: &ClickStream, schedule: &PumpSchedule) -> Vec<(i64, u32)> {
    let mut counts: Vec<(i64, u32)> = Vec::new();
    for &t in stream.timestamps() {
        let (k, bright) = schedule.interval_index(t);
        if !bright {
            continue;
        }
        match counts.last_mut() {
            Some((last, n)) if *last == k => *n += 1,
            _ => counts.push((k, 1)),
        }
    }
    counts
}

fn lookup(counts: &[(i64, u32)], k: i64) -> u32 {
    match counts.binary_search_by_key(&k, |&(interval, _)| interval) {
        Ok(i) => counts[i].1,
        Err(_) => 0,
    }
}

/// Builds one segment per trigger: bright-span counts over the intervals
/// `k₀−W ..= k₀+W`. Triggers too close to either record edge for a full
/// window are dropped.
///
/// Panics if `window == 0`.
pub fn build_chain(
    stream: &ClickStream,
    schedule: &PumpSchedule,
    triggers: &TriggerSet,
    window: usize,
) -> IntervalChain {
    assert!(window >= 1, "window half-width W must be at least 1");
    let w = window as i64;
    let counts_by_interval = bright_counts_by_interval(stream, schedule);
    let last_complete = schedule
        .last_complete_interval(stream.record_length())
        .unwrap_or(-1);

    let stride = 2 * window + 1;
    let mut trigger_intervals = Vec::new();
    let mut counts = Vec::new();
    for trigger in &triggers.triggers {
        let k0 = trigger.interval;
        if k0 - w < 0 || k0 + w > last_complete {
            continue;
        }
        trigger_intervals.push(k0);
        counts.reserve(stride);
        for offset in -w..=w {
            counts.push(lookup(&counts_by_interval, k0 + offset));
        }
        debug_assert!(counts[counts.len() - 1 - window] >= 1);
    }
    IntervalChain {
        window,
        trigger_intervals,
        counts,
    }
}

/// Per-segment sufficient statistics for the estimator: total count, the
/// same-interval pair sum Σ n(n−1), and the offset products Σ n_k·n_{k+d}
/// for d = 1..=W.
fn segment_stats(chain: &IntervalChain) -> Vec<u64> {
    let w = chain.window();
    let cols = w + 2;
    let mut stats = Vec::with_capacity(chain.n_segments() * cols);
    for seg in chain.segments() {
        let total: u64 = seg.iter().map(|&c| c as u64).sum();
        stats.push(total);
        stats.push(
            seg.iter()
                .map(|&c| c as u64 * (c as u64).saturating_sub(1))
                .sum(),
        );
        for d in 1..=w {
            stats.push(
                seg[..seg.len() - d]
                    .iter()
                    .zip(&seg[d..])
                    .map(|(&x, &y)| x as u64 * y as u64)
                    .sum(),
            );
        }
    }
    stats
}

/// g² values from summed statistics.
fn g2_from_totals(totals: &[u64], n_segments: u64, stride: u64) -> (f64, Vec<f64>) {
    let entries = (n_segments * stride) as f64;
    let mean = totals[0] as f64 / entries;
    let mut g2 = Vec::with_capacity(totals.len() - 1);
    // ΔN = 0: factorial moment over all entries.
    g2.push((totals[1] as f64 / entries) / (mean * mean));
    for (d, &p) in totals[2..].iter().enumerate() {
        let pairs = (n_segments * (stride - (d as u64 + 1))) as f64;
        g2.push((p as f64 / pairs) / (mean * mean));
    }
    (mean, g2)
}

/// Block bootstrap over segments: deduplicates segments into multiplicity
/// classes and draws multinomial resample counts per replicate (identical in
/// law to resampling `n_segments` segments with replacement), then reports
/// the standard deviation of the replicate g² values.
fn bootstrap_stderr(
    stats: &[u64],
    cols: usize,
    stride: u64,
    replicates: usize,
    rng: &mut SimRng,
) -> Vec<f64> {
    let n_segments = (stats.len() / cols) as u64;
    if replicates == 0 || n_segments == 0 {
        return alloc::vec![0.0; cols - 1];
    }

    // Multiplicity classes of identical stat rows.
    let mut rows: Vec<&[u64]> = stats.chunks_exact(cols).collect();
    rows.sort_unstable();
    let mut classes: Vec<(&[u64], u64)> = Vec::new();
    for row in rows {
        match classes.last_mut() {
            Some((r, m)) if *r == row => *m += 1,
            _ => classes.push((row, 1)),
        }
    }

    let mut replicate_g2: Vec<Vec<f64>> = alloc::vec![Vec::with_capacity(replicates); cols - 1];
    let mut totals = alloc::vec![0u64; cols];
    for _ in 0..replicates {
        totals.iter_mut().for_each(|t| *t = 0);
        let mut remaining = n_segments;
        let mut mass = n_segments;
        for &(row, multiplicity) in &classes {
            if remaining == 0 {
                break;
            }
            let draw = if multiplicity >= mass {
                remaining
            } else {
                let p = multiplicity as f64 / mass as f64;
                Binomial::new(remaining, p)
                    .expect("valid binomial parameters")
                    .sample(rng)
            };
            for (t, &s) in totals.iter_mut().zip(row) {
                *t += draw * s;
            }
            remaining -= draw;
            mass -= multiplicity;
        }
        // Every segment carries its trigger, so a resample always has counts.
        debug_assert!(totals[0] > 0);
        let (_, g2) = g2_from_totals(&totals, n_segments, stride);
        for (series, value) in replicate_g2.iter_mut().zip(g2) {
            series.push(value);
        }
    }
    replicate_g2
        .iter()
        .map(|series| crate::stats::sample_std(series))
        .collect()
}

fn result_from_totals(
    totals: &[u64],
    n_segments: usize,
    window: usize,
    stderr_by_offset: Vec<f64>,
) -> ConditionedResult {
    let stride = (2 * window + 1) as u64;
    let (mean_count, g2_by_offset) = g2_from_totals(totals, n_segments as u64, stride);
    let w = window as i64;
    let mut delta_n = Vec::new();
    let mut g2 = Vec::new();
    let mut stderr = Vec::new();
    let mut pair_counts = Vec::new();
    for d in -w..=w {
        let a = d.unsigned_abs() as usize;
        delta_n.push(d);
        g2.push(g2_by_offset[a]);
        stderr.push(stderr_by_offset[a]);
        pair_counts.push(totals[if a == 0 { 1 } else { a + 1 }]);
    }
    ConditionedResult {
        delta_n,
        g2,
        stderr,
        pair_counts,
        n_segments,
        mean_count,
    }
}

/// Estimates g²(ΔN) from a chain. `replicates` bootstrap resamples feed the
/// standard errors (pass 0 to skip resampling when only point estimates are
/// needed).
pub fn g2_dn(
    chain: &IntervalChain,
    replicates: usize,
    rng: &mut SimRng,
) -> Result<ConditionedResult, ConditionerError> {
    if chain.n_segments() == 0 {
        return Err(ConditionerError::DegenerateChain);
    }
    let cols = chain.window() + 2;
    let stats = segment_stats(chain);
    let mut totals = alloc::vec![0u64; cols];
    for row in stats.chunks_exact(cols) {
        for (t, &s) in totals.iter_mut().zip(row) {
            *t += s;
        }
    }
    if totals[0] == 0 {
        return Err(ConditionerError::DegenerateChain);
    }
    let stderr = bootstrap_stderr(&stats, cols, chain.stride() as u64, replicates, rng);
    Ok(result_from_totals(
        &totals,
        chain.n_segments(),
        chain.window(),
        stderr,
    ))
}

/// Oracle for the conditioned pipeline: recomputes triggers, window counts
/// and every moment by direct exhaustive scans over all clicks and
/// intervals, without the sorted-lookup machinery. Intended for streams of
/// ≤ 10⁴ clicks.
pub fn g2_dn_bruteforce(
    stream: &ClickStream,
    schedule: &PumpSchedule,
    window: usize,
    replicates: usize,
    rng: &mut SimRng,
) -> Result<ConditionedResult, ConditionerError> {
    assert!(window >= 1, "window half-width W must be at least 1");
    let period = schedule.period().as_ns();
    let bright = schedule.bright_duration().as_ns();
    let in_bright_span = |t: Time, k: i64| {
        let offset = t.as_ns() - k * period;
        (0..bright).contains(&offset)
    };

    let w = window as i64;
    let record = stream.record_length().as_ns();
    let mut n_segments = 0u64;
    let cols = window + 2;
    let mut stats: Vec<u64> = Vec::new();
    let mut totals = alloc::vec![0u64; cols];
    for &t in stream.timestamps() {
        let k0 = t.as_ns().div_euclid(period);
        if !in_bright_span(t, k0) {
            continue; // dark click, not a trigger
        }
        // Window must fit inside the record on both sides.
        if k0 - w < 0 || (k0 + w) * period + bright > record {
            continue;
        }
        n_segments += 1;
        // Clicks of each window span, found by scanning the whole stream.
        let span_clicks: Vec<Vec<Time>> = (-w..=w)
            .map(|offset| {
                stream
                    .timestamps()
                    .iter()
                    .copied()
                    .filter(|&tc| in_bright_span(tc, k0 + offset))
                    .collect()
            })
            .collect();
        let mut row = alloc::vec![0u64; cols];
        row[0] = span_clicks.iter().map(|c| c.len() as u64).sum();
        // Same-interval distinct ordered pairs, enumerated click by click.
        let mut same = 0u64;
        for clicks in &span_clicks {
            for i in 0..clicks.len() {
                for j in 0..clicks.len() {
                    if i != j {
                        same += 1;
                    }
                }
            }
        }
        row[1] = same;
        for d in 1..=window {
            let mut pairs = 0u64;
            for (lower, upper) in span_clicks.iter().zip(&span_clicks[d..]) {
                // Ordered pairs (click in the lower interval, click d later).
                for _ in lower {
                    for _ in upper {
                        pairs += 1;
                    }
                }
            }
            row[d + 1] = pairs;
        }
        for (t, &s) in totals.iter_mut().zip(&row) {
            *t += s;
        }
        stats.extend_from_slice(&row);
    }

    if n_segments == 0 || totals[0] == 0 {
        return Err(ConditionerError::DegenerateChain);
    }
    let stride = (2 * window + 1) as u64;
    let stderr = bootstrap_stderr(&stats, cols, stride, replicates, rng);
    Ok(result_from_totals(
        &totals,
        n_segments as usize,
        window,
        stderr,
    ))
}
