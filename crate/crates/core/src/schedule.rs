//! Periodic pump schedule: bright/dark interval structure.

use thiserror::Error;

use crate::time::Time;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("bright_duration must satisfy 0 < bright_duration <= period (got bright {bright}, period {period})")]
    InvalidBrightDuration { period: Time, bright: Time },
    #[error("period must be positive (got {period})")]
    InvalidPeriod { period: Time },
}

/// The periodic pump structure: interval `k` starts at `k * period` and is
/// bright (pump on) for the first `bright_duration` of the period, dark for
/// the remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PumpSchedule {
    period: Time,
    bright_duration: Time,
}

impl PumpSchedule {
    pub fn new(period: Time, bright_duration: Time) -> Result<Self, ScheduleError> {
        if period.as_ns() <= 0 {
            return Err(ScheduleError::InvalidPeriod { period });
        }
        if bright_duration.as_ns() <= 0 || bright_duration > period {
            return Err(ScheduleError::InvalidBrightDuration {
                period,
                bright: bright_duration,
            });
        }
        Ok(PumpSchedule {
            period,
            bright_duration,
        })
    }

    pub fn period(&self) -> Time {
        self.period
    }

    pub fn bright_duration(&self) -> Time {
        self.bright_duration
    }

    /// Fraction of each period during which the pump is on.
    pub fn duty_factor(&self) -> f64 {
        self.bright_duration.as_ns() as f64 / self.period.as_ns() as f64
    }

    /// Interval index containing `t`, and whether `t` falls in its bright span.
    ///
    /// Total on `t >= 0`; negative `t` yields the mathematically consistent
    /// (floor-division) interval index.
    pub fn interval_index(&self, t: Time) -> (i64, bool) {
        let p = self.period.as_ns();
        let k = t.as_ns().div_euclid(p);
        let bright = t.as_ns().rem_euclid(p) < self.bright_duration.as_ns();
        (k, bright)
    }

    /// Half-open bright span `[start, end)` of interval `k`.
    pub fn bright_span(&self, k: i64) -> (Time, Time) {
        let start = self.period * k;
        (start, start + self.bright_duration)
    }

    pub fn is_bright(&self, t: Time) -> bool {
        self.interval_index(t).1
    }

    /// Index of the last interval whose bright span lies entirely inside
    /// `[0, record_length)`, or `None` if there is none.
    pub fn last_complete_interval(&self, record_length: Time) -> Option<i64> {
        let k = (record_length - self.bright_duration)
            .as_ns()
            .div_euclid(self.period.as_ns());
        (k >= 0).then_some(k)
    }
}
