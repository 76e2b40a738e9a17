//! Click streams and atom transits.

use alloc::vec::Vec;

use thiserror::Error;

use crate::time::Time;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StreamError {
    #[error("timestamp at index {index} is earlier than its predecessor")]
    Unsorted { index: usize },
    #[error("timestamp at index {index} lies outside [0, record_length)")]
    OutOfRange { index: usize },
    #[error("record lengths differ ({left} vs {right})")]
    RecordLengthMismatch { left: Time, right: Time },
}

/// A finite record of photon detection times: nondecreasing timestamps, each
/// in `[0, record_length)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClickStream {
    timestamps: Vec<Time>,
    record_length: Time,
}

impl ClickStream {
    /// Validates ordering and range.
    pub fn new(timestamps: Vec<Time>, record_length: Time) -> Result<Self, StreamError> {
        let mut prev = Time::ZERO;
        for (index, &t) in timestamps.iter().enumerate() {
            if t.is_negative() || t >= record_length {
                return Err(StreamError::OutOfRange { index });
            }
            if t < prev {
                return Err(StreamError::Unsorted { index });
            }
            prev = t;
        }
        Ok(ClickStream {
            timestamps,
            record_length,
        })
    }

    pub fn empty(record_length: Time) -> Self {
        ClickStream {
            timestamps: Vec::new(),
            record_length,
        }
    }

    /// Construction from timestamps already known to be sorted and in range.
    pub(crate) fn from_sorted_unchecked(timestamps: Vec<Time>, record_length: Time) -> Self {
        debug_assert!(timestamps.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(timestamps
            .iter()
            .all(|t| !t.is_negative() && *t < record_length));
        ClickStream {
            timestamps,
            record_length,
        }
    }

    pub fn timestamps(&self) -> &[Time] {
        &self.timestamps
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn record_length(&self) -> Time {
        self.record_length
    }

    /// Sorted merge of two streams over the same record.
    pub fn merge(&self, other: &ClickStream) -> Result<ClickStream, StreamError> {
        if self.record_length != other.record_length {
            return Err(StreamError::RecordLengthMismatch {
                left: self.record_length,
                right: other.record_length,
            });
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.timestamps, &other.timestamps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(ClickStream::from_sorted_unchecked(out, self.record_length))
    }
}

/// One atom's pass through the cavity: present during `[arrival, departure)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitEvent {
    pub arrival: Time,
    pub departure: Time,
}

impl TransitEvent {
    pub fn duration(&self) -> Time {
        self.departure - self.arrival
    }
}
