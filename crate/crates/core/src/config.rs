//! Simulation configuration and validation.

use thiserror::Error;

use crate::schedule::PumpSchedule;
use crate::time::Time;

/// Excitation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Pump switched periodically; at most one photon per atom per bright
    /// interval, all atoms modulated in phase.
    Pulsed,
    /// Always-on drive; each atom emits an inhomogeneous Poisson stream with
    /// sin²-modulated rate whose phase is pinned to its own arrival, so atoms
    /// oscillate out of phase with one another.
    Continuous,
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ConfigError {
    #[error("{key} must be non-negative (got {value})")]
    Negative { key: &'static str, value: f64 },
    #[error("{key} must be a probability in [0, 1] (got {value})")]
    NotAProbability { key: &'static str, value: f64 },
    #[error("{key} must be positive (got {value})")]
    NotPositive { key: &'static str, value: f64 },
    #[error("{key} must be finite")]
    NotFinite { key: &'static str },
}

/// All physical and numerical parameters of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Mean Poisson arrival rate of atoms, per millisecond.
    pub atom_flux_per_ms: f64,
    /// Mean atom-cavity transit duration.
    pub mean_transit: Time,
    /// Standard deviation of the transit duration.
    pub transit_spread: Time,
    pub schedule: PumpSchedule,
    /// Probability of one photon emission per bright interval while an atom
    /// is inside the cavity (scaled by the overlap fraction at the edges of
    /// a transit). Pulsed mode only.
    pub p_emit: f64,
    /// Homogeneous background rate, counts per second.
    pub background_rate_per_s: f64,
    /// Detection probability per photon.
    pub detector_efficiency: f64,
    pub mode: Mode,
    /// Period of the sin² emission-rate modulation (Continuous mode).
    pub rabi_period: Time,
    /// Peak single-atom emission rate, counts per second (Continuous mode).
    pub peak_rate_continuous_per_s: f64,
    pub record_length: Time,
    pub rng_seed: u64,
}

impl Default for SimConfig {
    /// The shipped defaults: a 60 s record at 10 atoms/ms that lands the
    /// conditioned statistics in the sub-Poissonian regime (g²(ΔN=0) ≈ 0.45)
    /// with g²(ΔN≠0) ≈ 1 away from the transit peaks.
    fn default() -> Self {
        SimConfig {
            atom_flux_per_ms: 10.0,
            mean_transit: Time::from_us(20),
            transit_spread: Time::from_us(5),
            schedule: PumpSchedule::new(Time::from_us(5), Time::from_us(2))
                .expect("default schedule is valid"),
            p_emit: 0.5,
            background_rate_per_s: 5_000.0,
            detector_efficiency: 0.5,
            mode: Mode::Pulsed,
            rabi_period: Time::from_us(1),
            // Matches the Pulsed-mode mean click rate: 2 * p_emit / period.
            peak_rate_continuous_per_s: 200_000.0,
            record_length: Time::from_secs(60),
            rng_seed: 42,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn non_negative(key: &'static str, value: f64) -> Result<(), ConfigError> {
            if !value.is_finite() {
                return Err(ConfigError::NotFinite { key });
            }
            if value < 0.0 {
                return Err(ConfigError::Negative { key, value });
            }
            Ok(())
        }
        fn probability(key: &'static str, value: f64) -> Result<(), ConfigError> {
            if !value.is_finite() {
                return Err(ConfigError::NotFinite { key });
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::NotAProbability { key, value });
            }
            Ok(())
        }

        non_negative("atom_flux_per_ms", self.atom_flux_per_ms)?;
        non_negative("background_rate_per_s", self.background_rate_per_s)?;
        non_negative(
            "peak_rate_continuous_per_s",
            self.peak_rate_continuous_per_s,
        )?;
        probability("p_emit", self.p_emit)?;
        probability("detector_efficiency", self.detector_efficiency)?;
        if self.mean_transit.as_ns() <= 0 {
            return Err(ConfigError::NotPositive {
                key: "mean_transit",
                value: self.mean_transit.as_ns() as f64,
            });
        }
        if self.transit_spread.is_negative() {
            return Err(ConfigError::Negative {
                key: "transit_spread",
                value: self.transit_spread.as_ns() as f64,
            });
        }
        if self.record_length.as_ns() <= 0 {
            return Err(ConfigError::NotPositive {
                key: "record_length",
                value: self.record_length.as_ns() as f64,
            });
        }
        if self.mode == Mode::Continuous && self.rabi_period.as_ns() <= 0 {
            return Err(ConfigError::NotPositive {
                key: "rabi_period",
                value: self.rabi_period.as_ns() as f64,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        assert_eq!(SimConfig::default().validate(), Ok(()));
    }

    #[test]
    fn rejects_out_of_range_values_by_key() {
        let c = SimConfig {
            p_emit: 1.5,
            ..SimConfig::default()
        };
        assert_eq!(
            c.validate(),
            Err(ConfigError::NotAProbability {
                key: "p_emit",
                value: 1.5
            })
        );

        let c = SimConfig {
            atom_flux_per_ms: -1.0,
            ..SimConfig::default()
        };
        assert!(matches!(
            c.validate(),
            Err(ConfigError::Negative {
                key: "atom_flux_per_ms",
                ..
            })
        ));

        let c = SimConfig {
            detector_efficiency: f64::NAN,
            ..SimConfig::default()
        };
        assert_eq!(
            c.validate(),
            Err(ConfigError::NotFinite {
                key: "detector_efficiency"
            })
        );

        let mut c = SimConfig {
            mode: Mode::Continuous,
            rabi_period: Time::ZERO,
            ..SimConfig::default()
        };
        assert!(matches!(
            c.validate(),
            Err(ConfigError::NotPositive {
                key: "rabi_period",
                ..
            })
        ));
        // The same zero rabi_period is fine in Pulsed mode.
        c.mode = Mode::Pulsed;
        assert_eq!(c.validate(), Ok(()));
    }
}
