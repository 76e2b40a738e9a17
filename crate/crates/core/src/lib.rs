//! Simulation and correlation analysis of photon click streams from a pulsed,
//! cavity-based single-photon source.
//!
//! The crate models the source as a classical stochastic process: atoms cross
//! the cavity as a homogeneous Poisson stream, the pump laser is switched
//! periodically, and each atom answers at most one photon per bright interval.
//! On top of the generated (or measured) click streams it provides the two
//! standard second-order statistics:
//!
//! - [`correlator::g2_tau`] — the unconditioned intensity correlation g²(τ)
//!   with finite-record normalization, and
//! - the conditioned analysis in [`conditioner`] — interval counts chained
//!   around every trigger photon, yielding g²(ΔN) with bootstrap errors.
//!
//! All time arithmetic is exact integer nanoseconds ([`Time`]), and every
//! random quantity is drawn from a named, seedable generator ([`rng`]), so a
//! run is a pure function of its configuration and seed.
//!
//! ```
//! use photonstat_core::{conditioner, correlator, sim, rng, SimConfig, Time};
//!
//! let config = SimConfig {
//!     record_length: Time::from_secs(2),
//!     ..SimConfig::default()
//! };
//! let output = sim::simulate(&config).unwrap();
//!
//! let h = correlator::g2_tau(
//!     &output.clicks,
//!     &output.clicks,
//!     Time::from_ns(500),
//!     Time::from_us(50),
//! )
//! .unwrap();
//! assert!(h.g2[h.zero_bin()] > 1.0); // atom-number bunching, unconditioned
//!
//! let triggers = conditioner::find_triggers(&output.clicks, &config.schedule);
//! let chain = conditioner::build_chain(&output.clicks, &config.schedule, &triggers, 5);
//! let conditioned =
//!     conditioner::g2_dn(&chain, 200, &mut rng::stream(config.rng_seed, 4)).unwrap();
//! assert!(conditioned.at(0) < 1.0); // sub-Poissonian once conditioned
//! ```
//!
//! The crate is `no_std`-compatible (requires `alloc`); file formats and the
//! command-line front end live in the companion `photonstat-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod conditioner;
pub mod config;
pub mod correlator;
pub mod phase;
pub mod rng;
pub mod schedule;
pub mod sim;
pub mod stats;
pub mod stream;
pub mod time;

pub use config::{ConfigError, Mode, SimConfig};
pub use schedule::PumpSchedule;
pub use stream::{ClickStream, StreamError, TransitEvent};
pub use time::Time;
