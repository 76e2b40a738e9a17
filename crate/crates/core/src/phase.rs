//! Optical phase jitter from atomic motion along the cavity axis.
//!
//! An atom moving with axial velocity `v` during a pulse of duration `T`
//! is displaced by `v·T`, which shifts the optical phase of the emitted
//! pulse by `Δφ = 2π·v·T/λ`. With the motion bounded to a few mm/s and
//! μs-scale pulses the displacement is a few nm — a small fraction of the
//! optical wavelength.

use alloc::vec::Vec;

use rand::Rng;

use crate::rng::SimRng;
use crate::time::Time;

/// Default optical wavelength, in nm. Not a measured input: it is the
/// near-infrared value consistent with the rubidium lines of cavity
/// single-photon sources, and can be overridden everywhere it is used.
pub const DEFAULT_WAVELENGTH_NM: f64 = 795.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    /// Velocity along the cavity axis, mm/s (sign irrelevant for the jitter
    /// magnitude).
    pub axial_velocity_mm_s: f64,
    pub pulse_duration: Time,
    pub wavelength_nm: f64,
}

/// Phase accumulated by axial displacement over one pulse:
/// `2π·|v|·T / λ`, in radians.
pub fn phase_jitter(params: &PhaseParams) -> f64 {
    // mm/s · ns = 1e-3 nm; divide rather than multiply by 1e-3 so that e.g.
    // 5 mm/s over 2 μs gives exactly 10 nm.
    let displacement_nm =
        libm::fabs(params.axial_velocity_mm_s) * params.pulse_duration.as_ns() as f64 / 1e3;
    core::f64::consts::TAU * displacement_nm / params.wavelength_nm
}

/// Distribution of |Δφ| over pulses, for velocities uniform in
/// `[-velocity_bound, +velocity_bound]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JitterStats {
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Δφ at the velocity bound; no sample exceeds it.
    pub analytic_bound: f64,
    /// Histogram of |Δφ| over `[0, analytic_bound]`.
    pub histogram: Vec<u64>,
    pub n_samples: usize,
}

pub const JITTER_HISTOGRAM_BINS: usize = 50;

pub fn jitter_distribution(
    velocity_bound_mm_s: f64,
    pulse_duration: Time,
    wavelength_nm: f64,
    n_samples: usize,
    rng: &mut SimRng,
) -> JitterStats {
    assert!(n_samples >= 1);
    let bound = libm::fabs(velocity_bound_mm_s);
    let analytic_bound = phase_jitter(&PhaseParams {
        axial_velocity_mm_s: bound,
        pulse_duration,
        wavelength_nm,
    });
    let mut histogram = alloc::vec![0u64; JITTER_HISTOGRAM_BINS];
    let mut max_abs: f64 = 0.0;
    let mut sum = 0.0;
    for _ in 0..n_samples {
        let v = if bound == 0.0 {
            0.0
        } else {
            rng.random_range(-bound..=bound)
        };
        let jitter = phase_jitter(&PhaseParams {
            axial_velocity_mm_s: v,
            pulse_duration,
            wavelength_nm,
        });
        max_abs = max_abs.max(jitter);
        sum += jitter;
        let slot = if analytic_bound == 0.0 {
            0
        } else {
            ((jitter / analytic_bound * JITTER_HISTOGRAM_BINS as f64) as usize)
                .min(JITTER_HISTOGRAM_BINS - 1)
        };
        histogram[slot] += 1;
    }
    JitterStats {
        max_abs,
        mean_abs: sum / n_samples as f64,
        analytic_bound,
        histogram,
        n_samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn params(v: f64, pulse_us: i64, lambda: f64) -> PhaseParams {
        PhaseParams {
            axial_velocity_mm_s: v,
            pulse_duration: Time::from_us(pulse_us),
            wavelength_nm: lambda,
        }
    }

    #[test]
    fn zero_velocity_means_zero_jitter() {
        assert_eq!(phase_jitter(&params(0.0, 2, 795.0)), 0.0);
    }

    #[test]
    fn jitter_is_linear_in_velocity() {
        let base = phase_jitter(&params(5.0, 2, 795.0));
        let double = phase_jitter(&params(10.0, 2, 795.0));
        assert_eq!(double, 2.0 * base);
        assert_eq!(phase_jitter(&params(-5.0, 2, 795.0)), base);
    }

    #[test]
    fn reference_point_is_near_pi_over_40() {
        // 5 mm/s over 2 μs displaces 10 nm; at 795 nm that is
        // 2π·10/795 ≈ 0.0790 rad ≈ π/39.8.
        let jitter = phase_jitter(&params(5.0, 2, 795.0));
        assert!((jitter - 0.079).abs() < 1e-3);
        assert!((PI / jitter - 39.8).abs() < 0.1);
        assert!(jitter > PI / 45.0 && jitter < PI / 38.0);
    }

    #[test]
    fn at_800nm_and_above_the_bound_is_pi_over_40() {
        let at_800 = phase_jitter(&params(5.0, 2, 800.0));
        assert!(at_800 <= PI / 40.0, "{} > {}", at_800, PI / 40.0);
        for lambda in [800.5, 820.0, 852.0, 1064.0] {
            assert!(phase_jitter(&params(5.0, 2, lambda)) < PI / 40.0);
        }
    }

    #[test]
    fn linearity_in_all_parameters() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(17);
        for _ in 0..300 {
            let v = rng.random_range(0.1..50.0);
            let t_ns = rng.random_range(10..1_000_000i64);
            let lambda = rng.random_range(200.0..2_000.0);
            let base = phase_jitter(&PhaseParams {
                axial_velocity_mm_s: v,
                pulse_duration: Time::from_ns(t_ns),
                wavelength_nm: lambda,
            });
            let scaled_v = phase_jitter(&PhaseParams {
                axial_velocity_mm_s: 3.0 * v,
                pulse_duration: Time::from_ns(t_ns),
                wavelength_nm: lambda,
            });
            let scaled_t = phase_jitter(&PhaseParams {
                axial_velocity_mm_s: v,
                pulse_duration: Time::from_ns(4 * t_ns),
                wavelength_nm: lambda,
            });
            let scaled_lambda = phase_jitter(&PhaseParams {
                axial_velocity_mm_s: v,
                pulse_duration: Time::from_ns(t_ns),
                wavelength_nm: lambda / 2.0,
            });
            assert!((scaled_v - 3.0 * base).abs() <= 4.0 * f64::EPSILON * scaled_v.abs());
            assert!((scaled_t - 4.0 * base).abs() <= 4.0 * f64::EPSILON * scaled_t.abs());
            assert!((scaled_lambda - 2.0 * base).abs() <= 4.0 * f64::EPSILON * scaled_lambda.abs());
        }
    }

    #[test]
    fn distribution_zero_bound_is_all_zero() {
        let stats = jitter_distribution(
            0.0,
            Time::from_us(2),
            795.0,
            100,
            &mut crate::rng::seeded(1),
        );
        assert_eq!(stats.max_abs, 0.0);
        assert_eq!(stats.mean_abs, 0.0);
        assert_eq!(stats.analytic_bound, 0.0);
    }

    #[test]
    fn samples_respect_the_analytic_bound() {
        let stats = jitter_distribution(
            5.0,
            Time::from_us(2),
            795.0,
            20_000,
            &mut crate::rng::seeded(2),
        );
        assert!(stats.max_abs <= stats.analytic_bound);
        assert_eq!(stats.histogram.iter().sum::<u64>(), 20_000);
    }

    #[test]
    fn mean_of_uniform_magnitudes_is_half_the_bound() {
        let stats = jitter_distribution(
            5.0,
            Time::from_us(2),
            795.0,
            100_000,
            &mut crate::rng::seeded(3),
        );
        let expected = stats.analytic_bound / 2.0;
        assert!(
            (stats.mean_abs - expected).abs() < 0.02 * expected,
            "mean {} vs {}",
            stats.mean_abs,
            expected
        );
    }
}
