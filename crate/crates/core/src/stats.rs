//! Small statistics helpers used by the analyses and the validation suite.

use alloc::vec::Vec;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased (n−1) sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    libm::sqrt(sample_variance(xs))
}

/// Pearson χ² statistic Σ (observed − expected)² / expected.
pub fn chi2_statistic(observed: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

/// 99th-percentile quantile of the χ² distribution with `dof` degrees of
/// freedom (Wilson–Hilferty approximation, adequate for dof ≳ 10).
pub fn chi2_critical_p99(dof: usize) -> f64 {
    const Z_99: f64 = 2.326_347_874_040_841; // Φ⁻¹(0.99)
    let k = dof as f64;
    let h = 2.0 / (9.0 * k);
    let t = 1.0 - h + Z_99 * libm::sqrt(h);
    k * t * t * t
}

/// Kolmogorov–Smirnov statistic of `samples` against the exponential
/// distribution with the given rate. `samples` need not be sorted.
pub fn ks_statistic_exponential(samples: &[f64], rate: f64) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN samples"));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let cdf = 1.0 - libm::exp(-rate * x);
        d = d.max(cdf - i as f64 / n).max((i + 1) as f64 / n - cdf);
    }
    d
}

/// Asymptotic Kolmogorov–Smirnov critical value at the 1% level:
/// reject if D > `ks_critical_p99(n)`.
pub fn ks_critical_p99(n: usize) -> f64 {
    // sqrt(-ln(alpha/2) / 2) with alpha = 0.01
    1.627_624 / libm::sqrt(n as f64)
}
