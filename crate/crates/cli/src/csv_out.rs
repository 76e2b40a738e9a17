//! Plot-ready CSV output for the analysis results.

use photonstat_core::conditioner::ConditionedResult;
use photonstat_core::correlator::CorrelationHistogram;

/// `tau_ns,g2,stderr,raw_pairs` rows with `#` header lines echoing the
/// parameters.
pub fn histogram_csv(h: &CorrelationHistogram, extra_header: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str("# photonstat g2(tau)\n");
    for (key, value) in extra_header {
        out.push_str(&format!("# {key}={value}\n"));
    }
    out.push_str(&format!(
        "# bin_width_ns={} record_length_ns={} clicks_a={} clicks_b={}\n",
        h.bin_width.as_ns(),
        h.record_length.as_ns(),
        h.total_clicks_a,
        h.total_clicks_b
    ));
    out.push_str("tau_ns,g2,stderr,raw_pairs\n");
    for i in 0..h.len() {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            h.center_offsets[i].as_ns(),
            h.g2[i],
            h.stderr[i],
            h.raw_pairs[i]
        ));
    }
    out
}

/// `delta_n,g2,stderr,pair_count` rows with `#` header lines echoing the
/// window, schedule and chain size.
pub fn conditioned_csv(result: &ConditionedResult, extra_header: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str("# photonstat g2(dN)\n");
    for (key, value) in extra_header {
        out.push_str(&format!("# {key}={value}\n"));
    }
    out.push_str(&format!(
        "# segments={} mean_count={:.6}\n",
        result.n_segments, result.mean_count
    ));
    out.push_str("delta_n,g2,stderr,pair_count\n");
    for i in 0..result.delta_n.len() {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            result.delta_n[i], result.g2[i], result.stderr[i], result.pair_counts[i]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use photonstat_core::{ClickStream, Time};

    #[test]
    fn histogram_csv_has_exact_columns() {
        let s =
            ClickStream::new(vec![Time::from_us(1), Time::from_us(4)], Time::from_us(100)).unwrap();
        let h = photonstat_core::correlator::g2_tau(&s, &s, Time::from_us(1), Time::from_us(5))
            .unwrap();
        let csv = histogram_csv(&h, &[("mode", "auto".into())]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# photonstat g2(tau)"));
        assert_eq!(lines.next(), Some("# mode=auto"));
        let columns = csv.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(columns, "tau_ns,g2,stderr,raw_pairs");
        // one data row per bin
        assert_eq!(
            csv.lines().filter(|l| !l.starts_with('#')).count() - 1,
            h.len()
        );
    }
}
