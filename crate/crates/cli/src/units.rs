//! Parsing of duration values with unit suffixes.

use photonstat_core::Time;

/// Parses a duration like `500ns`, `0.5us`, `5ms`, `60s` or a plain number
/// of nanoseconds. The value must be a non-negative whole number of
/// nanoseconds.
pub fn parse_duration(s: &str) -> Result<Time, String> {
    let s = s.trim();
    let (digits, scale_ns) = if let Some(p) = s.strip_suffix("ns") {
        (p, 1.0)
    } else if let Some(p) = s.strip_suffix("us") {
        (p, 1e3)
    } else if let Some(p) = s.strip_suffix("ms") {
        (p, 1e6)
    } else if let Some(p) = s.strip_suffix('s') {
        (p, 1e9)
    } else {
        (s, 1.0)
    };
    let value: f64 = digits
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a duration (expected e.g. 500ns, 0.5us, 5ms, 60s)"))?;
    let ns = value * scale_ns;
    if !ns.is_finite() || ns < 0.0 {
        return Err(format!("duration '{s}' must be non-negative and finite"));
    }
    let rounded = ns.round();
    if (ns - rounded).abs() > 1e-6 * rounded.max(1.0) {
        return Err(format!(
            "duration '{s}' is not a whole number of nanoseconds"
        ));
    }
    Ok(Time::from_ns(rounded as i64))
}
